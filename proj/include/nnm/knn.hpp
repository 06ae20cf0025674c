#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "nnm/dataset.hpp"
#include "nnm/distance.hpp"

namespace nnm {

struct Neighbor {
    std::size_t row;
    double distance;
    friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Exact top-k, ascending by (distance, row id).
struct KnnResult {
    std::size_t query = 0;
    std::vector<Neighbor> neighbors;
};

/// Per-query terms of the relative contrast plus the neighbor list.
struct QueryStats {
    double d_min = 0.0;
    double d_mean = 0.0;
    KnnResult knn;
    std::size_t scanned = 0;
    /// Scanned rows at distance exactly zero (duplicates of the query).
    std::size_t zero_distance_count = 0;
};

struct ScanOptions {
    /// 0 = resolve_workers() default.
    std::size_t workers = 0;
    /// nullptr = kernels::active().
    const kernels::KernelSet* kernels = nullptr;
};

/// Exact k nearest rows to `query`. Ties go to the smaller row id.
KnnResult knn_search(const VectorDataset& ds, std::span<const float> query, std::size_t k,
                     DistanceKind kind, std::optional<std::size_t> exclude = std::nullopt,
                     const ScanOptions& options = {});

/// One full pass per query collecting d_min, d_mean and the k nearest rows.
///
/// Work is split across queries only; each query's rows are consumed in
/// ascending order, so results are bitwise identical for any worker count.
std::vector<QueryStats> query_scan_stats(const VectorDataset& ds, const QuerySet& queries,
                                         std::size_t k, DistanceKind kind,
                                         const ScanOptions& options = {});

}  // namespace nnm
