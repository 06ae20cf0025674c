#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "nnm/dataset.hpp"
#include "nnm/kernels.hpp"

namespace nnm {

enum class DistanceKind { l1, l2, angular };

inline constexpr std::array<DistanceKind, 3> kAllDistanceKinds{
    DistanceKind::l1, DistanceKind::l2, DistanceKind::angular};

/// "l1" | "l2" | "angular"
std::string_view to_string(DistanceKind kind);
DistanceKind parse_distance_kind(std::string_view text);

/// Reference distance, straight index-order loops in f64.
///
/// Angular is the cosine distance 1 - u.v / (|u| |v|) with the cosine clamped
/// to [-1, 1], so the result lies in [0, 2]. Throws ConfigError on a
/// dimension mismatch and ZeroNormError on a zero vector under angular.
double distance(DistanceKind kind, std::span<const float> u, std::span<const float> v);

/// Turns a kernel reduction into a distance. `raw` is the L1 sum, the squared
/// L2 sum or the dot product; the norms are only read for angular.
double finish_distance(DistanceKind kind, double raw, double row_norm_sq, double query_norm_sq);

struct ScanEntry {
    std::size_t row;
    double distance;
};

/// Distances from `query` to every row in ascending row order, skipping
/// `exclude`. Uses the runtime-selected kernels unless a table is given.
std::vector<ScanEntry> scan_distances(DistanceKind kind, const VectorDataset& ds,
                                      std::span<const float> query,
                                      std::optional<std::size_t> exclude = std::nullopt);
std::vector<ScanEntry> scan_distances(DistanceKind kind, const VectorDataset& ds,
                                      std::span<const float> query,
                                      std::optional<std::size_t> exclude,
                                      const kernels::KernelSet& table);

/// Squared norms of every row, computed with `table` so they combine exactly
/// with the same table's dot products.
std::vector<double> row_norms_squared(const VectorDataset& ds, const kernels::KernelSet& table);

}  // namespace nnm
