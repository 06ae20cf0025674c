#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nnm/distance.hpp"
#include "nnm/knn.hpp"

namespace nnm {

/// Identifies what a report was measured on.
struct ProfileContext {
    std::size_t n = 0;
    std::size_t dim = 0;
    DistanceKind kind = DistanceKind::l2;
    std::uint64_t seed = 0;
};

/// Dataset-level relative contrast: E_q[D_mean] / E_q[D_min].
struct RcReport {
    double rc = 0.0;
    double e_dmean = 0.0;
    double e_dmin = 0.0;
    /// D_mean / D_min per query, only for queries with D_min > 0.
    std::vector<double> per_query_rc;
    std::size_t m = 0;
    std::size_t n = 0;
    std::size_t dim = 0;
    DistanceKind kind = DistanceKind::l2;
    std::uint64_t seed = 0;
    std::size_t zero_min_count = 0;
};

struct LidReport {
    std::vector<double> per_query_lid;
    double mean = 0.0;
    double median = 0.0;
    double p10 = 0.0;
    double p90 = 0.0;
    std::size_t k_used = 0;
    std::size_t skipped = 0;
    std::size_t m = 0;
    std::size_t n = 0;
    std::size_t dim = 0;
    DistanceKind kind = DistanceKind::l2;
    std::uint64_t seed = 0;
};

/// Ratio of expectations over the queries (not the mean of per-query ratios).
/// Throws UndefinedContrastError when every query has D_min = 0.
RcReport relative_contrast(std::span<const QueryStats> stats, const ProfileContext& context);

/// Maximum-likelihood LID from sorted neighbor distances r_1 <= ... <= r_k:
///   -1 / ((1/k) * sum_i ln(r_i / r_k)).
/// Returns nullopt when every r_i equals r_k (the estimate is infinite).
/// Throws ConfigError for k < 2, unsorted input or any r_i <= 0.
std::optional<double> lid_mle(std::span<const double> distances);

/// x f(x) / F(x) for a distance law with CDF F and density f.
double lid_closed_form(const std::function<double(double)>& cdf,
                       const std::function<double(double)>& pdf, double x);

/// Per-query MLE over each query's neighbor list with zero distances dropped.
/// Queries left with fewer than two distances, or with all distances equal,
/// are skipped and counted. Throws DegenerateDataError if all are skipped.
LidReport lid_from_stats(std::span<const QueryStats> stats, const ProfileContext& context);

/// Scans `queries` for k neighbors each and estimates LID around every query.
LidReport lid_profile(const VectorDataset& ds, const QuerySet& queries, std::size_t k,
                      DistanceKind kind, const ScanOptions& options = {});

/// Default LID neighborhood: 100 when n >= 10^4, else max(2, n / 100).
std::size_t default_lid_k(std::size_t n);

/// Linear-interpolated quantile of already sorted values, q in [0, 1].
double sorted_quantile(std::span<const double> sorted, double q);

struct HomogeneityRow {
    std::string label;
    double rc = 0.0;
    double lid_median = 0.0;
};

struct HomogeneityResult {
    /// nullopt when a column is constant across datasets.
    std::optional<double> spearman;
    std::optional<double> kendall;
    bool constant_input() const { return !spearman || !kendall; }
};

/// Rank agreement between RC and median LID across datasets. Strongly
/// negative values mean both measures order the datasets the same way.
HomogeneityResult rc_lid_homogeneity(std::span<const HomogeneityRow> rows);

}  // namespace nnm
