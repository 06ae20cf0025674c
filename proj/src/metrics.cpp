#include "nnm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nnm/error.hpp"
#include "nnm/rank.hpp"

namespace nnm {
namespace {

// Sum in sorted order so aggregates do not depend on query order.
double order_free_mean(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

}  // namespace

RcReport relative_contrast(std::span<const QueryStats> stats, const ProfileContext& context) {
    if (stats.empty()) throw ConfigError("relative contrast needs at least one query");
    std::vector<double> mins;
    std::vector<double> means;
    mins.reserve(stats.size());
    means.reserve(stats.size());

    RcReport report;
    for (const auto& s : stats) {
        if (!std::isfinite(s.d_min) || !std::isfinite(s.d_mean)) {
            throw DegenerateDataError("non-finite query distance statistics");
        }
        mins.push_back(s.d_min);
        means.push_back(s.d_mean);
        if (s.d_min > 0.0) {
            report.per_query_rc.push_back(s.d_mean / s.d_min);
        } else {
            ++report.zero_min_count;
        }
    }
    report.m = stats.size();
    report.n = context.n;
    report.dim = context.dim;
    report.kind = context.kind;
    report.seed = context.seed;
    report.e_dmean = order_free_mean(std::move(means));
    report.e_dmin = order_free_mean(std::move(mins));
    if (report.e_dmin <= 0.0) throw UndefinedContrastError(report.zero_min_count);
    report.rc = report.e_dmean / report.e_dmin;
    return report;
}

std::optional<double> lid_mle(std::span<const double> distances) {
    if (distances.size() < 2) throw ConfigError("LID estimate needs at least two distances");
    for (std::size_t i = 0; i < distances.size(); ++i) {
        if (!(distances[i] > 0.0) || !std::isfinite(distances[i])) {
            throw ConfigError("LID estimate requires positive finite distances");
        }
        if (i > 0 && distances[i] < distances[i - 1]) {
            throw ConfigError("LID estimate requires distances sorted non-decreasing");
        }
    }
    const double r_k = distances.back();
    double sum = 0.0;
    for (double r : distances) sum += std::log(r / r_k);
    if (sum == 0.0) return std::nullopt;
    return -static_cast<double>(distances.size()) / sum;
}

double lid_closed_form(const std::function<double(double)>& cdf,
                       const std::function<double(double)>& pdf, double x) {
    const double F = cdf(x);
    if (!(F > 0.0)) throw ConfigError("closed-form LID needs F(x) > 0");
    return x * pdf(x) / F;
}

double sorted_quantile(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw ConfigError("quantile of an empty list");
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

std::size_t default_lid_k(std::size_t n) {
    if (n >= 10000) return 100;
    return std::max<std::size_t>(2, n / 100);
}

LidReport lid_from_stats(std::span<const QueryStats> stats, const ProfileContext& context) {
    if (stats.empty()) throw ConfigError("LID profile needs at least one query");
    LidReport report;
    report.m = stats.size();
    report.n = context.n;
    report.dim = context.dim;
    report.kind = context.kind;
    report.seed = context.seed;
    report.k_used = stats.front().knn.neighbors.size();

    std::vector<double> r;
    for (const auto& s : stats) {
        r.clear();
        for (const auto& nb : s.knn.neighbors) {
            if (nb.distance > 0.0) r.push_back(nb.distance);
        }
        std::optional<double> lid;
        if (r.size() >= 2) lid = lid_mle(r);
        if (lid && std::isfinite(*lid)) {
            report.per_query_lid.push_back(*lid);
        } else {
            ++report.skipped;
        }
    }
    if (report.per_query_lid.empty()) {
        throw DegenerateDataError("LID undefined: all " + std::to_string(report.skipped) +
                                  " queries have degenerate neighborhoods");
    }
    std::vector<double> sorted = report.per_query_lid;
    std::sort(sorted.begin(), sorted.end());
    report.mean = order_free_mean(sorted);
    report.median = sorted_quantile(sorted, 0.5);
    report.p10 = sorted_quantile(sorted, 0.1);
    report.p90 = sorted_quantile(sorted, 0.9);
    return report;
}

LidReport lid_profile(const VectorDataset& ds, const QuerySet& queries, std::size_t k,
                      DistanceKind kind, const ScanOptions& options) {
    if (k < 2) throw ConfigError("LID neighborhood k must be at least 2");
    const auto stats = query_scan_stats(ds, queries, k, kind, options);
    return lid_from_stats(stats, {ds.count(), ds.dim(), kind, queries.seed()});
}

HomogeneityResult rc_lid_homogeneity(std::span<const HomogeneityRow> rows) {
    if (rows.size() < 3) throw ConfigError("homogeneity needs at least three datasets");
    std::vector<double> rc, lid;
    for (const auto& row : rows) {
        if (!std::isfinite(row.rc) || !std::isfinite(row.lid_median)) {
            throw ConfigError("homogeneity inputs must be finite (dataset '" + row.label + "')");
        }
        rc.push_back(row.rc);
        lid.push_back(row.lid_median);
    }
    return {spearman(rc, lid), kendall_tau_b(rc, lid)};
}

}  // namespace nnm
