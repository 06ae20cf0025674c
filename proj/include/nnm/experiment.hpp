#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nnm/dataset.hpp"
#include "nnm/distance.hpp"
#include "nnm/metrics.hpp"
#include "nnm/synth.hpp"

namespace nnm {

inline constexpr std::size_t kDefaultQueries = 500;
inline constexpr std::size_t kDefaultSyntheticRows = 100'000;

/// One measured (dataset, metric) cell.
struct ReportRow {
    std::string label;
    std::size_t dim = 0;
    std::size_t n = 0;
    DistanceKind kind = DistanceKind::l2;
    std::size_t m = 0;
    std::size_t k = 0;
    double rc = 0.0;
    double e_dmean = 0.0;
    double e_dmin = 0.0;
    double lid_median = 0.0;
    double lid_mean = 0.0;
    std::size_t zero_min_count = 0;
    std::uint64_t seed = 0;
    double wall_time_ms = 0.0;
};

/// A dataset to profile: a file, a generator spec, or data already in memory.
class DatasetInput {
public:
    static DatasetInput file(std::filesystem::path path, std::string label = {});
    static DatasetInput synthetic(SynthSpec spec, std::string label = {});
    static DatasetInput in_memory(VectorDataset ds, std::string label = {});

    const std::string& label() const noexcept { return label_; }
    VectorDataset load() const;

private:
    DatasetInput(std::string label, std::variant<std::filesystem::path, SynthSpec, VectorDataset> src)
        : label_(std::move(label)), source_(std::move(src)) {}

    std::string label_;
    std::variant<std::filesystem::path, SynthSpec, VectorDataset> source_;
};

struct ProfileOptions {
    std::size_t m = kDefaultQueries;
    /// LID neighborhood; default_lid_k(n) when unset.
    std::optional<std::size_t> k;
    std::uint64_t seed = 0;
    /// 0 = resolve_workers() default.
    std::size_t workers = 0;
};

struct ProfileResult {
    ReportRow row;
    RcReport rc;
    LidReport lid;
};

/// sample_queries -> query_scan_stats -> relative_contrast + LID, one scan.
/// Errors are rethrown with the failing stage prefixed to the message.
ProfileResult run_profile(const VectorDataset& ds, DistanceKind kind,
                          const ProfileOptions& options, const std::string& label = {});
ProfileResult run_profile(const DatasetInput& input, DistanceKind kind,
                          const ProfileOptions& options);

struct SweepConfig {
    std::vector<std::size_t> dims;
    std::size_t n = kDefaultSyntheticRows;
    std::size_t m = kDefaultQueries;
    std::optional<std::size_t> k;
    std::vector<DistanceKind> kinds{DistanceKind::l2};
    std::uint64_t seed = 0;
    /// Generator template; its n, d and seed are overridden per cell.
    std::optional<SynthSpec> generator;
    /// Alternative to `generator`: one dataset file per entry of `dims`.
    std::vector<std::filesystem::path> dataset_paths;
    std::size_t workers = 0;

    void validate() const;
};

/// One row per (dim, kind), ordered by dim then by the order of `kinds`.
std::vector<ReportRow> run_dim_sweep(const SweepConfig& config);

struct KindPairTau {
    DistanceKind a;
    DistanceKind b;
    /// Kendall tau-b between the RC columns; nullopt if one column is constant.
    std::optional<double> tau;
};

struct MetricComparison {
    std::vector<ReportRow> rows;  // dataset-major, kinds in the given order
    std::vector<KindPairTau> rank_stability;
};

MetricComparison run_metric_comparison(const std::vector<DatasetInput>& datasets,
                                       const std::vector<DistanceKind>& kinds,
                                       const ProfileOptions& options);

struct HomogeneityRun {
    std::vector<ReportRow> rows;
    HomogeneityResult correlation;
};

HomogeneityRun run_homogeneity(const std::vector<DatasetInput>& datasets, DistanceKind kind,
                               const ProfileOptions& options);

}  // namespace nnm
