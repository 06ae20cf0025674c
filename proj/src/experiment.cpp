#include "nnm/experiment.hpp"

#include <chrono>

#include "nnm/error.hpp"
#include "nnm/knn.hpp"
#include "nnm/rank.hpp"

namespace nnm {

DatasetInput DatasetInput::file(std::filesystem::path path, std::string label) {
    if (label.empty()) label = path.stem().string();
    return {std::move(label), std::move(path)};
}

DatasetInput DatasetInput::synthetic(SynthSpec spec, std::string label) {
    if (label.empty()) label = spec.label();
    return {std::move(label), std::move(spec)};
}

DatasetInput DatasetInput::in_memory(VectorDataset ds, std::string label) {
    if (label.empty()) label = ds.name();
    return {std::move(label), std::move(ds)};
}

VectorDataset DatasetInput::load() const {
    struct Loader {
        VectorDataset operator()(const std::filesystem::path& p) const { return load_dataset(p); }
        VectorDataset operator()(const SynthSpec& s) const { return generate(s); }
        VectorDataset operator()(const VectorDataset& ds) const { return ds; }
    };
    try {
        return std::visit(Loader{}, source_);
    } catch (const Error&) {
        rethrow_with_context("load '" + label_ + "'");
    }
}

ProfileResult run_profile(const VectorDataset& ds, DistanceKind kind,
                          const ProfileOptions& options, const std::string& label) {
    const auto start = std::chrono::steady_clock::now();
    const std::size_t k = options.k.value_or(default_lid_k(ds.count()));
    const ProfileContext context{ds.count(), ds.dim(), kind, options.seed};

    QuerySet queries = [&] {
        try {
            return sample_queries(ds, options.m, options.seed);
        } catch (const Error&) {
            rethrow_with_context("sample queries");
        }
    }();
    std::vector<QueryStats> stats;
    try {
        stats = query_scan_stats(ds, queries, k, kind, {options.workers, nullptr});
    } catch (const Error&) {
        rethrow_with_context("scan");
    }

    ProfileResult result;
    try {
        result.rc = relative_contrast(stats, context);
    } catch (const Error&) {
        rethrow_with_context("relative contrast");
    }
    try {
        result.lid = lid_from_stats(stats, context);
    } catch (const Error&) {
        rethrow_with_context("lid");
    }

    ReportRow& row = result.row;
    row.label = label.empty() ? ds.name() : label;
    row.dim = ds.dim();
    row.n = ds.count();
    row.kind = kind;
    row.m = options.m;
    row.k = k;
    row.rc = result.rc.rc;
    row.e_dmean = result.rc.e_dmean;
    row.e_dmin = result.rc.e_dmin;
    row.lid_median = result.lid.median;
    row.lid_mean = result.lid.mean;
    row.zero_min_count = result.rc.zero_min_count;
    row.seed = options.seed;
    row.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return result;
}

ProfileResult run_profile(const DatasetInput& input, DistanceKind kind,
                          const ProfileOptions& options) {
    const VectorDataset ds = input.load();
    try {
        return run_profile(ds, kind, options, input.label());
    } catch (const Error&) {
        rethrow_with_context("'" + input.label() + "'");
    }
}

void SweepConfig::validate() const {
    if (dims.empty()) throw ConfigError("sweep needs at least one dimension");
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (dims[i] == 0) throw ConfigError("sweep dimensions must be positive");
        if (i > 0 && dims[i] <= dims[i - 1]) {
            throw ConfigError("sweep dimensions must be strictly increasing");
        }
    }
    if (kinds.empty()) throw ConfigError("sweep needs at least one metric");
    if (generator.has_value() == !dataset_paths.empty()) {
        throw ConfigError("sweep needs exactly one of a generator or per-dimension dataset files");
    }
    if (generator) {
        if (m == 0 || m > n) throw ConfigError("sweep query count must lie in [1, n]");
    } else if (dataset_paths.size() != dims.size()) {
        throw ConfigError("sweep needs one dataset file per dimension");
    }
}

std::vector<ReportRow> run_dim_sweep(const SweepConfig& config) {
    config.validate();
    const ProfileOptions options{config.m, config.k, config.seed, config.workers};
    std::vector<ReportRow> rows;
    rows.reserve(config.dims.size() * config.kinds.size());
    for (std::size_t i = 0; i < config.dims.size(); ++i) {
        const std::size_t dim = config.dims[i];
        DatasetInput input = [&] {
            if (config.generator) {
                SynthSpec spec = *config.generator;
                spec.n = config.n;
                spec.d = dim;
                spec.seed = config.seed;
                return DatasetInput::synthetic(spec);
            }
            return DatasetInput::file(config.dataset_paths[i]);
        }();
        const VectorDataset ds = input.load();
        if (ds.dim() != dim) {
            throw ConfigError("dataset '" + input.label() + "' has dimension " +
                              std::to_string(ds.dim()) + ", sweep expects " + std::to_string(dim));
        }
        for (DistanceKind kind : config.kinds) {
            try {
                rows.push_back(run_profile(ds, kind, options, input.label()).row);
            } catch (const Error&) {
                rethrow_with_context("sweep cell (dim=" + std::to_string(dim) +
                                     ", metric=" + std::string(to_string(kind)) + ")");
            }
        }
    }
    return rows;
}

MetricComparison run_metric_comparison(const std::vector<DatasetInput>& datasets,
                                       const std::vector<DistanceKind>& kinds,
                                       const ProfileOptions& options) {
    if (datasets.size() < 3) throw ConfigError("metric comparison needs at least three datasets");
    if (kinds.size() < 2) throw ConfigError("metric comparison needs at least two metrics");

    MetricComparison out;
    // rc_by_kind[k][i] = RC of dataset i under kinds[k]
    std::vector<std::vector<double>> rc_by_kind(kinds.size());
    for (const auto& input : datasets) {
        const VectorDataset ds = input.load();
        for (std::size_t k = 0; k < kinds.size(); ++k) {
            try {
                auto row = run_profile(ds, kinds[k], options, input.label()).row;
                rc_by_kind[k].push_back(row.rc);
                out.rows.push_back(std::move(row));
            } catch (const Error&) {
                rethrow_with_context("'" + input.label() + "' under " +
                                     std::string(to_string(kinds[k])));
            }
        }
    }
    for (std::size_t a = 0; a < kinds.size(); ++a) {
        for (std::size_t b = a + 1; b < kinds.size(); ++b) {
            out.rank_stability.push_back(
                {kinds[a], kinds[b], kendall_tau_b(rc_by_kind[a], rc_by_kind[b])});
        }
    }
    return out;
}

HomogeneityRun run_homogeneity(const std::vector<DatasetInput>& datasets, DistanceKind kind,
                               const ProfileOptions& options) {
    if (datasets.size() < 3) throw ConfigError("homogeneity needs at least three datasets");
    HomogeneityRun out;
    std::vector<HomogeneityRow> pairs;
    for (const auto& input : datasets) {
        auto row = run_profile(input, kind, options).row;
        pairs.push_back({row.label, row.rc, row.lid_median});
        out.rows.push_back(std::move(row));
    }
    out.correlation = rc_lid_homogeneity(pairs);
    return out;
}

}  // namespace nnm
