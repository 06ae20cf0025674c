// Command-line front end. Exit codes: 0 success, 2 bad arguments or input
// files, 3 data for which the requested quantity is undefined.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "nnm/dataset.hpp"
#include "nnm/error.hpp"
#include "nnm/experiment.hpp"
#include "nnm/knn.hpp"
#include "nnm/metrics.hpp"
#include "nnm/pca.hpp"
#include "nnm/report.hpp"
#include "nnm/synth.hpp"

namespace fs = std::filesystem;
using namespace nnm;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitDegenerate = 3;

enum class OutFormat { json, csv };

OutFormat format_for(const fs::path& out) {
    const auto ext = out.extension().string();
    if (ext == ".json") return OutFormat::json;
    if (ext == ".csv") return OutFormat::csv;
    throw ConfigError("--out must end in .json or .csv, got '" + out.string() + "'");
}

void emit_text(const std::string& out, const std::string& text) {
    if (out.empty() || out == "-") {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
    } else {
        write_text(out, text);
    }
}

// Rows go to --out as CSV or JSON. Without --out, stdout gets CSV, or JSON
// when there is a summary (`extra`) to report. With a CSV file the summary
// is printed to stdout.
void emit_rows(const std::vector<ReportRow>& rows, const std::string& out, bool timing,
               nlohmann::json extra = nullptr) {
    const bool json = out.empty() ? !extra.is_null() : format_for(out) == OutFormat::json;
    if (json) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : rows) arr.push_back(to_json(r, timing));
        nlohmann::json doc = extra.is_null() ? arr : nlohmann::json{{"rows", arr}};
        if (!extra.is_null()) doc.update(extra);
        emit_text(out, doc.dump(2));
        return;
    }
    emit_text(out, format_csv(rows, {timing}));
    if (!extra.is_null()) std::cout << extra.dump(2) << '\n';
}

std::vector<DistanceKind> parse_kinds(const std::vector<std::string>& names) {
    std::vector<DistanceKind> kinds;
    for (const auto& n : names) kinds.push_back(parse_distance_kind(n));
    return kinds;
}

struct SvgOptions {
    std::string path;
    std::string x = "dim";
    std::string y = "rc";
    std::string series = "kind";

    void add_to(CLI::App* app, const std::string& default_x) {
        x = default_x;
        app->add_option("--svg", path, "Also write a line chart to this SVG file");
        app->add_option("--svg-x", x, "Report field on the x axis")->capture_default_str();
        app->add_option("--svg-y", y, "Report field on the y axis")->capture_default_str();
        app->add_option("--svg-series", series, "Report field splitting the lines")
            ->capture_default_str();
    }
    void emit(const std::vector<ReportRow>& rows) const {
        if (!path.empty()) emit_svg(rows, x, y, series, path);
    }
};

struct Common {
    std::uint64_t seed = 0;
    std::string out;
    std::size_t workers = 0;

    void add_to(CLI::App* app, bool with_workers = true) {
        app->add_option("--seed", seed, "Random seed")->capture_default_str();
        app->add_option("--out", out, "Output file (.json or .csv); stdout when omitted");
        if (with_workers) {
            app->add_option("--workers", workers, "Worker threads (0 = all cores, capped by NN_MEANING_THREADS)")
                ->capture_default_str();
        }
    }
};

std::vector<DatasetInput> file_inputs(const std::vector<std::string>& paths) {
    std::vector<DatasetInput> inputs;
    for (const auto& p : paths) inputs.push_back(DatasetInput::file(p));
    return inputs;
}

int run(int argc, char** argv) {
    CLI::App app{"Nearest-neighbor meaningfulness profiler: relative contrast and local intrinsic "
                 "dimensionality of vector datasets"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "nnmeaning 0.1.0");

    // synth
    auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset in native format");
    std::string synth_kind = "gaussian";
    SynthSpec spec;
    Common synth_common;
    synth->add_option("--kind", synth_kind, "gaussian | subspace | ball")->capture_default_str();
    synth->add_option("--n", spec.n, "Rows")->capture_default_str();
    synth->add_option("--d", spec.d, "Dimension")->capture_default_str();
    synth->add_option("--intrinsic", spec.intrinsic_dim, "Subspace dimension (subspace only)");
    synth->add_option("--noise", spec.noise_sigma, "Ambient noise sigma (subspace only)");
    synth_common.add_to(synth, false);
    synth->get_option("--out")->required()->description("Native dataset prefix or .json path");

    // profile
    auto* profile = app.add_subcommand("profile", "Relative contrast and LID of one dataset");
    std::string profile_dataset, profile_metric = "l2";
    ProfileOptions popts;
    std::size_t profile_k = 0;
    Common profile_common;
    SvgOptions profile_svg;
    profile->add_option("--dataset", profile_dataset, "fvecs, bvecs or native dataset")->required();
    profile->add_option("--metric", profile_metric, "l1 | l2 | angular")->capture_default_str();
    profile->add_option("--m", popts.m, "Sampled queries")->capture_default_str();
    profile->add_option("--k", profile_k, "LID neighborhood (default 100, or n/100 below 10^4 rows)");
    profile_common.add_to(profile);
    profile_svg.add_to(profile, "label");

    // knn
    auto* knn = app.add_subcommand("knn", "Exact k nearest neighbors");
    std::string knn_dataset, knn_queries, knn_metric = "l2", knn_payloads;
    std::size_t knn_sample = 0, knn_k = 10;
    bool knn_with_payloads = false;
    Common knn_common;
    knn->add_option("--dataset", knn_dataset, "Dataset to search")->required();
    auto* qf = knn->add_option("--query-file", knn_queries, "Query vectors (any dataset format)");
    auto* qs = knn->add_option("--sample", knn_sample, "Sample this many dataset rows as queries");
    qf->excludes(qs);
    knn->add_option("--k", knn_k, "Neighbors per query")->capture_default_str();
    knn->add_option("--metric", knn_metric, "l1 | l2 | angular")->capture_default_str();
    knn->add_flag("--with-payloads", knn_with_payloads,
                  "Attach payload records from the dataset's .payload sidecar");
    knn->add_option("--payloads", knn_payloads, "Payload file to attach (implies --with-payloads)");
    knn_common.add_to(knn);

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Profile a family of datasets across dimensions");
    SweepConfig scfg;
    std::string sweep_generator;
    std::size_t sweep_intrinsic = 0, sweep_k = 0;
    double sweep_noise = 0.0;
    std::vector<std::string> sweep_paths, sweep_metrics{"l2"};
    bool no_timing = false;
    Common sweep_common;
    SvgOptions sweep_svg;
    sweep->add_option("--dims", scfg.dims, "Dimensions, strictly increasing")->required()->delimiter(',');
    sweep->add_option("--generator", sweep_generator, "gaussian | subspace | ball");
    sweep->add_option("--datasets", sweep_paths, "One dataset file per dimension")->delimiter(',');
    sweep->add_option("--intrinsic", sweep_intrinsic, "Subspace dimension (subspace generator)");
    sweep->add_option("--noise", sweep_noise, "Ambient noise sigma (subspace generator)");
    sweep->add_option("--n", scfg.n, "Rows per generated dataset")->capture_default_str();
    sweep->add_option("--m", scfg.m, "Sampled queries")->capture_default_str();
    sweep->add_option("--k", sweep_k, "LID neighborhood");
    sweep->add_option("--metrics", sweep_metrics, "Metrics to evaluate")->delimiter(',')->capture_default_str();
    sweep->add_flag("--no-timing", no_timing, "Leave wall_time_ms empty so output is reproducible");
    sweep_common.add_to(sweep);
    sweep_svg.add_to(sweep, "dim");

    // compare-metrics
    auto* compare = app.add_subcommand("compare-metrics", "RC ranking stability across metrics");
    std::vector<std::string> compare_paths, compare_metrics{"l1", "l2", "angular"};
    ProfileOptions copts;
    std::size_t compare_k = 0;
    Common compare_common;
    SvgOptions compare_svg;
    compare->add_option("--datasets", compare_paths, "At least three dataset files")->required()->delimiter(',');
    compare->add_option("--metrics", compare_metrics, "At least two metrics")->delimiter(',')->capture_default_str();
    compare->add_option("--m", copts.m, "Sampled queries")->capture_default_str();
    compare->add_option("--k", compare_k, "LID neighborhood");
    compare_common.add_to(compare);
    compare_svg.add_to(compare, "label");

    // homogeneity
    auto* homog = app.add_subcommand("homogeneity", "Rank agreement of RC and median LID");
    std::vector<std::string> homog_paths;
    std::string homog_metric = "l2";
    ProfileOptions hopts;
    std::size_t homog_k = 0;
    Common homog_common;
    SvgOptions homog_svg;
    homog->add_option("--datasets", homog_paths, "At least three dataset files")->required()->delimiter(',');
    homog->add_option("--metric", homog_metric, "l1 | l2 | angular")->capture_default_str();
    homog->add_option("--m", hopts.m, "Sampled queries")->capture_default_str();
    homog->add_option("--k", homog_k, "LID neighborhood");
    homog_common.add_to(homog);
    homog_svg.add_to(homog, "label");

    // pca
    auto* pca = app.add_subcommand("pca", "Project a dataset onto its principal axes");
    std::string pca_dataset, pca_model;
    std::size_t pca_dim = 0;
    Common pca_common;
    pca->add_option("--dataset", pca_dataset, "Input dataset")->required();
    pca->add_option("--out-dim", pca_dim, "Output dimension")->required();
    pca->add_option("--save-model", pca_model, "Write the fitted model as JSON");
    pca_common.add_to(pca);
    pca->get_option("--out")->required()->description("Native dataset prefix or .json path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    if (synth->parsed()) {
        spec.kind = parse_synth_kind(synth_kind);
        spec.seed = synth_common.seed;
        const auto ds = generate(spec);
        save_native(ds, synth_common.out);
        std::cerr << "wrote " << ds.count() << " x " << ds.dim() << " dataset '" << ds.name() << "'\n";
        return 0;
    }

    if (profile->parsed()) {
        popts.seed = profile_common.seed;
        popts.workers = profile_common.workers;
        if (profile_k) popts.k = profile_k;
        const auto kind = parse_distance_kind(profile_metric);
        const auto input = DatasetInput::file(profile_dataset);
        const auto result = run_profile(input, kind, popts);
        const std::vector<ReportRow> rows{result.row};
        if (!profile_common.out.empty() && format_for(profile_common.out) == OutFormat::csv) {
            emit_text(profile_common.out, format_csv(rows));
        } else {
            const nlohmann::json doc{{"row", to_json(result.row)},
                                     {"rc_report", to_json(result.rc)},
                                     {"lid_report", to_json(result.lid)}};
            emit_text(profile_common.out, doc.dump(2));
        }
        profile_svg.emit(rows);
        return 0;
    }

    if (knn->parsed()) {
        const auto ds = load_dataset(knn_dataset);
        const auto kind = parse_distance_kind(knn_metric);
        if (knn_queries.empty() && knn_sample == 0) {
            throw ConfigError("knn needs --query-file or --sample");
        }
        const QuerySet queries = [&] {
            if (!knn_queries.empty()) {
                const auto q = load_dataset(knn_queries);
                return QuerySet::external(std::vector<float>(q.data().begin(), q.data().end()), q.dim());
            }
            return sample_queries(ds, knn_sample, knn_common.seed);
        }();
        const auto stats = query_scan_stats(ds, queries, knn_k, kind, {knn_common.workers, nullptr});

        std::optional<PayloadStore> payloads;
        if (!knn_payloads.empty()) {
            payloads = load_payloads(knn_payloads);
        } else if (knn_with_payloads) {
            payloads = load_payloads(native_paths(knn_dataset).payload);
        }
        if (payloads) payloads->check_attached(ds);

        nlohmann::json arr = nlohmann::json::array();
        for (const auto& s : stats) {
            auto j = to_json(s.knn);
            if (payloads) {
                std::vector<std::size_t> ids;
                for (const auto& nb : s.knn.neighbors) ids.push_back(nb.row);
                j["payloads"] = retrieve_payloads(*payloads, ids);
            }
            arr.push_back(std::move(j));
        }
        if (!knn_common.out.empty() && format_for(knn_common.out) != OutFormat::json) {
            throw ConfigError("knn results are written as JSON");
        }
        emit_text(knn_common.out, arr.dump(2));
        return 0;
    }

    if (sweep->parsed()) {
        scfg.seed = sweep_common.seed;
        scfg.workers = sweep_common.workers;
        scfg.kinds = parse_kinds(sweep_metrics);
        if (sweep_k) scfg.k = sweep_k;
        if (!sweep_generator.empty()) {
            SynthSpec g;
            g.kind = parse_synth_kind(sweep_generator);
            g.intrinsic_dim = sweep_intrinsic;
            g.noise_sigma = sweep_noise;
            scfg.generator = g;
        }
        for (const auto& p : sweep_paths) scfg.dataset_paths.emplace_back(p);
        const auto rows = run_dim_sweep(scfg);
        emit_rows(rows, sweep_common.out, !no_timing);
        sweep_svg.emit(rows);
        return 0;
    }

    if (compare->parsed()) {
        copts.seed = compare_common.seed;
        copts.workers = compare_common.workers;
        if (compare_k) copts.k = compare_k;
        const auto result =
            run_metric_comparison(file_inputs(compare_paths), parse_kinds(compare_metrics), copts);
        nlohmann::json taus = nlohmann::json::array();
        for (const auto& t : result.rank_stability) taus.push_back(to_json(t));
        emit_rows(result.rows, compare_common.out, true, {{"rank_stability", taus}});
        compare_svg.emit(result.rows);
        return 0;
    }

    if (homog->parsed()) {
        hopts.seed = homog_common.seed;
        hopts.workers = homog_common.workers;
        if (homog_k) hopts.k = homog_k;
        const auto result =
            run_homogeneity(file_inputs(homog_paths), parse_distance_kind(homog_metric), hopts);
        emit_rows(result.rows, homog_common.out, true,
                  {{"correlation", to_json(result.correlation)}});
        homog_svg.emit(result.rows);
        return 0;
    }

    if (pca->parsed()) {
        const auto ds = load_dataset(pca_dataset);
        const auto model = pca_fit(ds, pca_dim, pca_common.seed);
        const auto projected = pca_project(model, ds, pca_common.workers);
        save_native(projected, pca_common.out);
        if (!pca_model.empty()) save_pca_model(model, pca_model);
        std::cerr << "projected " << ds.count() << " rows from " << ds.dim() << " to " << pca_dim
                  << " dimensions\n";
        return 0;
    }
    return kExitConfig;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const DegenerateDataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDegenerate;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
