// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nnm/dataset.hpp"
#include "nnm/error.hpp"
#include "nnm/experiment.hpp"
#include "nnm/knn.hpp"
#include "nnm/metrics.hpp"
#include "nnm/parallel.hpp"
#include "nnm/pca.hpp"
#include "nnm/rank.hpp"
#include "nnm/report.hpp"
#include "nnm/synth.hpp"
#include "test_support.hpp"

using namespace nnm;

namespace {

constexpr std::uint64_t kSeed = 20240611;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) {
    return std::chrono::duration<double>(Clock::now() - t).count();
}

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

int failures = 0;

void run(int id, const char* title, const std::function<void(Outcome&)>& body) {
    Outcome out;
    const auto start = Clock::now();
    try {
        body(out);
    } catch (const std::exception& e) {
        out.pass = false;
        out.detail << " [exception: " << e.what() << "]";
    }
    if (!out.pass) ++failures;
    std::printf("%s criterion %d (%s):%s (%.1f s)\n", out.pass ? "PASS" : "FAIL", id, title,
                out.detail.str().c_str(), seconds_since(start));
    std::fflush(stdout);
}

// Profiles of the Gaussian family at n = 1e5, m = 500, shared by criteria 1, 2, 7, 8.
struct GaussianSuite {
    std::map<std::pair<std::size_t, DistanceKind>, ReportRow> rows;

    const ReportRow& at(std::size_t d, DistanceKind kind) const { return rows.at({d, kind}); }

    static GaussianSuite build() {
        const std::vector<std::size_t> l2_dims{16, 32, 64, 128, 384, 512, 768, 1024, 2048};
        const std::vector<std::size_t> l1_dims{16, 32, 64, 128, 384, 1024};
        GaussianSuite suite;
        const ProfileOptions opts{kDefaultQueries, std::nullopt, kSeed, 0};
        for (std::size_t d : l2_dims) {
            const auto ds = gaussian_dataset({SynthKind::gaussian, kDefaultSyntheticRows, d, 0, 0.0, kSeed});
            suite.rows[{d, DistanceKind::l2}] = run_profile(ds, DistanceKind::l2, opts).row;
            if (std::find(l1_dims.begin(), l1_dims.end(), d) != l1_dims.end()) {
                suite.rows[{d, DistanceKind::l1}] = run_profile(ds, DistanceKind::l1, opts).row;
            }
            std::printf("  gaussian d=%zu profiled\n", d);
            std::fflush(stdout);
        }
        return suite;
    }
};

const std::vector<std::size_t> kHomogeneityDims{16, 32, 64, 128, 384, 1024};

double rc_of(const VectorDataset& ds, DistanceKind kind, std::size_t m, std::uint64_t seed) {
    const auto stats = query_scan_stats(ds, sample_queries(ds, m, seed), 1, kind);
    return relative_contrast(stats, {ds.count(), ds.dim(), kind, seed}).rc;
}

VectorDataset rescale_rows(const VectorDataset& ds, const std::vector<float>& factor) {
    std::vector<float> out(ds.data().begin(), ds.data().end());
    for (std::size_t i = 0; i < ds.count(); ++i) {
        for (std::size_t j = 0; j < ds.dim(); ++j) out[i * ds.dim() + j] *= factor[i];
    }
    return VectorDataset(ds.name() + "-scaled", ds.dim(), std::move(out), ds.source());
}

}  // namespace

int main() {
    std::printf("kernels: %s, workers: %zu\n", kernels::active().name, resolve_workers());
    std::fflush(stdout);

    const auto suite_start = Clock::now();
    GaussianSuite suite;
    bool suite_ok = true;
    std::string suite_error;
    try {
        suite = GaussianSuite::build();
    } catch (const std::exception& e) {
        suite_ok = false;
        suite_error = e.what();
    }
    const double suite_seconds = seconds_since(suite_start);
    auto need_suite = [&](Outcome& o) {
        if (!suite_ok) throw std::runtime_error("gaussian suite failed: " + suite_error);
        (void)o;
    };

    run(1, "Gaussian RC collapse", [&](Outcome& o) {
        need_suite(o);
        const double r16 = suite.at(16, DistanceKind::l2).rc;
        const double r128 = suite.at(128, DistanceKind::l2).rc;
        const double r1024 = suite.at(1024, DistanceKind::l2).rc;
        const double r2048 = suite.at(2048, DistanceKind::l2).rc;
        const double drop128 = 1.0 - (r128 - 1.0) / (r16 - 1.0);
        const double drop1024 = 1.0 - (r1024 - 1.0) / (r16 - 1.0);
        o.detail << " rc16=" << r16 << " rc128=" << r128 << " rc1024=" << r1024
                 << " rc2048=" << r2048 << " drop16->128=" << drop128
                 << " drop16->1024=" << drop1024 << " suite_time_s=" << suite_seconds;
        o.require(r16 >= 2.0, "rc(16) >= 2.0");
        o.require(r128 < r16, "rc(128) < rc(16)");
        o.require(r1024 < r128, "rc(1024) < rc(128)");
        o.require(drop128 >= 0.5, "rc-1 falls >= 50% from 16 to 128");
        o.require(drop1024 >= 0.9, "rc-1 falls >= 90% from 16 to 1024");
        o.require(r2048 <= 1.08, "rc(2048) <= 1.08");
        o.require(suite_seconds <= 600.0, "suite within 10 minutes");
    });

    run(2, "convergence band", [&](Outcome& o) {
        need_suite(o);
        const double r512 = suite.at(512, DistanceKind::l2).rc;
        const double r768 = suite.at(768, DistanceKind::l2).rc;
        o.detail << " rc512=" << r512 << " rc768=" << r768;
        o.require(r512 <= 1.15, "rc(512) <= 1.15");
        o.require(r768 <= 1.12, "rc(768) <= 1.12");
    });

    run(3, "exact kNN oracle equivalence", [&](Outcome& o) {
        const auto start = Clock::now();
        std::mt19937_64 gen(kSeed);
        std::size_t compared = 0, mismatches = 0;
        for (int inst = 0; inst < 50; ++inst) {
            const std::size_t n = 21 + gen() % 480;
            const std::size_t d = 1 + gen() % 32;
            const std::size_t k = 1 + gen() % 20;
            const auto ds = test::random_dataset(n, d, gen());
            const std::size_t qi = gen() % n;
            for (auto kind : kAllDistanceKinds) {
                const auto got = knn_search(ds, ds.row(qi), k, kind, qi);
                const auto want = test::oracle_sorted(kind, ds, ds.row(qi), qi);
                ++compared;
                bool same = got.neighbors.size() == k;
                for (std::size_t i = 0; same && i < k; ++i) same = got.neighbors[i].row == want[i].row;
                if (!same) ++mismatches;
            }
        }
        const double secs = seconds_since(start);
        o.detail << " instances=50 comparisons=" << compared << " mismatches=" << mismatches
                 << " time_s=" << secs;
        o.require(mismatches == 0, "ids and order equal the oracle");
        o.require(secs <= 10.0, "runtime <= 10 s");
    });

    run(4, "LID calibration", [&](Outcome& o) {
        double worst = 0.0;
        for (double p : {1.0, 2.5, 8.0}) {
            for (double x : {0.25, 0.5, 1.0}) {
                const double v = lid_closed_form([p](double t) { return std::pow(t, p); },
                                                 [p](double t) { return p * std::pow(t, p - 1.0); }, x);
                worst = std::max(worst, std::fabs(v - p));
            }
        }
        o.detail << " closed_form_max_err=" << worst;
        o.require(worst <= 1e-9, "closed form returns p to 1e-9");
        for (std::size_t d : {2u, 4u, 8u}) {
            const auto ds = uniform_ball({SynthKind::uniform_ball, 20000, d, 0, 0.0, kSeed + d});
            const auto r = lid_profile(ds, sample_queries(ds, kDefaultQueries, kSeed), 50, DistanceKind::l2);
            o.detail << " ball" << d << "=" << r.median;
            o.require(std::fabs(r.median - double(d)) <= 0.25 * double(d),
                      "ball d=" + std::to_string(d) + " within 25%");
        }
        const auto sub = subspace_gaussian({SynthKind::subspace_gaussian, 20000, 128, 4, 0.0, kSeed});
        const auto r = lid_profile(sub, sample_queries(sub, kDefaultQueries, kSeed), 50, DistanceKind::l2);
        o.detail << " subspace4in128=" << r.median;
        o.require(std::fabs(r.median - 4.0) <= 1.0, "subspace within 4 +- 1");
    });

    run(5, "RC is a ratio of expectations", [&](Outcome& o) {
        std::vector<QueryStats> s(2);
        s[0].d_min = 1;
        s[0].d_mean = 4;
        s[1].d_min = 2;
        s[1].d_mean = 2;
        const auto r = relative_contrast(s, {});
        o.detail << " rc=" << r.rc;
        o.require(r.rc == 2.0, "rc == 2.0");
    });

    run(6, "scale invariance", [&](Outcome& o) {
        const auto ds = gaussian_dataset({SynthKind::gaussian, 20000, 32, 0, 0.0, kSeed});
        double worst = 0.0;
        for (auto kind : {DistanceKind::l1, DistanceKind::l2}) {
            const double base = rc_of(ds, kind, 200, kSeed);
            for (float c : {0.001f, 1000.0f}) {
                const double v = rc_of(rescale_rows(ds, std::vector<float>(ds.count(), c)), kind, 200, kSeed);
                worst = std::max(worst, std::fabs(v - base) / base);
            }
        }
        std::mt19937_64 gen(kSeed);
        std::uniform_real_distribution<double> logu(std::log(0.01), std::log(100.0));
        std::vector<float> f(ds.count());
        for (auto& v : f) v = static_cast<float>(std::exp(logu(gen)));
        const double base = rc_of(ds, DistanceKind::angular, 200, kSeed);
        const double ang = rc_of(rescale_rows(ds, f), DistanceKind::angular, 200, kSeed);
        const double ang_err = std::fabs(ang - base) / base;
        o.detail << " l1_l2_max_rel_err=" << worst << " angular_rel_err=" << ang_err;
        o.require(worst <= 1e-6, "L1/L2 rc unchanged to 1e-6");
        o.require(ang_err <= 1e-6, "angular rc unchanged under per-row rescaling");
    });

    run(7, "ranking stability across metrics", [&](Outcome& o) {
        std::vector<DatasetInput> inputs;
        for (std::size_t k : {2u, 4u, 8u, 16u, 32u, 64u}) {
            inputs.push_back(DatasetInput::synthetic(
                {SynthKind::subspace_gaussian, 20000, 128, k, 0.0, kSeed}));
        }
        const auto cmp = run_metric_comparison(
            inputs, {DistanceKind::l1, DistanceKind::l2, DistanceKind::angular},
            {200, 20, kSeed, 0});
        for (const auto& t : cmp.rank_stability) {
            o.detail << " tau(" << to_string(t.a) << "," << to_string(t.b)
                     << ")=" << (t.tau ? std::to_string(*t.tau) : "undefined");
            o.require(t.tau && *t.tau >= 0.8, "tau >= 0.8 for every metric pair");
        }
        need_suite(o);
        std::vector<double> l1, l2;
        for (std::size_t d : kHomogeneityDims) {
            l1.push_back(suite.at(d, DistanceKind::l1).rc);
            l2.push_back(suite.at(d, DistanceKind::l2).rc);
        }
        const auto tau = kendall_tau_b(l1, l2);
        o.detail << " gaussian_tau(l1,l2)=" << (tau ? std::to_string(*tau) : "undefined");
        o.require(tau && *tau == 1.0, "tau(L1, L2) == 1 on the Gaussian suite");
    });

    run(8, "RC-LID homogeneity", [&](Outcome& o) {
        need_suite(o);
        std::vector<HomogeneityRow> rows;
        for (std::size_t d : kHomogeneityDims) {
            const auto& r = suite.at(d, DistanceKind::l2);
            rows.push_back({r.label, r.rc, r.lid_median});
            o.detail << " d" << d << "(rc=" << r.rc << ",lid=" << r.lid_median << ")";
        }
        const auto h = rc_lid_homogeneity(rows);
        o.detail << " spearman=" << (h.spearman ? std::to_string(*h.spearman) : "undefined");
        o.require(h.spearman && *h.spearman <= -0.9, "spearman <= -0.9");
    });

    run(9, "sweep determinism", [&](Outcome& o) {
        SweepConfig cfg;
        cfg.dims = {16, 64, 256};
        cfg.n = 10000;
        cfg.m = 100;
        cfg.kinds = {DistanceKind::l1, DistanceKind::l2, DistanceKind::angular};
        cfg.seed = kSeed;
        cfg.generator = SynthSpec{SynthKind::gaussian, 0, 0, 0, 0.0, 0};
        std::vector<std::string> outputs;
        const std::size_t max_workers = std::max<std::size_t>(4, resolve_workers());
        for (std::size_t w : {std::size_t{1}, std::size_t{1}, max_workers, max_workers}) {
            cfg.workers = w;
            outputs.push_back(format_csv(run_dim_sweep(cfg), {false}));
        }
        bool same = true;
        for (const auto& s : outputs) same = same && s == outputs[0];
        o.detail << " runs=4 workers={1,1," << max_workers << "," << max_workers
                 << "} bytes=" << outputs[0].size();
        o.require(same, "identical CSV bytes");
    });

    run(10, "PCA recovery", [&](Outcome& o) {
        const std::size_t n = 20000;
        const auto ambient = subspace_gaussian({SynthKind::subspace_gaussian, n, 512, 16, 0.0, kSeed});
        const auto projected = pca_project(pca_fit(ambient, 16, kSeed), ambient);
        const auto intrinsic = gaussian_dataset({SynthKind::gaussian, n, 16, 0, 0.0, kSeed});
        const double a = rc_of(projected, DistanceKind::l2, kDefaultQueries, kSeed);
        const double b = rc_of(intrinsic, DistanceKind::l2, kDefaultQueries, kSeed);
        const double rel = std::fabs(a - b) / b;
        o.detail << " rc_projected=" << a << " rc_intrinsic=" << b << " rel_diff=" << rel;
        o.require(rel <= 0.05, "rc within 5%");

        const auto ds = gaussian_dataset({SynthKind::gaussian, 2000, 48, 0, 0.0, kSeed});
        const auto full = pca_project(pca_fit(ds, 48, kSeed), ds);
        std::mt19937_64 gen(kSeed);
        double worst = 0.0;
        for (int t = 0; t < 5000; ++t) {
            const std::size_t i = gen() % ds.count(), j = gen() % ds.count();
            if (i == j) continue;
            const double before = distance(DistanceKind::l2, ds.row(i), ds.row(j));
            const double after = distance(DistanceKind::l2, full.row(i), full.row(j));
            worst = std::max(worst, std::fabs(after - before) / before);
        }
        o.detail << " full_rank_max_rel_err=" << worst;
        o.require(worst <= 1e-5, "full-rank projection preserves L2 to 1e-5");
    });

    run(11, "fvecs -> native round trip", [&](Outcome& o) {
        test::TempDir dir;
        const auto ds = test::random_dataset(1000, 64, kSeed, -1e3f, 1e3f);
        save_fvecs(ds, dir / "gen.fvecs");
        const auto from_fvecs = load_dataset(dir / "gen.fvecs");
        save_native(from_fvecs, dir / "gen");
        const auto back = load_dataset(dir / "gen.json");
        const bool same = back.count() == 1000 && back.dim() == 64 &&
                          std::memcmp(back.data().data(), ds.data().data(), ds.data().size_bytes()) == 0;
        o.detail << " n=" << back.count() << " d=" << back.dim();
        o.require(same, "bit-exact data");
    });

    std::printf("%s: %d criteria failed\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
    return failures == 0 ? 0 : 1;
}
