#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "nnm/error.hpp"
#include "nnm/report.hpp"
#include "test_support.hpp"

using namespace nnm;

namespace {

ReportRow row(std::string label, std::size_t dim, DistanceKind kind, double rc) {
    ReportRow r;
    r.label = std::move(label);
    r.dim = dim;
    r.n = 1000;
    r.kind = kind;
    r.m = 50;
    r.k = 10;
    r.rc = rc;
    r.e_dmean = rc * 0.1234567890123;
    r.e_dmin = 0.1234567890123;
    r.lid_median = 1.0 / 3.0;
    r.lid_mean = 2.0 / 3.0;
    r.zero_min_count = 2;
    r.seed = 18446744073709551615ull;
    r.wall_time_ms = 12.5;
    return r;
}

std::size_t count(const std::string& text, const std::string& needle) {
    std::size_t c = 0;
    for (auto p = text.find(needle); p != std::string::npos; p = text.find(needle, p + 1)) ++c;
    return c;
}

}  // namespace

TEST_CASE("csv: header plus one line per row") {
    const std::vector<ReportRow> rows{row("a", 16, DistanceKind::l2, 2.5), row("b", 32, DistanceKind::l2, 1.7)};
    const auto text = format_csv(rows);
    CHECK(std::count(text.begin(), text.end(), '\n') == 3);
    CHECK(text.rfind("label,dim,n,kind,m,k,rc,e_dmean,e_dmin,lid_median,lid_mean,zero_min_count,seed,wall_time_ms\n", 0) == 0);
}

TEST_CASE("csv round trip") {
    const std::vector<ReportRow> rows{row("plain", 16, DistanceKind::l1, 2.718281828459045),
                                      row("with, comma \"quoted\"", 1024, DistanceKind::angular, 1.0000001)};
    const auto back = parse_csv(format_csv(rows));
    REQUIRE(back.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(back[i].label == rows[i].label);
        CHECK(back[i].dim == rows[i].dim);
        CHECK(back[i].n == rows[i].n);
        CHECK(back[i].kind == rows[i].kind);
        CHECK(back[i].m == rows[i].m);
        CHECK(back[i].k == rows[i].k);
        CHECK(std::fabs(back[i].rc - rows[i].rc) <= 1e-9);
        CHECK(std::fabs(back[i].e_dmean - rows[i].e_dmean) <= 1e-9);
        CHECK(std::fabs(back[i].e_dmin - rows[i].e_dmin) <= 1e-9);
        CHECK(std::fabs(back[i].lid_median - rows[i].lid_median) <= 1e-9);
        CHECK(std::fabs(back[i].lid_mean - rows[i].lid_mean) <= 1e-9);
        CHECK(back[i].zero_min_count == rows[i].zero_min_count);
        CHECK(back[i].seed == rows[i].seed);
        CHECK(back[i].wall_time_ms == rows[i].wall_time_ms);
    }
}

TEST_CASE("csv without timing leaves the column empty") {
    const std::vector<ReportRow> rows{row("a", 16, DistanceKind::l2, 2.5)};
    auto other = rows;
    other[0].wall_time_ms = 999.0;
    const auto text = format_csv(rows, {false});
    CHECK(text == format_csv(other, {false}));
    CHECK(text.back() == '\n');
    CHECK(text[text.size() - 2] == ',');
    CHECK(parse_csv(text)[0].wall_time_ms == 0.0);
}

TEST_CASE("csv file helpers and errors") {
    test::TempDir dir;
    const std::vector<ReportRow> rows{row("a", 16, DistanceKind::l2, 2.5)};
    emit_csv(rows, dir / "r.csv");
    CHECK(read_csv(dir / "r.csv").size() == 1);
    CHECK_THROWS_AS(emit_csv(std::vector<ReportRow>{}, dir / "e.csv"), ConfigError);
    CHECK_THROWS_AS(parse_csv("nope\n"), FormatError);
    CHECK_THROWS_AS(parse_csv(""), FormatError);
    auto text = format_csv(rows);
    CHECK_THROWS_AS(parse_csv(text + "x,1\n"), FormatError);
    CHECK_THROWS_AS(read_csv(dir / "absent.csv"), FormatError);
}

TEST_CASE("svg: one polyline per metric") {
    std::vector<ReportRow> rows;
    for (std::size_t d : {16u, 128u, 1024u}) {
        rows.push_back(row("g", d, DistanceKind::l1, 3.0 / std::log2(d)));
        rows.push_back(row("g", d, DistanceKind::l2, 2.0 / std::log2(d)));
    }
    const auto svg = format_svg(rows, "dim", "rc", "kind");
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(count(svg, "<polyline") == 2);
    CHECK(count(svg, "data-series=\"l1\"") == 1);
    CHECK(count(svg, "data-series=\"l2\"") == 1);
    CHECK(svg.find("(log scale)") != std::string::npos);
    CHECK(count(svg, "<circle") == 6);

    const auto by_label = format_svg(rows, "label", "lid_median", "kind");
    CHECK(by_label.find("(log scale)") == std::string::npos);
}

TEST_CASE("svg: field errors") {
    const std::vector<ReportRow> rows{row("a", 16, DistanceKind::l2, 2.5)};
    CHECK_THROWS_AS(format_svg(rows, "dimension", "rc", "kind"), ConfigError);
    CHECK_THROWS_AS(format_svg(rows, "dim", "label", "kind"), ConfigError);
    CHECK_THROWS_AS(format_svg(rows, "dim", "rc", "colour"), ConfigError);
    CHECK_THROWS_AS(format_svg(std::vector<ReportRow>{}, "dim", "rc", "kind"), ConfigError);
}

TEST_CASE("json shapes") {
    const auto r = to_json(row("a", 16, DistanceKind::angular, 2.5));
    CHECK(r.at("kind") == "angular");
    CHECK(r.contains("wall_time_ms"));
    CHECK_FALSE(to_json(row("a", 16, DistanceKind::l2, 2.5), false).contains("wall_time_ms"));

    KnnResult knn{3, {{7, 0.5}, {2, 1.5}}};
    const auto j = to_json(knn);
    CHECK(j.at("query") == 3);
    CHECK(j.at("ids") == nlohmann::json::array({7, 2}));
    CHECK(j.at("dists") == nlohmann::json::array({0.5, 1.5}));

    const auto h = to_json(HomogeneityResult{std::nullopt, std::nullopt});
    CHECK(h.at("spearman").is_null());
    CHECK(h.at("constant_input") == true);

    const auto t = to_json(KindPairTau{DistanceKind::l1, DistanceKind::l2, 1.0});
    CHECK(t.at("a") == "l1");
    CHECK(t.at("tau_b") == 1.0);
}
