#include "nnm/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "nnm/error.hpp"

namespace nnm {
namespace {

std::string shortest(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

std::vector<std::vector<std::string>> split_csv(std::string_view text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    bool any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        any = true;
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            fields.push_back(std::move(field));
            field.clear();
            records.push_back(std::move(fields));
            fields.clear();
            any = false;
        } else {
            field += c;
        }
    }
    if (quoted) throw FormatError("unterminated quoted CSV field");
    if (any) {
        fields.push_back(std::move(field));
        records.push_back(std::move(fields));
    }
    return records;
}

template <class T>
T parse_number(const std::string& s, const char* column) {
    T v{};
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw FormatError(std::string("bad value '") + s + "' in column " + column);
    }
    return v;
}

std::optional<double> numeric_field(const ReportRow& r, std::string_view name) {
    if (name == "dim") return static_cast<double>(r.dim);
    if (name == "n") return static_cast<double>(r.n);
    if (name == "m") return static_cast<double>(r.m);
    if (name == "k") return static_cast<double>(r.k);
    if (name == "rc") return r.rc;
    if (name == "e_dmean") return r.e_dmean;
    if (name == "e_dmin") return r.e_dmin;
    if (name == "lid_median") return r.lid_median;
    if (name == "lid_mean") return r.lid_mean;
    if (name == "zero_min_count") return static_cast<double>(r.zero_min_count);
    if (name == "seed") return static_cast<double>(r.seed);
    if (name == "wall_time_ms") return r.wall_time_ms;
    return std::nullopt;
}

bool is_field(std::string_view name) {
    return std::find(std::begin(kReportColumns), std::end(kReportColumns), name) !=
           std::end(kReportColumns);
}

std::string field_text(const ReportRow& r, std::string_view name) {
    if (name == "label") return r.label;
    if (name == "kind") return std::string(to_string(r.kind));
    return shortest(*numeric_field(r, name));
}

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string fixed(double v, int digits = 2) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(digits);
    os << v;
    return os.str();
}

std::string tick_label(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

}  // namespace

std::string format_csv(std::span<const ReportRow> rows, const CsvOptions& options) {
    std::string out;
    for (std::size_t c = 0; c < std::size(kReportColumns); ++c) {
        if (c) out += ',';
        out += kReportColumns[c];
    }
    out += '\n';
    for (const auto& r : rows) {
        out += csv_escape(r.label);
        out += ',' + std::to_string(r.dim);
        out += ',' + std::to_string(r.n);
        out += ',' + std::string(to_string(r.kind));
        out += ',' + std::to_string(r.m);
        out += ',' + std::to_string(r.k);
        out += ',' + shortest(r.rc);
        out += ',' + shortest(r.e_dmean);
        out += ',' + shortest(r.e_dmin);
        out += ',' + shortest(r.lid_median);
        out += ',' + shortest(r.lid_mean);
        out += ',' + std::to_string(r.zero_min_count);
        out += ',' + std::to_string(r.seed);
        out += ',';
        if (options.include_timing) out += shortest(r.wall_time_ms);
        out += '\n';
    }
    return out;
}

void write_text(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + path.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw ConfigError("failed writing " + path.string());
}

void emit_csv(std::span<const ReportRow> rows, const std::filesystem::path& path,
              const CsvOptions& options) {
    if (rows.empty()) throw ConfigError("no rows to write");
    write_text(path, format_csv(rows, options));
}

std::vector<ReportRow> parse_csv(std::string_view text) {
    const auto records = split_csv(text);
    if (records.empty()) throw FormatError("empty CSV");
    const auto& header = records.front();
    if (header.size() != std::size(kReportColumns) ||
        !std::equal(header.begin(), header.end(), std::begin(kReportColumns))) {
        throw FormatError("CSV header does not match the report columns");
    }
    std::vector<ReportRow> rows;
    for (std::size_t i = 1; i < records.size(); ++i) {
        const auto& f = records[i];
        if (f.size() == 1 && f[0].empty()) continue;
        if (f.size() != std::size(kReportColumns)) {
            throw FormatError("CSV line " + std::to_string(i + 1) + " has " +
                              std::to_string(f.size()) + " fields");
        }
        ReportRow r;
        r.label = f[0];
        r.dim = parse_number<std::size_t>(f[1], "dim");
        r.n = parse_number<std::size_t>(f[2], "n");
        r.kind = parse_distance_kind(f[3]);
        r.m = parse_number<std::size_t>(f[4], "m");
        r.k = parse_number<std::size_t>(f[5], "k");
        r.rc = parse_number<double>(f[6], "rc");
        r.e_dmean = parse_number<double>(f[7], "e_dmean");
        r.e_dmin = parse_number<double>(f[8], "e_dmin");
        r.lid_median = parse_number<double>(f[9], "lid_median");
        r.lid_mean = parse_number<double>(f[10], "lid_mean");
        r.zero_min_count = parse_number<std::size_t>(f[11], "zero_min_count");
        r.seed = parse_number<std::uint64_t>(f[12], "seed");
        r.wall_time_ms = f[13].empty() ? 0.0 : parse_number<double>(f[13], "wall_time_ms");
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<ReportRow> read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str());
}

std::string format_svg(std::span<const ReportRow> rows, std::string_view x, std::string_view y,
                       std::string_view series) {
    if (rows.empty()) throw ConfigError("no rows to plot");
    for (auto f : {x, y, series}) {
        if (!is_field(f)) throw ConfigError("unknown report field '" + std::string(f) + "'");
    }
    if (!numeric_field(rows.front(), y)) {
        throw ConfigError("y field '" + std::string(y) + "' is not numeric");
    }

    const bool x_numeric = numeric_field(rows.front(), x).has_value();
    const bool x_log = x == "dim";
    std::vector<std::string> categories;
    auto x_of = [&](const ReportRow& r) -> double {
        if (x_numeric) {
            const double v = *numeric_field(r, x);
            return x_log ? std::log10(std::max(v, 1e-300)) : v;
        }
        const auto text = field_text(r, x);
        const auto it = std::find(categories.begin(), categories.end(), text);
        return static_cast<double>(it - categories.begin());
    };
    if (!x_numeric) {
        for (const auto& r : rows) {
            const auto text = field_text(r, x);
            if (std::find(categories.begin(), categories.end(), text) == categories.end()) {
                categories.push_back(text);
            }
        }
    }

    // Series in order of first appearance.
    std::vector<std::string> names;
    std::map<std::string, std::vector<std::pair<double, double>>> points;
    double x_lo = INFINITY, x_hi = -INFINITY, y_lo = INFINITY, y_hi = -INFINITY;
    for (const auto& r : rows) {
        const auto key = field_text(r, series);
        if (!points.count(key)) names.push_back(key);
        const double px = x_of(r), py = *numeric_field(r, y);
        points[key].emplace_back(px, py);
        x_lo = std::min(x_lo, px);
        x_hi = std::max(x_hi, px);
        y_lo = std::min(y_lo, py);
        y_hi = std::max(y_hi, py);
    }
    if (x_hi == x_lo) {
        x_lo -= 0.5;
        x_hi += 0.5;
    }
    if (y_hi == y_lo) {
        const double pad = std::max(std::fabs(y_hi) * 0.05, 0.5);
        y_lo -= pad;
        y_hi += pad;
    } else {
        const double pad = (y_hi - y_lo) * 0.05;
        y_lo -= pad;
        y_hi += pad;
    }

    constexpr double W = 720, H = 480, L = 70, R = 170, T = 40, B = 60;
    const double pw = W - L - R, ph = H - T - B;
    auto sx = [&](double v) { return L + (v - x_lo) / (x_hi - x_lo) * pw; };
    auto sy = [&](double v) { return T + (1.0 - (v - y_lo) / (y_hi - y_lo)) * ph; };
    static constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                               "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << L + pw / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
        << xml_escape(y) << " vs " << xml_escape(x) << (x_log ? " (log scale)" : "")
        << "</text>\n";
    svg << "<g stroke=\"black\">\n<line x1=\"" << L << "\" y1=\"" << T + ph << "\" x2=\""
        << L + pw << "\" y2=\"" << T + ph << "\"/>\n<line x1=\"" << L << "\" y1=\"" << T
        << "\" x2=\"" << L << "\" y2=\"" << T + ph << "\"/>\n</g>\n";

    // x ticks: categories, distinct dims on the log axis, else five even ticks
    std::vector<std::pair<double, std::string>> xticks;
    if (!x_numeric) {
        for (std::size_t i = 0; i < categories.size(); ++i) {
            xticks.emplace_back(static_cast<double>(i), categories[i]);
        }
    } else if (x_log) {
        std::vector<double> seen;
        for (const auto& r : rows) {
            const double v = *numeric_field(r, x);
            if (std::find(seen.begin(), seen.end(), v) == seen.end()) seen.push_back(v);
        }
        for (double v : seen) xticks.emplace_back(std::log10(v), tick_label(v));
    } else {
        for (int i = 0; i <= 4; ++i) {
            const double v = x_lo + (x_hi - x_lo) * i / 4.0;
            xticks.emplace_back(v, tick_label(v));
        }
    }
    svg << "<g class=\"x-ticks\" text-anchor=\"middle\">\n";
    for (const auto& [v, text] : xticks) {
        svg << "<text x=\"" << fixed(sx(v)) << "\" y=\"" << T + ph + 18 << "\">" << xml_escape(text)
            << "</text>\n";
    }
    svg << "</g>\n<g class=\"y-ticks\" text-anchor=\"end\">\n";
    for (int i = 0; i <= 4; ++i) {
        const double v = y_lo + (y_hi - y_lo) * i / 4.0;
        svg << "<text x=\"" << L - 6 << "\" y=\"" << fixed(sy(v) + 4) << "\">" << tick_label(v)
            << "</text>\n";
    }
    svg << "</g>\n";
    svg << "<text x=\"" << L + pw / 2 << "\" y=\"" << H - 16 << "\" text-anchor=\"middle\">"
        << xml_escape(x) << "</text>\n";
    svg << "<text transform=\"translate(18," << T + ph / 2
        << ") rotate(-90)\" text-anchor=\"middle\">" << xml_escape(y) << "</text>\n";

    for (std::size_t s = 0; s < names.size(); ++s) {
        auto pts = points[names[s]];
        std::stable_sort(pts.begin(), pts.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        const char* color = kPalette[s % std::size(kPalette)];
        svg << "<polyline data-series=\"" << xml_escape(names[s]) << "\" fill=\"none\" stroke=\""
            << color << "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i) svg << ' ';
            svg << fixed(sx(pts[i].first)) << ',' << fixed(sy(pts[i].second));
        }
        svg << "\"/>\n";
        for (const auto& [px, py] : pts) {
            svg << "<circle cx=\"" << fixed(sx(px)) << "\" cy=\"" << fixed(sy(py))
                << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        }
        const double ly = T + 10 + 18.0 * static_cast<double>(s);
        svg << "<line x1=\"" << L + pw + 14 << "\" y1=\"" << ly << "\" x2=\"" << L + pw + 34
            << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << L + pw + 40 << "\" y=\"" << ly + 4 << "\">" << xml_escape(names[s])
            << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

void emit_svg(std::span<const ReportRow> rows, std::string_view x, std::string_view y,
              std::string_view series, const std::filesystem::path& path) {
    write_text(path, format_svg(rows, x, y, series));
}

nlohmann::json to_json(const ReportRow& r, bool include_timing) {
    nlohmann::json j = {
        {"label", r.label},
        {"dim", r.dim},
        {"n", r.n},
        {"kind", std::string(to_string(r.kind))},
        {"m", r.m},
        {"k", r.k},
        {"rc", r.rc},
        {"e_dmean", r.e_dmean},
        {"e_dmin", r.e_dmin},
        {"lid_median", r.lid_median},
        {"lid_mean", r.lid_mean},
        {"zero_min_count", r.zero_min_count},
        {"seed", r.seed},
    };
    if (include_timing) j["wall_time_ms"] = r.wall_time_ms;
    return j;
}

nlohmann::json to_json(const RcReport& r) {
    return {
        {"rc", r.rc},
        {"e_dmean", r.e_dmean},
        {"e_dmin", r.e_dmin},
        {"per_query_rc", r.per_query_rc},
        {"m", r.m},
        {"n", r.n},
        {"dim", r.dim},
        {"kind", std::string(to_string(r.kind))},
        {"seed", r.seed},
        {"zero_min_count", r.zero_min_count},
    };
}

nlohmann::json to_json(const LidReport& r) {
    return {
        {"per_query_lid", r.per_query_lid},
        {"mean", r.mean},
        {"median", r.median},
        {"p10", r.p10},
        {"p90", r.p90},
        {"k_used", r.k_used},
        {"skipped", r.skipped},
        {"m", r.m},
        {"n", r.n},
        {"dim", r.dim},
        {"kind", std::string(to_string(r.kind))},
        {"seed", r.seed},
    };
}

nlohmann::json to_json(const KnnResult& result) {
    std::vector<std::size_t> ids;
    std::vector<double> dists;
    for (const auto& nb : result.neighbors) {
        ids.push_back(nb.row);
        dists.push_back(nb.distance);
    }
    return {{"query", result.query}, {"ids", ids}, {"dists", dists}};
}

nlohmann::json to_json(const HomogeneityResult& r) {
    nlohmann::json j = {{"constant_input", r.constant_input()}};
    j["spearman"] = r.spearman ? nlohmann::json(*r.spearman) : nlohmann::json(nullptr);
    j["kendall"] = r.kendall ? nlohmann::json(*r.kendall) : nlohmann::json(nullptr);
    return j;
}

nlohmann::json to_json(const KindPairTau& t) {
    return {{"a", std::string(to_string(t.a))},
            {"b", std::string(to_string(t.b))},
            {"tau_b", t.tau ? nlohmann::json(*t.tau) : nlohmann::json(nullptr)}};
}

}  // namespace nnm
