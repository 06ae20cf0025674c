#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "nnm/experiment.hpp"
#include "nnm/knn.hpp"
#include "nnm/metrics.hpp"
#include "nnm/pca.hpp"

namespace nnm {

/// CSV column order, also the header line.
inline constexpr std::string_view kReportColumns[] = {
    "label", "dim",      "n",          "kind",           "m",    "k",           "rc",
    "e_dmean", "e_dmin", "lid_median", "lid_mean", "zero_min_count", "seed", "wall_time_ms"};

struct CsvOptions {
    /// When false the wall_time_ms column is left empty, making the output a
    /// pure function of the configuration.
    bool include_timing = true;
};

/// Floats use the shortest representation that parses back exactly.
std::string format_csv(std::span<const ReportRow> rows, const CsvOptions& options = {});
void emit_csv(std::span<const ReportRow> rows, const std::filesystem::path& path,
              const CsvOptions& options = {});
std::vector<ReportRow> parse_csv(std::string_view text);
std::vector<ReportRow> read_csv(const std::filesystem::path& path);

/// Line chart, one polyline per distinct `series` value. `x` may be numeric
/// or categorical (label, kind); `y` must be numeric. x = "dim" is drawn on a
/// log scale. No external assets.
std::string format_svg(std::span<const ReportRow> rows, std::string_view x, std::string_view y,
                       std::string_view series);
void emit_svg(std::span<const ReportRow> rows, std::string_view x, std::string_view y,
              std::string_view series, const std::filesystem::path& path);

nlohmann::json to_json(const ReportRow& row, bool include_timing = true);
nlohmann::json to_json(const RcReport& report);
nlohmann::json to_json(const LidReport& report);
nlohmann::json to_json(const KnnResult& result);
nlohmann::json to_json(const HomogeneityResult& result);
nlohmann::json to_json(const KindPairTau& tau);

void write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace nnm
