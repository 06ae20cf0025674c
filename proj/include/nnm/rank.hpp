#pragma once

#include <optional>
#include <span>
#include <vector>

namespace nnm {

/// 1-based ranks; tied values share the average of their positions.
std::vector<double> average_ranks(std::span<const double> values);

/// Pearson correlation of the average ranks. nullopt when either input is
/// constant (correlation undefined). Inputs must have equal length >= 2.
std::optional<double> spearman(std::span<const double> x, std::span<const double> y);

/// Kendall tau-b, corrected for ties in either variable. nullopt when either
/// input is constant.
std::optional<double> kendall_tau_b(std::span<const double> x, std::span<const double> y);

}  // namespace nnm
