#include "nnm/rank.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nnm/error.hpp"

namespace nnm {
namespace {

void check_pair(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ConfigError("rank correlation inputs differ in length");
    if (x.size() < 2) throw ConfigError("rank correlation needs at least two observations");
}

int sign(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

std::vector<double> average_ranks(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(values.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i + 1;
        while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
        const double avg = 0.5 * static_cast<double>(i + 1 + j);
        for (std::size_t t = i; t < j; ++t) ranks[order[t]] = avg;
        i = j;
    }
    return ranks;
}

std::optional<double> spearman(std::span<const double> x, std::span<const double> y) {
    check_pair(x, y);
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    const double n = static_cast<double>(rx.size());
    const double mean = (n + 1.0) / 2.0;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        const double a = rx[i] - mean;
        const double b = ry[i] - mean;
        sxy += a * b;
        sxx += a * a;
        syy += b * b;
    }
    if (sxx == 0.0 || syy == 0.0) return std::nullopt;
    return sxy / std::sqrt(sxx * syy);
}

std::optional<double> kendall_tau_b(std::span<const double> x, std::span<const double> y) {
    check_pair(x, y);
    // O(n^2) pair enumeration; inputs here are per-dataset summaries.
    long long concordant_minus_discordant = 0;
    long long untied_x = 0;  // pairs not tied in x
    long long untied_y = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = i + 1; j < x.size(); ++j) {
            const int sx = sign(x[i] - x[j]);
            const int sy = sign(y[i] - y[j]);
            concordant_minus_discordant += sx * sy;
            untied_x += sx != 0;
            untied_y += sy != 0;
        }
    }
    if (untied_x == 0 || untied_y == 0) return std::nullopt;
    return static_cast<double>(concordant_minus_discordant) /
           std::sqrt(static_cast<double>(untied_x) * static_cast<double>(untied_y));
}

}  // namespace nnm
