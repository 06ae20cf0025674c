#include "doctest.h"
#include "nnm/error.hpp"
#include "nnm/rank.hpp"

using namespace nnm;

namespace {
using V = std::vector<double>;
}

TEST_CASE("average_ranks shares ranks across ties") {
    CHECK(average_ranks(V{10, 30, 20}) == V{1, 3, 2});
    CHECK(average_ranks(V{1, 2, 2, 3}) == V{1, 2.5, 2.5, 4});
    CHECK(average_ranks(V{5, 5, 5}) == V{2, 2, 2});
}

TEST_CASE("spearman and kendall against frozen reference values") {
    // values from scipy.stats.spearmanr / kendalltau (tau-b)
    const V x{1, 2, 2, 3, 5, 4, 4, 6};
    const V y{2, 1, 3, 3, 6, 5, 4, 7};
    CHECK(*spearman(x, y) == doctest::Approx(0.9394111922831736).epsilon(1e-12));
    CHECK(*kendall_tau_b(x, y) == doctest::Approx(0.8680790595108567).epsilon(1e-12));

    const V tied{1, 1, 2, 2, 3, 3};
    CHECK(*kendall_tau_b(tied, tied) == doctest::Approx(1.0));
    CHECK(*spearman(tied, tied) == doctest::Approx(1.0));
}

TEST_CASE("perfectly opposite orders") {
    const V rc{3, 2, 1.1};
    const V lid{5, 20, 300};
    CHECK(*spearman(rc, lid) == doctest::Approx(-1.0));
    CHECK(*kendall_tau_b(rc, lid) == doctest::Approx(-1.0));
}

TEST_CASE("constant input is undefined, not zero") {
    const V c{4, 4, 4};
    const V v{1, 2, 3};
    CHECK_FALSE(spearman(c, v).has_value());
    CHECK_FALSE(kendall_tau_b(v, c).has_value());
}

TEST_CASE("rank correlation argument errors") {
    CHECK_THROWS_AS(spearman(V{1, 2}, V{1, 2, 3}), ConfigError);
    CHECK_THROWS_AS(kendall_tau_b(V{1}, V{1}), ConfigError);
}

TEST_CASE("rank correlations are invariant to monotone transforms") {
    const V x{0.3, 1.7, 0.9, 4.4, 2.2, 3.1};
    const V y{2.0, 1.0, 5.0, 3.0, 6.0, 4.0};
    V x3;
    for (double v : x) x3.push_back(v * v * v + 7.0);
    CHECK(*spearman(x, y) == doctest::Approx(*spearman(x3, y)));
    CHECK(*kendall_tau_b(x, y) == doctest::Approx(*kendall_tau_b(x3, y)));
    CHECK(*kendall_tau_b(x, y) == doctest::Approx(*kendall_tau_b(y, x)));
}
