#include <cmath>
#include <cstdlib>
#include <cstring>
#include <random>

#include "doctest.h"
#include "nnm/kernels.hpp"

using namespace nnm;

namespace {

struct Case {
    std::vector<float> row;
    std::vector<std::vector<double>> queries;
};

Case make_case(std::size_t dim, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<float> normal(0.0f, 3.0f);
    Case c;
    c.row.resize(dim);
    for (auto& v : c.row) v = normal(gen);
    for (std::size_t j = 0; j < kernels::kMaxBatch; ++j) {
        std::vector<double> q(dim);
        for (auto& v : q) v = static_cast<double>(normal(gen));
        c.queries.push_back(std::move(q));
    }
    return c;
}

// Bound on reassociation error: a few ulps of the sum of absolute terms.
double abs_sum(const std::vector<float>& r, const std::vector<double>& q, int op) {
    double s = 0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double diff = r[i] - q[i];
        s += op == 0 ? std::fabs(diff) : op == 1 ? diff * diff : std::fabs(r[i] * q[i]);
    }
    return s;
}

}  // namespace

TEST_CASE("scalar is always available and listed first") {
    const auto all = kernels::available();
    REQUIRE_FALSE(all.empty());
    CHECK(std::strcmp(all.front()->name, "scalar") == 0);
    CHECK(kernels::find("scalar") == &kernels::scalar());
    CHECK(kernels::find("no-such-kernel") == nullptr);
}

TEST_CASE("active() honours NN_MEANING_KERNELS") {
    const char* old = std::getenv("NN_MEANING_KERNELS");
    const std::string saved = old ? old : "";
    ::setenv("NN_MEANING_KERNELS", "scalar", 1);
    CHECK(&kernels::active() == &kernels::scalar());
    ::setenv("NN_MEANING_KERNELS", "bogus", 1);
    CHECK(&kernels::active() == &kernels::scalar());
    if (old) ::setenv("NN_MEANING_KERNELS", saved.c_str(), 1);
    else ::unsetenv("NN_MEANING_KERNELS");
}

TEST_CASE("scalar kernels on a hand example") {
    const float row[3] = {1, -2, 3};
    const double q[3] = {0, 1, 1};
    const auto& s = kernels::scalar();
    CHECK(s.l1(row, q, 3) == 6.0);
    CHECK(s.l2_squared(row, q, 3) == 14.0);
    CHECK(s.dot(row, q, 3) == 1.0);
}

TEST_CASE("every table matches scalar, including tails") {
    const auto& ref = kernels::scalar();
    for (const auto* table : kernels::available()) {
        CAPTURE(table->name);
        for (std::size_t dim = 1; dim <= 300; ++dim) {
            const auto c = make_case(dim, dim * 31 + 7);
            const auto& q = c.queries[0];
            const double tol = 1e-13;
            CHECK(std::fabs(table->l1(c.row.data(), q.data(), dim) -
                            ref.l1(c.row.data(), q.data(), dim)) <= tol * abs_sum(c.row, q, 0));
            CHECK(std::fabs(table->l2_squared(c.row.data(), q.data(), dim) -
                            ref.l2_squared(c.row.data(), q.data(), dim)) <=
                  tol * abs_sum(c.row, q, 1));
            CHECK(std::fabs(table->dot(c.row.data(), q.data(), dim) -
                            ref.dot(c.row.data(), q.data(), dim)) <= tol * abs_sum(c.row, q, 2));
        }
    }
}

TEST_CASE("batch results are bit-identical to single calls") {
    for (const auto* table : kernels::available()) {
        CAPTURE(table->name);
        for (std::size_t dim : {1u, 3u, 4u, 7u, 8u, 9u, 15u, 16u, 17u, 33u, 128u, 129u, 300u}) {
            const auto c = make_case(dim, dim);
            const double* qs[kernels::kMaxBatch];
            for (std::size_t j = 0; j < kernels::kMaxBatch; ++j) qs[j] = c.queries[j].data();
            for (std::size_t nq = 1; nq <= kernels::kMaxBatch; ++nq) {
                double out[kernels::kMaxBatch];
                table->l1_batch(c.row.data(), qs, nq, dim, out);
                for (std::size_t j = 0; j < nq; ++j) CHECK(out[j] == table->l1(c.row.data(), qs[j], dim));
                table->l2_squared_batch(c.row.data(), qs, nq, dim, out);
                for (std::size_t j = 0; j < nq; ++j)
                    CHECK(out[j] == table->l2_squared(c.row.data(), qs[j], dim));
                table->dot_batch(c.row.data(), qs, nq, dim, out);
                for (std::size_t j = 0; j < nq; ++j) CHECK(out[j] == table->dot(c.row.data(), qs[j], dim));
            }
        }
    }
}
