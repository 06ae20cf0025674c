#include <cmath>

#include "nnm/kernels.hpp"

namespace nnm::kernels {
namespace {

double l1_one(const float* row, const double* q, std::size_t dim) {
    double sum = 0.0;
    for (std::size_t i = 0; i < dim; ++i) sum += std::fabs(static_cast<double>(row[i]) - q[i]);
    return sum;
}

double l2sq_one(const float* row, const double* q, std::size_t dim) {
    double sum = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        const double d = static_cast<double>(row[i]) - q[i];
        sum += d * d;
    }
    return sum;
}

double dot_one(const float* row, const double* q, std::size_t dim) {
    double sum = 0.0;
    for (std::size_t i = 0; i < dim; ++i) sum += static_cast<double>(row[i]) * q[i];
    return sum;
}

template <double (*Op)(const float*, const double*, std::size_t)>
void batch(const float* row, const double* const* queries, std::size_t nq, std::size_t dim,
           double* out) {
    for (std::size_t j = 0; j < nq; ++j) out[j] = Op(row, queries[j], dim);
}

const KernelSet kScalar{
    "scalar",
    l1_one,
    l2sq_one,
    dot_one,
    batch<l1_one>,
    batch<l2sq_one>,
    batch<dot_one>,
};

}  // namespace

const KernelSet& scalar() { return kScalar; }

}  // namespace nnm::kernels
