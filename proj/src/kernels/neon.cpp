// AArch64 only; Advanced SIMD is mandatory there, so no runtime probe.

#include <arm_neon.h>

#include <algorithm>
#include <cmath>

#include "nnm/kernels.hpp"

namespace nnm::kernels {
namespace {

enum class Op { l1, l2_squared, dot };

template <Op K>
inline float64x2_t step(float64x2_t acc, float64x2_t r, float64x2_t q) {
    if constexpr (K == Op::dot) {
        return vfmaq_f64(acc, r, q);
    } else if constexpr (K == Op::l2_squared) {
        const float64x2_t d = vsubq_f64(r, q);
        return vfmaq_f64(acc, d, d);
    } else {
        return vaddq_f64(acc, vabdq_f64(r, q));
    }
}

template <Op K>
inline double step_scalar(double acc, double r, double q) {
    if constexpr (K == Op::dot) {
        return acc + r * q;
    } else if constexpr (K == Op::l2_squared) {
        const double d = r - q;
        return acc + d * d;
    } else {
        return acc + std::fabs(r - q);
    }
}

// Same shape as the AVX2 variant with 2-lane registers: blocks of 4 floats
// split into (lo, hi) accumulators, scalar tail, fixed final reduction.
template <Op K, std::size_t Q>
void run(const float* row, const double* const* queries, std::size_t dim, double* out) {
    float64x2_t lo[Q];
    float64x2_t hi[Q];
    for (std::size_t j = 0; j < Q; ++j) lo[j] = hi[j] = vdupq_n_f64(0.0);

    std::size_t i = 0;
    for (; i + 4 <= dim; i += 4) {
        const float32x4_t r4 = vld1q_f32(row + i);
        const float64x2_t r_lo = vcvt_f64_f32(vget_low_f32(r4));
        const float64x2_t r_hi = vcvt_high_f64_f32(r4);
        for (std::size_t j = 0; j < Q; ++j) {
            lo[j] = step<K>(lo[j], r_lo, vld1q_f64(queries[j] + i));
            hi[j] = step<K>(hi[j], r_hi, vld1q_f64(queries[j] + i + 2));
        }
    }
    for (std::size_t j = 0; j < Q; ++j) {
        double tail = 0.0;
        for (std::size_t t = i; t < dim; ++t) {
            tail = step_scalar<K>(tail, static_cast<double>(row[t]), queries[j][t]);
        }
        out[j] = vaddvq_f64(vaddq_f64(lo[j], hi[j])) + tail;
    }
}

template <Op K>
void batch(const float* row, const double* const* queries, std::size_t nq, std::size_t dim,
           double* out) {
    switch (nq) {
        case 1: run<K, 1>(row, queries, dim, out); break;
        case 2: run<K, 2>(row, queries, dim, out); break;
        case 3: run<K, 3>(row, queries, dim, out); break;
        case 4: run<K, 4>(row, queries, dim, out); break;
        default:
            for (std::size_t j = 0; j < nq; j += kMaxBatch) {
                batch<K>(row, queries + j, std::min(kMaxBatch, nq - j), dim, out + j);
            }
    }
}

template <Op K>
double one(const float* row, const double* query, std::size_t dim) {
    double out;
    run<K, 1>(row, &query, dim, &out);
    return out;
}

const KernelSet kNeon{
    "neon",
    one<Op::l1>,
    one<Op::l2_squared>,
    one<Op::dot>,
    batch<Op::l1>,
    batch<Op::l2_squared>,
    batch<Op::dot>,
};

}  // namespace

const KernelSet* neon_table() { return &kNeon; }

}  // namespace nnm::kernels
