// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "nnm/kernels.hpp"

namespace nnm::kernels {
namespace {

enum class Op { l1, l2_squared, dot };

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d pair = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

template <Op K>
inline __m256d step(__m256d acc, __m256d r, __m256d q) {
    if constexpr (K == Op::dot) {
        return _mm256_fmadd_pd(r, q, acc);
    } else if constexpr (K == Op::l2_squared) {
        const __m256d d = _mm256_sub_pd(r, q);
        return _mm256_fmadd_pd(d, d, acc);
    } else {
        const __m256d sign = _mm256_set1_pd(-0.0);
        return _mm256_add_pd(acc, _mm256_andnot_pd(sign, _mm256_sub_pd(r, q)));
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

// Per query: two 4-lane accumulators over blocks of 8, a scalar tail, then
// (lo + hi) reduced horizontally plus the tail. The sequence is the same for
// every Q, which keeps batched and single results bit-identical.
template <Op K, std::size_t Q>
void run(const float* row, const double* const* queries, std::size_t dim, double* out) {
    __m256d lo[Q];
    __m256d hi[Q];
    for (std::size_t j = 0; j < Q; ++j) lo[j] = hi[j] = _mm256_setzero_pd();

    std::size_t i = 0;
    for (; i + 8 <= dim; i += 8) {
        const __m256 r8 = _mm256_loadu_ps(row + i);
        const __m256d r_lo = _mm256_cvtps_pd(_mm256_castps256_ps128(r8));
        const __m256d r_hi = _mm256_cvtps_pd(_mm256_extractf128_ps(r8, 1));
        for (std::size_t j = 0; j < Q; ++j) {
            lo[j] = step<K>(lo[j], r_lo, _mm256_loadu_pd(queries[j] + i));
            hi[j] = step<K>(hi[j], r_hi, _mm256_loadu_pd(queries[j] + i + 4));
        }
    }
    for (std::size_t j = 0; j < Q; ++j) {
        double tail = 0.0;
        for (std::size_t t = i; t < dim; ++t) {
            tail = step_scalar<K>(tail, static_cast<double>(row[t]), queries[j][t]);
        }
        out[j] = hsum(_mm256_add_pd(lo[j], hi[j])) + tail;
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

const KernelSet kAvx2{
    "avx2",
    one<Op::l1>,
    one<Op::l2_squared>,
    one<Op::dot>,
    batch<Op::l1>,
    batch<Op::l2_squared>,
    batch<Op::dot>,
};

}  // namespace

const KernelSet* avx2_table() { return &kAvx2; }

}  // namespace nnm::kernels
