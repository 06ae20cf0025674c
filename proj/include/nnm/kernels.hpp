#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace nnm::kernels {

/// Largest number of queries one batched kernel call evaluates against a row.
inline constexpr std::size_t kMaxBatch = 4;

/// Row-versus-query reductions. Rows are stored f32; queries are passed
/// already widened to f64 so a batch can reuse them across rows. Every
/// reduction accumulates in f64.
///
/// Contract shared by all implementations: for a given table, the value
/// produced for query j of a batch is bit-identical to the single-query
/// call on the same (row, query). Different tables may differ by
/// reassociation of the per-row sum.
struct KernelSet {
    const char* name;

    double (*l1)(const float* row, const double* query, std::size_t dim);
    double (*l2_squared)(const float* row, const double* query, std::size_t dim);
    double (*dot)(const float* row, const double* query, std::size_t dim);

    /// out[j] = op(row, queries[j]) for j < nq, nq <= kMaxBatch.
    void (*l1_batch)(const float* row, const double* const* queries, std::size_t nq,
                     std::size_t dim, double* out);
    void (*l2_squared_batch)(const float* row, const double* const* queries, std::size_t nq,
                             std::size_t dim, double* out);
    void (*dot_batch)(const float* row, const double* const* queries, std::size_t nq,
                      std::size_t dim, double* out);
};

/// Plain loops in index order; the reference every variant is tested against.
const KernelSet& scalar();

/// nullptr when not compiled in or not supported by this CPU.
const KernelSet* avx2();
const KernelSet* neon();

/// Every table usable on this machine, scalar first.
std::vector<const KernelSet*> available();

/// Best table for this CPU. NN_MEANING_KERNELS=scalar|avx2|neon forces one;
/// an unavailable name falls back to scalar.
const KernelSet& active();

/// Lookup by name among the available tables.
const KernelSet* find(std::string_view name);

}  // namespace nnm::kernels
