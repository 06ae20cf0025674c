#include "nnm/knn.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nnm/error.hpp"
#include "nnm/parallel.hpp"

namespace nnm {
namespace {

// Queries sharing one pass over the rows. Sized so the widened queries of a
// tile stay cache resident at d in the low thousands.
constexpr std::size_t kQueryTile = 16;

bool closer(const Neighbor& a, const Neighbor& b) {
    return a.distance < b.distance || (a.distance == b.distance && a.row < b.row);
}

// Bounded max-heap on (distance, row): the top is the current k-th neighbor.
class TopK {
public:
    explicit TopK(std::size_t k) : k_(k) { heap_.reserve(k); }

    void offer(std::size_t row, double d) {
        const Neighbor n{row, d};
        if (heap_.size() < k_) {
            heap_.push_back(n);
            std::push_heap(heap_.begin(), heap_.end(), closer);
        } else if (closer(n, heap_.front())) {
            std::pop_heap(heap_.begin(), heap_.end(), closer);
            heap_.back() = n;
            std::push_heap(heap_.begin(), heap_.end(), closer);
        }
    }

    std::vector<Neighbor> sorted() && {
        std::sort_heap(heap_.begin(), heap_.end(), closer);
        return std::move(heap_);
    }

private:
    std::size_t k_;
    std::vector<Neighbor> heap_;
};

struct QueryRef {
    std::span<const float> vector;
    std::optional<std::size_t> exclude;
};

class ScanEngine {
public:
    ScanEngine(const VectorDataset& ds, DistanceKind kind, std::size_t k,
               const kernels::KernelSet& table)
        : ds_(ds), kind_(kind), k_(k), table_(table) {
        if (kind_ == DistanceKind::angular) norms_ = row_norms_squared(ds_, table_);
    }

    // Scans all rows once for every query in `tile` (at most kQueryTile).
    void run(std::span<const QueryRef> tile, std::span<const std::size_t> ids,
             std::span<QueryStats> out) const {
        const std::size_t nq = tile.size();
        const std::size_t dim = ds_.dim();

        std::vector<double> wide(nq * dim);
        const double* qptr[kQueryTile];
        double qnorm[kQueryTile] = {};
        for (std::size_t j = 0; j < nq; ++j) {
            std::copy(tile[j].vector.begin(), tile[j].vector.end(), wide.begin() + j * dim);
            qptr[j] = wide.data() + j * dim;
            if (kind_ == DistanceKind::angular) {
                qnorm[j] = table_.dot(tile[j].vector.data(), qptr[j], dim);
                if (qnorm[j] == 0.0) {
                    throw ZeroNormError("query " + std::to_string(ids[j]) +
                                            " has zero norm under angular",
                                        tile[j].exclude.value_or(0));
                }
            }
        }

        std::vector<TopK> top(nq, TopK(k_));
        double sum[kQueryTile] = {};
        std::size_t scanned[kQueryTile] = {};
        std::size_t zeros[kQueryTile] = {};
        double raw[kQueryTile];

        for (std::size_t r = 0; r < ds_.count(); ++r) {
            const float* row = ds_.row(r).data();
            for (std::size_t j = 0; j < nq; j += kernels::kMaxBatch) {
                const std::size_t b = std::min(kernels::kMaxBatch, nq - j);
                switch (kind_) {
                    case DistanceKind::l1: table_.l1_batch(row, qptr + j, b, dim, raw + j); break;
                    case DistanceKind::l2:
                        table_.l2_squared_batch(row, qptr + j, b, dim, raw + j);
                        break;
                    case DistanceKind::angular:
                        table_.dot_batch(row, qptr + j, b, dim, raw + j);
                        break;
                }
            }
            const double row_norm = kind_ == DistanceKind::angular ? norms_[r] : 0.0;
            for (std::size_t j = 0; j < nq; ++j) {
                if (tile[j].exclude == r) continue;
                if (kind_ == DistanceKind::angular && row_norm == 0.0) {
                    throw ZeroNormError("query " + std::to_string(ids[j]) + ": row " +
                                            std::to_string(r) + " has zero norm under angular",
                                        r);
                }
                const double d = finish_distance(kind_, raw[j], row_norm, qnorm[j]);
                sum[j] += d;
                ++scanned[j];
                if (d == 0.0) ++zeros[j];
                top[j].offer(r, d);
            }
        }

        for (std::size_t j = 0; j < nq; ++j) {
            QueryStats& s = out[j];
            s.knn.query = ids[j];
            s.knn.neighbors = std::move(top[j]).sorted();
            s.d_min = s.knn.neighbors.front().distance;
            s.scanned = scanned[j];
            s.d_mean = sum[j] / static_cast<double>(scanned[j]);
            s.zero_distance_count = zeros[j];
        }
    }

private:
    const VectorDataset& ds_;
    DistanceKind kind_;
    std::size_t k_;
    const kernels::KernelSet& table_;
    std::vector<double> norms_;
};

void check_k(std::size_t k, std::size_t candidates) {
    if (k == 0) throw ConfigError("k must be at least 1");
    if (k > candidates) {
        throw ConfigError("k = " + std::to_string(k) + " exceeds the " +
                          std::to_string(candidates) + " candidate rows");
    }
}

}  // namespace

KnnResult knn_search(const VectorDataset& ds, std::span<const float> query, std::size_t k,
                     DistanceKind kind, std::optional<std::size_t> exclude,
                     const ScanOptions& options) {
    if (query.size() != ds.dim()) {
        throw ConfigError("query dimension " + std::to_string(query.size()) +
                          " does not match dataset dimension " + std::to_string(ds.dim()));
    }
    if (exclude && *exclude >= ds.count()) throw ConfigError("excluded row out of range");
    check_k(k, ds.count() - (exclude ? 1 : 0));
    for (float v : query) {
        if (!std::isfinite(v)) throw ConfigError("query contains a non-finite value");
    }
    const auto& table = options.kernels ? *options.kernels : kernels::active();
    const ScanEngine engine(ds, kind, k, table);
    const QueryRef ref{query, exclude};
    const std::size_t id = 0;
    QueryStats stats;
    engine.run({&ref, 1}, {&id, 1}, {&stats, 1});
    return std::move(stats.knn);
}

std::vector<QueryStats> query_scan_stats(const VectorDataset& ds, const QuerySet& queries,
                                         std::size_t k, DistanceKind kind,
                                         const ScanOptions& options) {
    queries.validate_against(ds);
    const std::size_t m = queries.size();
    const bool sampled = queries.mode() == QuerySet::Mode::sampled_indices;
    check_k(k, ds.count() - (sampled ? 1 : 0));

    const auto& table = options.kernels ? *options.kernels : kernels::active();
    const ScanEngine engine(ds, kind, k, table);

    std::vector<QueryRef> refs(m);
    std::vector<std::size_t> ids(m);
    for (std::size_t i = 0; i < m; ++i) {
        refs[i] = {queries.query(ds, i), queries.excluded_row(i)};
        ids[i] = i;
    }

    std::vector<QueryStats> stats(m);
    const std::size_t tiles = (m + kQueryTile - 1) / kQueryTile;
    parallel_for(tiles, resolve_workers(options.workers), [&](std::size_t t) {
        const std::size_t begin = t * kQueryTile;
        const std::size_t len = std::min(kQueryTile, m - begin);
        engine.run(std::span(refs).subspan(begin, len), std::span(ids).subspan(begin, len),
                   std::span(stats).subspan(begin, len));
    });
    return stats;
}

}  // namespace nnm
