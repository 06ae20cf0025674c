#include "nnm/distance.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nnm/error.hpp"

namespace nnm {

std::string_view to_string(DistanceKind kind) {
    switch (kind) {
        case DistanceKind::l1: return "l1";
        case DistanceKind::l2: return "l2";
        case DistanceKind::angular: return "angular";
    }
    return "l2";
}

DistanceKind parse_distance_kind(std::string_view text) {
    if (text == "l1") return DistanceKind::l1;
    if (text == "l2") return DistanceKind::l2;
    if (text == "angular") return DistanceKind::angular;
    throw ConfigError("unknown metric '" + std::string(text) + "' (expected l1, l2 or angular)");
}

double finish_distance(DistanceKind kind, double raw, double row_norm_sq, double query_norm_sq) {
    switch (kind) {
        case DistanceKind::l1: return raw;
        case DistanceKind::l2: return std::sqrt(raw);
        case DistanceKind::angular: {
            // sqrt(a * a) == a exactly, so a vector against itself gives cos = 1.
            const double cos = std::clamp(raw / std::sqrt(row_norm_sq * query_norm_sq), -1.0, 1.0);
            return 1.0 - cos;
        }
    }
    return raw;
}

double distance(DistanceKind kind, std::span<const float> u, std::span<const float> v) {
    if (u.size() != v.size()) {
        throw ConfigError("dimension mismatch: " + std::to_string(u.size()) + " vs " +
                          std::to_string(v.size()));
    }
    double raw = 0.0;
    double nu = 0.0;
    double nv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double a = u[i];
        const double b = v[i];
        switch (kind) {
            case DistanceKind::l1: raw += std::fabs(a - b); break;
            case DistanceKind::l2: raw += (a - b) * (a - b); break;
            case DistanceKind::angular:
                raw += a * b;
                nu += a * a;
                nv += b * b;
                break;
        }
    }
    if (kind == DistanceKind::angular && (nu == 0.0 || nv == 0.0)) {
        throw ZeroNormError("angular distance of a zero vector", nu == 0.0 ? 0 : 1);
    }
    return finish_distance(kind, raw, nu, nv);
}

std::vector<double> row_norms_squared(const VectorDataset& ds, const kernels::KernelSet& table) {
    std::vector<double> norms(ds.count());
    std::vector<double> wide(ds.dim());
    for (std::size_t i = 0; i < ds.count(); ++i) {
        const auto row = ds.row(i);
        std::copy(row.begin(), row.end(), wide.begin());
        norms[i] = table.dot(row.data(), wide.data(), ds.dim());
    }
    return norms;
}

std::vector<ScanEntry> scan_distances(DistanceKind kind, const VectorDataset& ds,
                                      std::span<const float> query,
                                      std::optional<std::size_t> exclude) {
    return scan_distances(kind, ds, query, exclude, kernels::active());
}

std::vector<ScanEntry> scan_distances(DistanceKind kind, const VectorDataset& ds,
                                      std::span<const float> query,
                                      std::optional<std::size_t> exclude,
                                      const kernels::KernelSet& table) {
    if (query.size() != ds.dim()) {
        throw ConfigError("query dimension " + std::to_string(query.size()) +
                          " does not match dataset dimension " + std::to_string(ds.dim()));
    }
    const std::vector<double> q(query.begin(), query.end());
    const std::size_t dim = ds.dim();
    double query_norm_sq = 0.0;
    if (kind == DistanceKind::angular) {
        query_norm_sq = table.dot(query.data(), q.data(), dim);
        if (query_norm_sq == 0.0) throw ZeroNormError("angular scan with a zero query", 0);
    }

    std::vector<ScanEntry> out;
    out.reserve(ds.count());
    std::vector<double> wide(kind == DistanceKind::angular ? dim : 0);
    for (std::size_t i = 0; i < ds.count(); ++i) {
        if (exclude && *exclude == i) continue;
        const float* row = ds.row(i).data();
        double d = 0.0;
        switch (kind) {
            case DistanceKind::l1: d = table.l1(row, q.data(), dim); break;
            case DistanceKind::l2: d = finish_distance(kind, table.l2_squared(row, q.data(), dim), 0, 0); break;
            case DistanceKind::angular: {
                std::copy(row, row + dim, wide.begin());
                const double norm = table.dot(row, wide.data(), dim);
                if (norm == 0.0) {
                    throw ZeroNormError("row " + std::to_string(i) + " has zero norm under angular",
                                        i);
                }
                d = finish_distance(kind, table.dot(row, q.data(), dim), norm, query_norm_sq);
                break;
            }
        }
        out.push_back({i, d});
    }
    return out;
}

}  // namespace nnm
