#pragma once

// Test-only helpers. The oracles here deliberately avoid the library's
// kernels and scan engine: long double accumulation, full sorts.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <unistd.h>

#include "nnm/dataset.hpp"
#include "nnm/distance.hpp"
#include "nnm/knn.hpp"

namespace nnm::test {

inline VectorDataset random_dataset(std::size_t n, std::size_t d, std::uint64_t seed,
                                    float lo = -1.0f, float hi = 1.0f) {
    std::mt19937_64 gen(seed);
    std::vector<float> data(n * d);
    for (auto& v : data) {
        v = lo + (hi - lo) * static_cast<float>(static_cast<double>(gen() >> 11) * 0x1.0p-53);
    }
    return VectorDataset("random", d, std::move(data), DataSource::synthetic);
}

inline long double oracle_distance(DistanceKind kind, std::span<const float> u,
                                   std::span<const float> v) {
    long double a = 0, nu = 0, nv = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const long double x = u[i], y = v[i];
        switch (kind) {
            case DistanceKind::l1: a += std::fabs(x - y); break;
            case DistanceKind::l2: a += (x - y) * (x - y); break;
            case DistanceKind::angular:
                a += x * y;
                nu += x * x;
                nv += y * y;
                break;
        }
    }
    switch (kind) {
        case DistanceKind::l1: return a;
        case DistanceKind::l2: return std::sqrt(a);
        case DistanceKind::angular:
            return 1.0L - std::clamp(a / std::sqrt(nu * nv), -1.0L, 1.0L);
    }
    return a;
}

struct OracleNeighbor {
    std::size_t row;
    long double distance;
};

/// Every distance computed, then a full sort on (distance, row).
inline std::vector<OracleNeighbor> oracle_sorted(DistanceKind kind, const VectorDataset& ds,
                                                 std::span<const float> q,
                                                 std::optional<std::size_t> exclude) {
    std::vector<OracleNeighbor> all;
    for (std::size_t i = 0; i < ds.count(); ++i) {
        if (exclude == i) continue;
        all.push_back({i, oracle_distance(kind, ds.row(i), q)});
    }
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
        return a.distance < b.distance || (a.distance == b.distance && a.row < b.row);
    });
    return all;
}

inline bool close_rel(double a, double b, double rel) {
    return std::fabs(a - b) <= rel * std::max(std::fabs(a), std::fabs(b));
}

/// Scratch directory removed on destruction.
class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("nnm_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

}  // namespace nnm::test
