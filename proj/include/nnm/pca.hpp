#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "nnm/dataset.hpp"

namespace nnm {

/// Principal axes of a dataset, strongest first.
struct PcaModel {
    std::size_t input_dim = 0;
    std::size_t output_dim = 0;
    std::vector<double> mean;
    /// output_dim x input_dim, row-major, rows orthonormal. Each row's
    /// largest-magnitude entry is positive.
    std::vector<double> components;
    /// Covariance eigenvalues (1/(n-1) normalization), non-increasing.
    std::vector<double> explained_variance;
    /// Trace of the covariance: the variance summed over all input axes.
    double total_variance = 0.0;
    /// Rows the covariance was estimated from.
    std::size_t fitted_rows = 0;

    /// Share of the total variance carried by component i.
    double explained_variance_ratio(std::size_t i) const {
        return total_variance > 0.0 ? explained_variance[i] / total_variance : 0.0;
    }
    std::span<const double> component(std::size_t i) const {
        return {components.data() + i * input_dim, input_dim};
    }
};

/// Rows beyond which the covariance is estimated on a seeded subsample.
inline constexpr std::size_t kPcaFullFitElements = 100'000'000;
inline constexpr std::size_t kPcaSubsampleRows = 100'000;

/// Requires 1 <= output_dim <= min(n, d). Uses every row when n*d is at most
/// kPcaFullFitElements, else kPcaSubsampleRows rows drawn with `seed`.
PcaModel pca_fit(const VectorDataset& ds, std::size_t output_dim, std::uint64_t seed = 0);

/// Rows mapped to components * (row - mean). Parallel over rows.
VectorDataset pca_project(const PcaModel& model, const VectorDataset& ds,
                          std::size_t workers = 0);

void save_pca_model(const PcaModel& model, const std::filesystem::path& path);
PcaModel load_pca_model(const std::filesystem::path& path);

}  // namespace nnm
