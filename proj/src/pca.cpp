#include "nnm/pca.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <fstream>

#include "json.hpp"
#include "nnm/error.hpp"
#include "nnm/parallel.hpp"

namespace nnm {

PcaModel pca_fit(const VectorDataset& ds, std::size_t output_dim, std::uint64_t seed) {
    const std::size_t n = ds.count(), d = ds.dim();
    if (output_dim == 0 || output_dim > std::min(n, d)) {
        throw ConfigError("PCA output dimension " + std::to_string(output_dim) +
                          " must lie in [1, " + std::to_string(std::min(n, d)) + "]");
    }

    std::vector<std::size_t> rows;
    if (n * d > kPcaFullFitElements && n > kPcaSubsampleRows) {
        rows = sample_indices(n, kPcaSubsampleRows, seed);
        std::sort(rows.begin(), rows.end());
    } else {
        rows.resize(n);
        for (std::size_t i = 0; i < n; ++i) rows[i] = i;
    }

    Eigen::VectorXd mean = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
    for (std::size_t r : rows) {
        const auto row = ds.row(r);
        for (std::size_t j = 0; j < d; ++j) mean[j] += row[j];
    }
    mean /= static_cast<double>(rows.size());

    // Scatter matrix accumulated over centered row blocks.
    Eigen::MatrixXd scatter = Eigen::MatrixXd::Zero(d, d);
    constexpr std::size_t kBlock = 1024;
    Eigen::MatrixXd block;
    for (std::size_t begin = 0; begin < rows.size(); begin += kBlock) {
        const std::size_t len = std::min(kBlock, rows.size() - begin);
        block.resize(static_cast<Eigen::Index>(len), static_cast<Eigen::Index>(d));
        for (std::size_t i = 0; i < len; ++i) {
            const auto row = ds.row(rows[begin + i]);
            for (std::size_t j = 0; j < d; ++j) block(i, j) = row[j] - mean[j];
        }
        scatter.selfadjointView<Eigen::Lower>().rankUpdate(block.transpose());
    }
    const double denom = rows.size() > 1 ? static_cast<double>(rows.size() - 1) : 1.0;
    const Eigen::MatrixXd cov = scatter.selfadjointView<Eigen::Lower>().toDenseMatrix() / denom;

    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    if (eig.info() != Eigen::Success) throw Error("covariance eigendecomposition failed");

    PcaModel model;
    model.input_dim = d;
    model.output_dim = output_dim;
    model.fitted_rows = rows.size();
    model.total_variance = std::max(0.0, cov.trace());
    model.mean.assign(mean.data(), mean.data() + d);
    model.components.resize(output_dim * d);
    model.explained_variance.resize(output_dim);
    for (std::size_t c = 0; c < output_dim; ++c) {
        // Eigen orders eigenvalues ascending.
        const auto src = static_cast<Eigen::Index>(d - 1 - c);
        Eigen::VectorXd v = eig.eigenvectors().col(src);
        Eigen::Index peak = 0;
        for (Eigen::Index j = 1; j < v.size(); ++j) {
            if (std::fabs(v[j]) > std::fabs(v[peak])) peak = j;
        }
        if (v[peak] < 0.0) v = -v;
        std::copy(v.data(), v.data() + d, model.components.begin() + c * d);
        model.explained_variance[c] = std::max(0.0, eig.eigenvalues()[src]);
    }
    return model;
}

VectorDataset pca_project(const PcaModel& model, const VectorDataset& ds, std::size_t workers) {
    if (ds.dim() != model.input_dim) {
        throw ConfigError("PCA model expects dimension " + std::to_string(model.input_dim) +
                          ", dataset has " + std::to_string(ds.dim()));
    }
    const std::size_t n = ds.count(), d = ds.dim(), out_dim = model.output_dim;
    std::vector<float> out(n * out_dim);
    constexpr std::size_t kRows = 256;
    const std::size_t chunks = (n + kRows - 1) / kRows;
    parallel_for(chunks, resolve_workers(workers), [&](std::size_t chunk) {
        std::vector<double> centered(d);
        const std::size_t end = std::min(n, (chunk + 1) * kRows);
        for (std::size_t i = chunk * kRows; i < end; ++i) {
            const auto row = ds.row(i);
            for (std::size_t j = 0; j < d; ++j) centered[j] = row[j] - model.mean[j];
            for (std::size_t c = 0; c < out_dim; ++c) {
                const double* axis = model.components.data() + c * d;
                double acc = 0.0;
                for (std::size_t j = 0; j < d; ++j) acc += axis[j] * centered[j];
                out[i * out_dim + c] = static_cast<float>(acc);
            }
        }
    });

    auto attributes = ds.attributes();
    attributes["projection"] = "pca";
    attributes["projection_input"] = ds.name();
    attributes["projection_input_dim"] = std::to_string(d);
    attributes["projection_output_dim"] = std::to_string(out_dim);
    return VectorDataset(ds.name() + "-pca" + std::to_string(out_dim), out_dim, std::move(out),
                         ds.source(), std::move(attributes));
}

void save_pca_model(const PcaModel& model, const std::filesystem::path& path) {
    nlohmann::json j = {
        {"input_dim", model.input_dim},
        {"output_dim", model.output_dim},
        {"fitted_rows", model.fitted_rows},
        {"total_variance", model.total_variance},
        {"mean", model.mean},
        {"explained_variance", model.explained_variance},
    };
    nlohmann::json comps = nlohmann::json::array();
    for (std::size_t c = 0; c < model.output_dim; ++c) {
        const auto axis = model.component(c);
        comps.push_back(std::vector<double>(axis.begin(), axis.end()));
    }
    j["components"] = std::move(comps);
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw FormatError("cannot write " + path.string());
    out << j.dump() << '\n';
    if (!out) throw FormatError("failed writing " + path.string());
}

PcaModel load_pca_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path.string());
    PcaModel m;
    try {
        nlohmann::json j;
        in >> j;
        m.input_dim = j.at("input_dim").get<std::size_t>();
        m.output_dim = j.at("output_dim").get<std::size_t>();
        m.fitted_rows = j.value("fitted_rows", std::size_t{0});
        m.total_variance = j.value("total_variance", 0.0);
        m.mean = j.at("mean").get<std::vector<double>>();
        m.explained_variance = j.at("explained_variance").get<std::vector<double>>();
        for (const auto& axis : j.at("components")) {
            const auto v = axis.get<std::vector<double>>();
            if (v.size() != m.input_dim) throw FormatError("component length mismatch");
            m.components.insert(m.components.end(), v.begin(), v.end());
        }
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
    if (m.mean.size() != m.input_dim || m.explained_variance.size() != m.output_dim ||
        m.components.size() != m.output_dim * m.input_dim) {
        throw FormatError(path.string() + ": inconsistent PCA model shape");
    }
    return m;
}

}  // namespace nnm
