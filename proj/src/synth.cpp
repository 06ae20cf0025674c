#include "nnm/synth.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>

#include "nnm/error.hpp"
#include "nnm/random.hpp"

namespace nnm {
namespace {

constexpr std::uint64_t kBasisStream = 0x62617369735f7631ull;  // "basis_v1"
constexpr std::uint64_t kNoiseStream = 0x6e6f6973655f7631ull;  // "noise_v1"

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

VectorDataset::Attributes attributes_of(const SynthSpec& spec) {
    VectorDataset::Attributes a{
        {"generator", std::string(to_string(spec.kind))},
        {"n", std::to_string(spec.n)},
        {"d", std::to_string(spec.d)},
        {"seed", std::to_string(spec.seed)},
        {"normal_algorithm", Rng::kNormalAlgorithm},
    };
    if (spec.kind == SynthKind::subspace_gaussian) {
        a["intrinsic_dim"] = std::to_string(spec.intrinsic_dim);
        a["noise_sigma"] = format_double(spec.noise_sigma);
    }
    return a;
}

std::vector<float> normal_block(std::size_t count, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<float> out(count);
    for (auto& v : out) v = static_cast<float>(rng.normal());
    return out;
}

// d x k matrix with orthonormal columns; sign fixed so the first nonzero
// entry of every column is positive.
Eigen::MatrixXd orthonormal_basis(std::size_t d, std::size_t k, std::uint64_t seed) {
    Rng rng(seed);
    Eigen::MatrixXd g(d, k);
    for (Eigen::Index c = 0; c < g.cols(); ++c) {
        for (Eigen::Index r = 0; r < g.rows(); ++r) g(r, c) = rng.normal();
    }
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(d, k);
    for (Eigen::Index c = 0; c < q.cols(); ++c) {
        for (Eigen::Index r = 0; r < q.rows(); ++r) {
            if (q(r, c) != 0.0) {
                if (q(r, c) < 0.0) q.col(c) *= -1.0;
                break;
            }
        }
    }
    return q;
}

}  // namespace

std::string_view to_string(SynthKind kind) {
    switch (kind) {
        case SynthKind::gaussian: return "gaussian";
        case SynthKind::subspace_gaussian: return "subspace";
        case SynthKind::uniform_ball: return "ball";
    }
    return "gaussian";
}

SynthKind parse_synth_kind(std::string_view text) {
    if (text == "gaussian") return SynthKind::gaussian;
    if (text == "subspace" || text == "subspace_gaussian") return SynthKind::subspace_gaussian;
    if (text == "ball" || text == "uniform_ball") return SynthKind::uniform_ball;
    throw ConfigError("unknown generator '" + std::string(text) +
                      "' (expected gaussian, subspace or ball)");
}

std::string SynthSpec::label() const {
    std::string s = std::string(to_string(kind)) + "-n" + std::to_string(n) + "-d" +
                    std::to_string(d);
    if (kind == SynthKind::subspace_gaussian) {
        s += "-k" + std::to_string(intrinsic_dim);
        if (noise_sigma != 0.0) s += "-noise" + format_double(noise_sigma);
    }
    return s + "-s" + std::to_string(seed);
}

void SynthSpec::validate() const {
    if (n == 0) throw ConfigError("synthetic n must be at least 1");
    if (d == 0) throw ConfigError("synthetic d must be at least 1");
    if (kind == SynthKind::subspace_gaussian) {
        if (intrinsic_dim == 0) throw ConfigError("intrinsic dimension must be at least 1");
        if (intrinsic_dim > d) {
            throw ConfigError("intrinsic dimension " + std::to_string(intrinsic_dim) +
                              " exceeds ambient dimension " + std::to_string(d));
        }
        if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
            throw ConfigError("noise sigma must be finite and non-negative");
        }
    }
}

VectorDataset gaussian_dataset(const SynthSpec& spec) {
    if (spec.kind != SynthKind::gaussian) throw ConfigError("spec is not a gaussian spec");
    spec.validate();
    return VectorDataset(spec.label(), spec.d, normal_block(spec.n * spec.d, spec.seed),
                         DataSource::synthetic, attributes_of(spec));
}

VectorDataset subspace_gaussian(const SynthSpec& spec) {
    if (spec.kind != SynthKind::subspace_gaussian) throw ConfigError("spec is not a subspace spec");
    spec.validate();
    const std::size_t n = spec.n, d = spec.d, k = spec.intrinsic_dim;

    const std::vector<float> latent = normal_block(n * k, spec.seed);
    const Eigen::MatrixXd basis = orthonormal_basis(d, k, splitmix64(spec.seed ^ kBasisStream));
    Rng noise(splitmix64(spec.seed ^ kNoiseStream));

    std::vector<float> data(n * d);
    constexpr std::size_t kChunk = 4096;
    for (std::size_t begin = 0; begin < n; begin += kChunk) {
        const std::size_t rows = std::min(kChunk, n - begin);
        Eigen::MatrixXd z(k, rows);
        for (std::size_t i = 0; i < rows; ++i) {
            for (std::size_t t = 0; t < k; ++t) z(t, i) = latent[(begin + i) * k + t];
        }
        const Eigen::MatrixXd x = basis * z;  // d x rows
        for (std::size_t i = 0; i < rows; ++i) {
            float* out = data.data() + (begin + i) * d;
            for (std::size_t j = 0; j < d; ++j) out[j] = static_cast<float>(x(j, i));
        }
    }
    if (spec.noise_sigma > 0.0) {
        for (auto& v : data) {
            v = static_cast<float>(static_cast<double>(v) + spec.noise_sigma * noise.normal());
        }
    }
    return VectorDataset(spec.label(), d, std::move(data), DataSource::synthetic,
                         attributes_of(spec));
}

VectorDataset uniform_ball(const SynthSpec& spec) {
    if (spec.kind != SynthKind::uniform_ball) throw ConfigError("spec is not a ball spec");
    spec.validate();
    const std::size_t d = spec.d;
    Rng rng(spec.seed);
    std::vector<float> data(spec.n * d);
    std::vector<double> dir(d);
    for (std::size_t i = 0; i < spec.n; ++i) {
        double norm_sq = 0.0;
        do {
            norm_sq = 0.0;
            for (auto& v : dir) {
                v = rng.normal();
                norm_sq += v * v;
            }
        } while (norm_sq == 0.0);
        const double radius = std::pow(rng.uniform(), 1.0 / static_cast<double>(d));
        const double scale = radius / std::sqrt(norm_sq);
        float* out = data.data() + i * d;
        for (std::size_t j = 0; j < d; ++j) out[j] = static_cast<float>(dir[j] * scale);
        // f32 rounding can push a point with radius near 1 just outside the ball.
        for (;;) {
            double stored_sq = 0.0;
            for (std::size_t j = 0; j < d; ++j) stored_sq += double(out[j]) * double(out[j]);
            if (stored_sq <= 1.0) break;
            for (std::size_t j = 0; j < d; ++j) out[j] *= 1.0f - 0x1.0p-23f;
        }
    }
    return VectorDataset(spec.label(), d, std::move(data), DataSource::synthetic,
                         attributes_of(spec));
}

VectorDataset generate(const SynthSpec& spec) {
    switch (spec.kind) {
        case SynthKind::gaussian: return gaussian_dataset(spec);
        case SynthKind::subspace_gaussian: return subspace_gaussian(spec);
        case SynthKind::uniform_ball: return uniform_ball(spec);
    }
    throw ConfigError("unknown generator");
}

}  // namespace nnm
