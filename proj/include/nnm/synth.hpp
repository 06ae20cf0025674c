#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "nnm/dataset.hpp"

namespace nnm {

enum class SynthKind { gaussian, subspace_gaussian, uniform_ball };

/// "gaussian" | "subspace" | "ball"
std::string_view to_string(SynthKind kind);
SynthKind parse_synth_kind(std::string_view text);

struct SynthSpec {
    SynthKind kind = SynthKind::gaussian;
    std::size_t n = 100000;
    std::size_t d = 16;
    /// subspace_gaussian only; must not exceed d.
    std::size_t intrinsic_dim = 0;
    /// subspace_gaussian only; standard deviation of ambient noise.
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;

    /// Deterministic label such as "gaussian-n100000-d16-s7".
    std::string label() const;
    /// Throws ConfigError on an invalid combination of fields.
    void validate() const;
};

/// n i.i.d. standard-normal vectors, drawn row-major from one stream.
VectorDataset gaussian_dataset(const SynthSpec& spec);

/// Latent standard normals in intrinsic_dim dimensions, mapped into d
/// dimensions by a seeded orthonormal basis, plus noise_sigma * N(0, I_d).
///
/// The latent block uses the same stream as gaussian_dataset with the same
/// seed, so with noise 0 the result is an exact rotation of
/// gaussian_dataset({n, intrinsic_dim, seed}). Basis and noise use separate
/// streams derived from the seed.
VectorDataset subspace_gaussian(const SynthSpec& spec);

/// n points uniform in the unit d-ball: Gaussian direction, radius U^(1/d).
VectorDataset uniform_ball(const SynthSpec& spec);

/// Dispatches on spec.kind.
VectorDataset generate(const SynthSpec& spec);

}  // namespace nnm
