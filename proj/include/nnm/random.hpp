#pragma once

#include <cstdint>
#include <random>

namespace nnm {

/// Seeded stream used by every generator in the library.
///
/// Engine is std::mt19937_64 (fully specified by the standard). Uniform and
/// normal variates are derived here rather than through the
/// implementation-defined <random> distributions, so a seed yields the same
/// numbers on every standard library:
///   uniform: top 53 bits of one engine output scaled to [0, 1);
///   normal:  Marsaglia polar method, second variate of each pair cached.
class Rng {
public:
    static constexpr const char* kNormalAlgorithm = "marsaglia-polar/mt19937_64";

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }
    double uniform();
    /// Unbiased integer in [0, bound), bound > 0.
    std::uint64_t bounded(std::uint64_t bound);
    double normal();

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// SplitMix64 finalizer; used to derive independent sub-stream seeds.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace nnm
