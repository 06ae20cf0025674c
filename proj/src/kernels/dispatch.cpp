#include <cstdlib>
#include <cstring>

#include "nnm/kernels.hpp"

namespace nnm::kernels {

#if defined(NNM_HAVE_AVX2_KERNELS)
const KernelSet* avx2_table();
#endif
#if defined(NNM_HAVE_NEON_KERNELS)
const KernelSet* neon_table();
#endif

const KernelSet* avx2() {
#if defined(NNM_HAVE_AVX2_KERNELS)
    static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return supported ? avx2_table() : nullptr;
#else
    return nullptr;
#endif
}

const KernelSet* neon() {
#if defined(NNM_HAVE_NEON_KERNELS)
    return neon_table();
#else
    return nullptr;
#endif
}

std::vector<const KernelSet*> available() {
    std::vector<const KernelSet*> out{&scalar()};
    if (const auto* k = avx2()) out.push_back(k);
    if (const auto* k = neon()) out.push_back(k);
    return out;
}

const KernelSet* find(std::string_view name) {
    for (const auto* k : available()) {
        if (name == k->name) return k;
    }
    return nullptr;
}

const KernelSet& active() {
    if (const char* forced = std::getenv("NN_MEANING_KERNELS"); forced && *forced) {
        const auto* k = find(forced);
        return k ? *k : scalar();
    }
    return *available().back();
}

}  // namespace nnm::kernels
