#include <cstdlib>
#include <string_view>

#include "boson_decay/kernels.hpp"

namespace boson_decay::kernels {

#if defined(BOSON_DECAY_HAVE_AVX2)
const KernelTable& avx2_kernel_table();
#endif

const KernelTable* avx2_kernels()
{
#if defined(BOSON_DECAY_HAVE_AVX2)
    static const bool supported = __builtin_cpu_supports("avx2")
                                  && __builtin_cpu_supports("fma");
    return supported ? &avx2_kernel_table() : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& active_kernels()
{
    static const KernelTable& table = [] () -> const KernelTable& {
        const char* forced = std::getenv("BOSON_DECAY_SIMD");
        if (forced && std::string_view(forced) == "scalar")
            return scalar_kernels();
        if (const KernelTable* simd = avx2_kernels())
            return *simd;
        return scalar_kernels();
    }();
    return table;
}

double norm_sq(std::span<const cplx> z)
{
    double acc = 0.0;
    for (const cplx& v : z)
        acc += std::norm(v);
    return acc;
}

}  // namespace boson_decay::kernels
