#include <cstdlib>
#include <string_view>

#include "kernels_impl.hpp"

namespace dmsec::kernels {

namespace {

constexpr KernelTable kScalar{Isa::Scalar, "scalar", detail::qpsk_map_scalar, detail::synthesize_scalar,
                              detail::count_errors_scalar};

#if defined(DMSEC_HAVE_AVX2)
constexpr KernelTable kAvx2{Isa::Avx2, "avx2", detail::qpsk_map_avx2, detail::synthesize_avx2,
                            detail::count_errors_avx2};

bool cpu_has_avx2() {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2");
}
#endif

const KernelTable& pick() {
    if (const char* forced = std::getenv("DMSEC_ISA"); forced && std::string_view(forced) == "scalar") {
        return kScalar;
    }
    if (const KernelTable* k = kernels_for(Isa::Avx2)) return *k;
    return kScalar;
}

}  // namespace

const KernelTable& scalar_kernels() { return kScalar; }

const KernelTable* kernels_for(Isa isa) {
    switch (isa) {
        case Isa::Scalar: return &kScalar;
        case Isa::Avx2:
#if defined(DMSEC_HAVE_AVX2)
            return cpu_has_avx2() ? &kAvx2 : nullptr;
#else
            return nullptr;
#endif
    }
    return nullptr;
}

const KernelTable& active_kernels() {
    static const KernelTable& table = pick();
    return table;
}

}  // namespace dmsec::kernels
