#pragma once

// Inner loops of the Monte Carlo probe receiver. Every kernel has a portable
// scalar reference and an AVX2 variant; the variant is picked once at
// startup from the host CPU. Both variants evaluate the same expressions in
// the same order without fused multiply-add, so their outputs are
// bit-identical and a simulation does not depend on the dispatch choice.
//
// Buffers are structure-of-arrays doubles; stream-major where several
// streams share one buffer (stream j occupies [j*n, (j+1)*n)).

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace dmsec::kernels {

enum class Isa { Scalar, Avx2 };

struct ProbeGains {
    const double* re;  // composite gain of each stream at the probe
    const double* im;
    int streams;
    double an_scale;     // standard deviation of the AN term at the probe
    double noise_scale;  // standard deviation of the receiver noise
};

struct KernelTable {
    Isa isa;
    std::string_view name;

    // bits[2i], bits[2i+1] -> Gray-mapped unit-energy QPSK symbol i.
    void (*qpsk_map)(const std::uint8_t* bits, std::size_t n, double* re, double* im);

    // y = sum_j g_j x_j + an_scale * w + noise_scale * e for n samples, with
    // w and e unit-variance complex draws.
    void (*synthesize)(const ProbeGains& gains, std::size_t n, const double* sym_re, const double* sym_im,
                       const double* an_re, const double* an_im, const double* noise_re, const double* noise_im,
                       double* y_re, double* y_im);

    // Bit errors of coherent QPSK detection y * conj(ref) against the sent symbols.
    std::uint64_t (*count_errors)(const double* y_re, const double* y_im, double ref_re, double ref_im,
                                  const double* sym_re, const double* sym_im, std::size_t n);
};

const KernelTable& scalar_kernels();

// nullptr when the variant was not compiled in or the CPU lacks the ISA.
const KernelTable* kernels_for(Isa isa);

// Best variant for this host. DMSEC_ISA=scalar in the environment forces the
// reference path.
const KernelTable& active_kernels();

}  // namespace dmsec::kernels
