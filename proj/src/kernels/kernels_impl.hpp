#pragma once

#include "dmsec/kernels/kernels.hpp"

namespace dmsec::kernels::detail {

inline constexpr double kQpskLevel = 0.70710678118654752440;

// One output sample of synthesize; shared so that vector tails match the
// reference path exactly.
inline void synthesize_one(const ProbeGains& g, std::size_t stride, std::size_t i, const double* sym_re,
                           const double* sym_im, const double* an_re, const double* an_im, const double* noise_re,
                           const double* noise_im, double* y_re, double* y_im) {
    double acc_re = 0.0;
    double acc_im = 0.0;
    for (int j = 0; j < g.streams; ++j) {
        const double xr = sym_re[j * stride + i];
        const double xi = sym_im[j * stride + i];
        acc_re = acc_re + (g.re[j] * xr - g.im[j] * xi);
        acc_im = acc_im + (g.re[j] * xi + g.im[j] * xr);
    }
    y_re[i] = (acc_re + g.an_scale * an_re[i]) + g.noise_scale * noise_re[i];
    y_im[i] = (acc_im + g.an_scale * an_im[i]) + g.noise_scale * noise_im[i];
}

void qpsk_map_scalar(const std::uint8_t* bits, std::size_t n, double* re, double* im);
void synthesize_scalar(const ProbeGains& g, std::size_t n, const double* sym_re, const double* sym_im,
                       const double* an_re, const double* an_im, const double* noise_re, const double* noise_im,
                       double* y_re, double* y_im);
std::uint64_t count_errors_scalar(const double* y_re, const double* y_im, double ref_re, double ref_im,
                                  const double* sym_re, const double* sym_im, std::size_t n);

#if defined(DMSEC_HAVE_AVX2)
void qpsk_map_avx2(const std::uint8_t* bits, std::size_t n, double* re, double* im);
void synthesize_avx2(const ProbeGains& g, std::size_t n, const double* sym_re, const double* sym_im,
                     const double* an_re, const double* an_im, const double* noise_re, const double* noise_im,
                     double* y_re, double* y_im);
std::uint64_t count_errors_avx2(const double* y_re, const double* y_im, double ref_re, double ref_im,
                                const double* sym_re, const double* sym_im, std::size_t n);
#endif

}  // namespace dmsec::kernels::detail
