#include "kernels_impl.hpp"

namespace dmsec::kernels::detail {

void qpsk_map_scalar(const std::uint8_t* bits, std::size_t n, double* re, double* im) {
    for (std::size_t i = 0; i < n; ++i) {
        re[i] = bits[2 * i + 1] ? -kQpskLevel : kQpskLevel;
        im[i] = bits[2 * i] ? -kQpskLevel : kQpskLevel;
    }
}

void synthesize_scalar(const ProbeGains& g, std::size_t n, const double* sym_re, const double* sym_im,
                       const double* an_re, const double* an_im, const double* noise_re, const double* noise_im,
                       double* y_re, double* y_im) {
    for (std::size_t i = 0; i < n; ++i) {
        synthesize_one(g, n, i, sym_re, sym_im, an_re, an_im, noise_re, noise_im, y_re, y_im);
    }
}

std::uint64_t count_errors_scalar(const double* y_re, const double* y_im, double ref_re, double ref_im,
                                  const double* sym_re, const double* sym_im, std::size_t n) {
    std::uint64_t errors = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double zr = y_re[i] * ref_re + y_im[i] * ref_im;
        const double zi = y_im[i] * ref_re - y_re[i] * ref_im;
        errors += static_cast<std::uint64_t>((zr < 0.0) != (sym_re[i] < 0.0));
        errors += static_cast<std::uint64_t>((zi < 0.0) != (sym_im[i] < 0.0));
    }
    return errors;
}

}  // namespace dmsec::kernels::detail
