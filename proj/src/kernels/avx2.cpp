// Compiled with -mavx2 and without -mfma; see kernels.hpp for the contract.

#include <immintrin.h>

#include "kernels_impl.hpp"

namespace dmsec::kernels::detail {

namespace {

std::uint64_t popcount4(int mask) { return static_cast<std::uint64_t>(__builtin_popcount(mask & 0xF)); }

}  // namespace

void qpsk_map_avx2(const std::uint8_t* bits, std::size_t n, double* re, double* im) {
    const __m256d plus = _mm256_set1_pd(kQpskLevel);
    const __m256d minus = _mm256_set1_pd(-kQpskLevel);
    const __m256d zero = _mm256_setzero_pd();
    // Bytes arrive as b0, b1 pairs; gather the four b0 into the low lane and the four b1 into the high lane.
    const __m256i split = _mm256_setr_epi32(0, 2, 4, 6, 1, 3, 5, 7);

    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m128i raw = _mm_loadl_epi64(reinterpret_cast<const __m128i*>(bits + 2 * i));
        const __m256i wide = _mm256_permutevar8x32_epi32(_mm256_cvtepu8_epi32(raw), split);
        const __m256d b0 = _mm256_cvtepi32_pd(_mm256_castsi256_si128(wide));
        const __m256d b1 = _mm256_cvtepi32_pd(_mm256_extracti128_si256(wide, 1));
        _mm256_storeu_pd(re + i, _mm256_blendv_pd(plus, minus, _mm256_cmp_pd(b1, zero, _CMP_NEQ_OQ)));
        _mm256_storeu_pd(im + i, _mm256_blendv_pd(plus, minus, _mm256_cmp_pd(b0, zero, _CMP_NEQ_OQ)));
    }
    if (i < n) qpsk_map_scalar(bits + 2 * i, n - i, re + i, im + i);
}

void synthesize_avx2(const ProbeGains& g, std::size_t n, const double* sym_re, const double* sym_im,
                     const double* an_re, const double* an_im, const double* noise_re, const double* noise_im,
                     double* y_re, double* y_im) {
    const __m256d an_scale = _mm256_set1_pd(g.an_scale);
    const __m256d noise_scale = _mm256_set1_pd(g.noise_scale);

    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d acc_re = _mm256_setzero_pd();
        __m256d acc_im = _mm256_setzero_pd();
        for (int j = 0; j < g.streams; ++j) {
            const __m256d gr = _mm256_set1_pd(g.re[j]);
            const __m256d gi = _mm256_set1_pd(g.im[j]);
            const __m256d xr = _mm256_loadu_pd(sym_re + j * n + i);
            const __m256d xi = _mm256_loadu_pd(sym_im + j * n + i);
            acc_re = _mm256_add_pd(acc_re, _mm256_sub_pd(_mm256_mul_pd(gr, xr), _mm256_mul_pd(gi, xi)));
            acc_im = _mm256_add_pd(acc_im, _mm256_add_pd(_mm256_mul_pd(gr, xi), _mm256_mul_pd(gi, xr)));
        }
        const __m256d yr = _mm256_add_pd(_mm256_add_pd(acc_re, _mm256_mul_pd(an_scale, _mm256_loadu_pd(an_re + i))),
                                         _mm256_mul_pd(noise_scale, _mm256_loadu_pd(noise_re + i)));
        const __m256d yi = _mm256_add_pd(_mm256_add_pd(acc_im, _mm256_mul_pd(an_scale, _mm256_loadu_pd(an_im + i))),
                                         _mm256_mul_pd(noise_scale, _mm256_loadu_pd(noise_im + i)));
        _mm256_storeu_pd(y_re + i, yr);
        _mm256_storeu_pd(y_im + i, yi);
    }
    for (; i < n; ++i) synthesize_one(g, n, i, sym_re, sym_im, an_re, an_im, noise_re, noise_im, y_re, y_im);
}

std::uint64_t count_errors_avx2(const double* y_re, const double* y_im, double ref_re, double ref_im,
                                const double* sym_re, const double* sym_im, std::size_t n) {
    const __m256d rr = _mm256_set1_pd(ref_re);
    const __m256d ri = _mm256_set1_pd(ref_im);
    const __m256d zero = _mm256_setzero_pd();

    std::uint64_t errors = 0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d yr = _mm256_loadu_pd(y_re + i);
        const __m256d yi = _mm256_loadu_pd(y_im + i);
        const __m256d zr = _mm256_add_pd(_mm256_mul_pd(yr, rr), _mm256_mul_pd(yi, ri));
        const __m256d zi = _mm256_sub_pd(_mm256_mul_pd(yi, rr), _mm256_mul_pd(yr, ri));
        const __m256d miss_re = _mm256_xor_pd(_mm256_cmp_pd(zr, zero, _CMP_LT_OQ),
                                              _mm256_cmp_pd(_mm256_loadu_pd(sym_re + i), zero, _CMP_LT_OQ));
        const __m256d miss_im = _mm256_xor_pd(_mm256_cmp_pd(zi, zero, _CMP_LT_OQ),
                                              _mm256_cmp_pd(_mm256_loadu_pd(sym_im + i), zero, _CMP_LT_OQ));
        errors += popcount4(_mm256_movemask_pd(miss_re)) + popcount4(_mm256_movemask_pd(miss_im));
    }
    if (i < n) errors += count_errors_scalar(y_re + i, y_im + i, ref_re, ref_im, sym_re + i, sym_im + i, n - i);
    return errors;
}

}  // namespace dmsec::kernels::detail
