#include <algorithm>
#include <cstring>
#include <random>
#include <vector>

#include <doctest.h>

#include "dmsec/kernels/kernels.hpp"
#include "dmsec/rng.hpp"

using namespace dmsec::kernels;

namespace {

struct Buffers {
    std::vector<std::uint8_t> bits;
    std::vector<double> sym_re, sym_im, an_re, an_im, noise_re, noise_im;
    std::vector<double> g_re, g_im;
};

Buffers random_buffers(std::size_t n, int streams, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    Buffers b;
    b.bits.resize(2 * n);
    for (auto& x : b.bits) x = static_cast<std::uint8_t>(rng() & 1U);
    b.sym_re.resize(n * streams);
    b.sym_im.resize(n * streams);
    for (auto* v : {&b.an_re, &b.an_im, &b.noise_re, &b.noise_im}) {
        v->resize(n);
        for (auto& x : *v) x = g(rng);
    }
    for (int j = 0; j < streams; ++j) {
        b.g_re.push_back(g(rng));
        b.g_im.push_back(g(rng));
    }
    return b;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("scalar QPSK map follows the Gray table") {
    const std::uint8_t bits[8] = {0, 0, 0, 1, 1, 1, 1, 0};
    double re[4], im[4];
    scalar_kernels().qpsk_map(bits, 4, re, im);
    const double r = 0.70710678118654752440;
    CHECK(re[0] == r);
    CHECK(im[0] == r);
    CHECK(re[1] == -r);
    CHECK(im[1] == r);
    CHECK(re[2] == -r);
    CHECK(im[2] == -r);
    CHECK(re[3] == r);
    CHECK(im[3] == -r);
}

TEST_CASE("scalar error count") {
    // Noiseless observation rotated by the reference: no errors.
    const double r = 0.70710678118654752440;
    const double sre[2] = {r, -r}, sim[2] = {-r, -r};
    const double yre[2] = {-sim[0] * 2, -sim[1] * 2};  // (0 + 2j) * x = -2 im + 2j re
    const double yim[2] = {sre[0] * 2, sre[1] * 2};
    CHECK(scalar_kernels().count_errors(yre, yim, 0.0, 2.0, sre, sim, 2) == 0);
    // Inverted observations: both bits of both symbols wrong.
    const double nre[2] = {-yre[0], -yre[1]}, nim[2] = {-yim[0], -yim[1]};
    CHECK(scalar_kernels().count_errors(nre, nim, 0.0, 2.0, sre, sim, 2) == 4);
}

TEST_CASE("dispatch") {
    CHECK(kernels_for(Isa::Scalar) == &scalar_kernels());
    const KernelTable& active = active_kernels();
    CHECK(!active.name.empty());
    if (const KernelTable* avx = kernels_for(Isa::Avx2)) CHECK(avx->isa == Isa::Avx2);
}

TEST_CASE("AVX2 kernels are bit-identical to the scalar reference") {
    const KernelTable* avx = kernels_for(Isa::Avx2);
    if (avx == nullptr) {
        MESSAGE("AVX2 variant unavailable on this host; skipping");
        return;
    }
    const KernelTable& ref = scalar_kernels();
    for (std::size_t n : {std::size_t{1}, std::size_t{3}, std::size_t{4}, std::size_t{7}, std::size_t{8},
                          std::size_t{9}, std::size_t{31}, std::size_t{37}, std::size_t{1000}, std::size_t{8192}}) {
        for (int streams : {1, 2, 3}) {
            Buffers b = random_buffers(n, streams, dmsec::substream_seed(1, {n, std::uint64_t(streams)}));

            std::vector<double> r_re(n * streams), r_im(n * streams), a_re(n * streams), a_im(n * streams);
            for (int j = 0; j < streams; ++j) {
                std::vector<std::uint8_t> bits = b.bits;
                std::rotate(bits.begin(), bits.begin() + (j % bits.size()), bits.end());
                ref.qpsk_map(bits.data(), n, r_re.data() + j * n, r_im.data() + j * n);
                avx->qpsk_map(bits.data(), n, a_re.data() + j * n, a_im.data() + j * n);
            }
            CHECK(same_bits(r_re, a_re));
            CHECK(same_bits(r_im, a_im));

            const ProbeGains gains{b.g_re.data(), b.g_im.data(), streams, 0.37, 1.3};
            std::vector<double> yr(n), yi(n), ya(n), yb(n);
            ref.synthesize(gains, n, r_re.data(), r_im.data(), b.an_re.data(), b.an_im.data(), b.noise_re.data(),
                           b.noise_im.data(), yr.data(), yi.data());
            avx->synthesize(gains, n, r_re.data(), r_im.data(), b.an_re.data(), b.an_im.data(), b.noise_re.data(),
                            b.noise_im.data(), ya.data(), yb.data());
            CHECK(same_bits(yr, ya));
            CHECK(same_bits(yi, yb));

            for (int j = 0; j < streams; ++j) {
                CHECK(ref.count_errors(yr.data(), yi.data(), b.g_re[j], b.g_im[j], r_re.data() + j * n,
                                       r_im.data() + j * n, n) ==
                      avx->count_errors(yr.data(), yi.data(), b.g_re[j], b.g_im[j], r_re.data() + j * n,
                                        r_im.data() + j * n, n));
            }
        }
    }
}

TEST_CASE("substream seeds are order independent and distinct") {
    static_assert(dmsec::substream_seed(1, {2, 3}) == dmsec::substream_seed(1, {2, 3}));
    CHECK(dmsec::substream_seed(1, {2, 3}) != dmsec::substream_seed(1, {3, 2}));
    CHECK(dmsec::substream_seed(1, {2}) != dmsec::substream_seed(2, {2}));
    CHECK(dmsec::substream_seed(1, {}) != dmsec::substream_seed(1, {0}));
}

}
