#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "dmsec/types.hpp"

namespace dmsec {

struct PrecoderSet;
struct AnProjector;

// Transmit power budget and noise levels. beta1^2 + beta2^2 = 1 splits P_s
// between the confidential messages and the artificial noise.
struct PowerProfile {
    double total_power = 1.0;
    double beta1 = 1.0;
    double beta2 = 0.0;
    double sigma_d2 = 1.0;
    double sigma_e2 = 1.0;
    double sigma_z2 = 1.0;

    // sigma_d2 = sigma_e2 = P_s / 10^(snr/10).
    static PowerProfile from_snr(double snr_db, double beta1_squared, double total_power = 1.0);

    void validate() const;
};

struct NormFactors {
    double alpha1 = 1.0;
    double alpha2 = 1.0;
};

// Unit-energy symbols: alpha1 = 1/sqrt(K), alpha2 = 1/sqrt(sigma_z2 * L).
NormFactors norm_factors(const PowerProfile& profile, int group_count, int an_dim);

inline constexpr double kInvSqrt2 = 0.70710678118654752440;

// Gray map, unit energy. A pair (b0, b1) maps to ((b1 ? -1 : 1) + j (b0 ? -1 : 1)) / sqrt(2):
// 00 -> (+1+j), 01 -> (-1+j), 11 -> (-1-j), 10 -> (+1-j).
std::vector<cplx> qpsk_modulate(std::span<const std::uint8_t> bits);

struct Demodulated {
    std::vector<std::uint8_t> bits;
    bool gain_was_zero = false;  // detector had no reference; bits are random guesses
};

// Coherent detection: derotate by conj(gain)/|gain| and slice per quadrant.
// Ties fall to the positive half-planes. A zero gain yields fair coin flips.
Demodulated qpsk_demodulate(std::span<const cplx> observations, cplx channel_gain,
                            std::mt19937_64& guess_rng);
Demodulated qpsk_demodulate(std::span<const cplx> observations, cplx channel_gain);

// s = alpha1 beta1 sqrt(P_s) sum_k V_k 1 x_k + alpha2 beta2 sqrt(P_s) T_AN z.
CVector transmit_signal(const PrecoderSet& precoders, std::span<const cplx> symbols,
                        const AnProjector& an, const CVector& an_sample,
                        const PowerProfile& profile, const NormFactors& factors);

// y = H^H s + n.
CVector receive(const CMatrix& channel, const CVector& transmit, const CVector& noise);

// n i.i.d. CN(0, variance) samples.
CVector complex_gaussian(Eigen::Index n, double variance, std::mt19937_64& rng);

}  // namespace dmsec
