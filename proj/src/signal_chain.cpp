#include "dmsec/signal_chain.hpp"

#include <cmath>
#include <string>

#include "dmsec/precoder.hpp"

namespace dmsec {

PowerProfile PowerProfile::from_snr(double snr_db, double beta1_squared, double total_power) {
    if (!(beta1_squared > 0.0 && beta1_squared <= 1.0)) throw DomainError("beta1^2 must lie in (0, 1]");
    if (!(total_power > 0.0)) throw DomainError("total power must be positive");
    PowerProfile p;
    p.total_power = total_power;
    p.beta1 = std::sqrt(beta1_squared);
    p.beta2 = std::sqrt(1.0 - beta1_squared);
    p.sigma_d2 = total_power / std::pow(10.0, snr_db / 10.0);
    p.sigma_e2 = p.sigma_d2;
    p.sigma_z2 = 1.0;
    return p;
}

void PowerProfile::validate() const {
    if (!(total_power > 0.0)) throw DomainError("total power must be positive");
    if (std::abs(beta1 * beta1 + beta2 * beta2 - 1.0) > 1e-12) throw DomainError("beta1^2 + beta2^2 must equal 1");
    if (!(sigma_d2 > 0.0 && sigma_e2 > 0.0 && sigma_z2 > 0.0)) throw DomainError("noise variances must be positive");
}

NormFactors norm_factors(const PowerProfile& profile, int group_count, int an_dim) {
    if (group_count < 1) throw DomainError("group count must be >= 1");
    if (an_dim < 1) throw DomainError("AN dimension must be >= 1");
    return {1.0 / std::sqrt(static_cast<double>(group_count)),
            1.0 / std::sqrt(profile.sigma_z2 * static_cast<double>(an_dim))};
}

std::vector<cplx> qpsk_modulate(std::span<const std::uint8_t> bits) {
    if (bits.size() % 2 != 0) throw DomainError("QPSK needs an even number of bits");
    std::vector<cplx> out(bits.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double re = bits[2 * i + 1] ? -kInvSqrt2 : kInvSqrt2;
        const double im = bits[2 * i] ? -kInvSqrt2 : kInvSqrt2;
        out[i] = {re, im};
    }
    return out;
}

Demodulated qpsk_demodulate(std::span<const cplx> observations, cplx channel_gain, std::mt19937_64& guess_rng) {
    Demodulated out;
    out.bits.resize(2 * observations.size());
    if (channel_gain == cplx(0.0, 0.0)) {
        out.gain_was_zero = true;
        std::bernoulli_distribution coin(0.5);
        for (auto& b : out.bits) b = coin(guess_rng) ? 1 : 0;
        return out;
    }
    const cplx derotate = std::conj(channel_gain) / std::abs(channel_gain);
    for (std::size_t i = 0; i < observations.size(); ++i) {
        const cplx z = observations[i] * derotate;
        out.bits[2 * i] = z.imag() < 0.0 ? 1 : 0;
        out.bits[2 * i + 1] = z.real() < 0.0 ? 1 : 0;
    }
    return out;
}

Demodulated qpsk_demodulate(std::span<const cplx> observations, cplx channel_gain) {
    std::mt19937_64 rng(0);
    return qpsk_demodulate(observations, channel_gain, rng);
}

CVector transmit_signal(const PrecoderSet& precoders, std::span<const cplx> symbols, const AnProjector& an,
                        const CVector& an_sample, const PowerProfile& profile, const NormFactors& factors) {
    if (symbols.size() != precoders.blocks.size()) {
        throw DomainError("need one symbol per group: got " + std::to_string(symbols.size()) + " for " +
                          std::to_string(precoders.blocks.size()) + " groups");
    }
    if (an_sample.size() != an.dim()) throw DomainError("AN sample length does not match the projector width");
    const Eigen::Index n = an.basis.rows();
    const double root_power = std::sqrt(profile.total_power);

    CVector cm = CVector::Zero(n);
    for (std::size_t k = 0; k < symbols.size(); ++k) {
        const CVector v = precoders.effective(static_cast<int>(k));
        if (v.size() != n) throw DomainError("precoder length does not match the array");
        cm += v * symbols[k];
    }
    return factors.alpha1 * profile.beta1 * root_power * cm +
           factors.alpha2 * profile.beta2 * root_power * (an.basis * an_sample);
}

CVector receive(const CMatrix& channel, const CVector& transmit, const CVector& noise) {
    if (channel.rows() != transmit.size()) throw DomainError("transmit vector length does not match the channel");
    if (channel.cols() != noise.size()) throw DomainError("noise length must equal the channel column count");
    return channel.adjoint() * transmit + noise;
}

CVector complex_gaussian(Eigen::Index n, double variance, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, std::sqrt(variance / 2.0));
    CVector out(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double re = g(rng);
        const double im = g(rng);
        out(i) = {re, im};
    }
    return out;
}

}  // namespace dmsec
