#include "dmsec/metrics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

#include <Eigen/LU>

#include "dmsec/kernels/kernels.hpp"
#include "dmsec/rng.hpp"

namespace dmsec {

namespace {

double cm_power(const PowerProfile& p, const NormFactors& f) {
    return f.alpha1 * f.alpha1 * p.beta1 * p.beta1 * p.total_power;
}

double an_scale_power(const PowerProfile& p, const NormFactors& f) {
    return f.alpha2 * f.alpha2 * p.beta2 * p.beta2 * p.total_power * p.sigma_z2;
}

NormFactors factors_for(const Design& d, const PowerProfile& profile) {
    return norm_factors(profile, d.precoders.group_count(), static_cast<int>(d.an.dim()));
}

}  // namespace

double an_power_at(const CVector& h, const Design& design, const PowerProfile& profile, const NormFactors& factors) {
    return an_scale_power(profile, factors) * (design.an.basis.adjoint() * h).squaredNorm();
}

double sinr_at(const CVector& h, int k, const Design& design, const PowerProfile& profile,
               const NormFactors& factors, double noise_variance) {
    const double cm = cm_power(profile, factors);
    double signal = 0.0;
    double interference = 0.0;
    for (int j = 0; j < design.precoders.group_count(); ++j) {
        const double g = std::norm(h.dot(design.precoders.effective(j)));
        if (j == k) {
            signal = cm * g;
        } else {
            interference += cm * g;
        }
    }
    return signal / (interference + an_power_at(h, design, profile, factors) + noise_variance);
}

double sinr_desired(int k, int i, const Design& design, const Channels& ch, const PowerProfile& profile,
                    const NormFactors& factors) {
    return sinr_at(ch.desired.at(k).col(i), k, design, profile, factors, profile.sigma_d2);
}

double sinr_eve(int m, int k, const Design& design, const Channels& ch, const PowerProfile& profile,
                const NormFactors& factors) {
    return sinr_at(ch.eve.col(m), k, design, profile, factors, profile.sigma_e2);
}

SinrReport sinr_report(const Design& design, const Channels& ch, const PowerProfile& profile,
                       const NormFactors& factors) {
    SinrReport r;
    const int groups = ch.group_count();
    r.desired.resize(groups);
    for (int k = 0; k < groups; ++k) {
        for (Eigen::Index i = 0; i < ch.desired[k].cols(); ++i) {
            r.desired[k].push_back(sinr_desired(k, static_cast<int>(i), design, ch, profile, factors));
        }
    }
    r.eve.resize(ch.eve.cols());
    for (Eigen::Index m = 0; m < ch.eve.cols(); ++m) {
        for (int k = 0; k < groups; ++k) {
            r.eve[m].push_back(sinr_eve(static_cast<int>(m), k, design, ch, profile, factors));
        }
    }
    return r;
}

double eve_rate(int k, const Design& design, const Channels& ch, const PowerProfile& profile,
                const NormFactors& factors, EveModel model) {
    if (model == EveModel::BestSingle) {
        double best = 0.0;
        for (Eigen::Index m = 0; m < ch.eve.cols(); ++m) {
            best = std::max(best, std::log2(1.0 + sinr_eve(static_cast<int>(m), k, design, ch, profile, factors)));
        }
        return best;
    }

    const Eigen::Index m = ch.eve.cols();
    const double cm = cm_power(profile, factors);
    CMatrix cov = profile.sigma_e2 * CMatrix::Identity(m, m);
    for (int j = 0; j < design.precoders.group_count(); ++j) {
        if (j == k) continue;
        const CVector u = ch.eve.adjoint() * design.precoders.effective(j);
        cov += cm * u * u.adjoint();
    }
    const CMatrix an_at_eve = ch.eve.adjoint() * design.an.basis;
    cov += an_scale_power(profile, factors) * an_at_eve * an_at_eve.adjoint();

    const CVector own = ch.eve.adjoint() * design.precoders.effective(k);
    const CMatrix gain = CMatrix::Identity(m, m) + cm * cov.partialPivLu().solve(own * own.adjoint());
    return std::log2(std::abs(gain.partialPivLu().determinant()));
}

double secrecy_sum_rate(int k, const Design& design, const Channels& ch, const PowerProfile& profile,
                        const NormFactors& factors, EveModel model) {
    double desired = 0.0;
    for (Eigen::Index i = 0; i < ch.desired.at(k).cols(); ++i) {
        desired += std::log2(1.0 + sinr_desired(k, static_cast<int>(i), design, ch, profile, factors));
    }
    return std::max(0.0, desired - eve_rate(k, design, ch, profile, factors, model));
}

ProbeErrors probe_errors(double theta_deg, int k, const Design& design, const ArrayConfig& cfg,
                         const PowerProfile& profile, std::int64_t n_symbols, std::uint64_t seed) {
    if (n_symbols <= 0) throw DomainError("probe needs a positive symbol count");
    const int streams = design.precoders.group_count();
    if (k < 0 || k >= streams) throw DomainError("group index out of range");

    const NormFactors factors = factors_for(design, profile);
    const CVector h = steering_vector(theta_deg, cfg);
    const double cm_amp = factors.alpha1 * profile.beta1 * std::sqrt(profile.total_power);

    // The probe only sees h^H s, so the N-dimensional transmit vector reduces
    // to one composite gain per stream and the AN projection T^H h. The AN
    // term h^H T z with z ~ CN(0, sigma_z2 I) is drawn directly as
    // CN(0, sigma_z2 ||T^H h||^2) scaled by alpha2 beta2 sqrt(P_s).
    std::vector<double> gain_re(streams), gain_im(streams);
    for (int j = 0; j < streams; ++j) {
        const cplx g = cm_amp * h.dot(design.precoders.effective(j));
        gain_re[j] = g.real();
        gain_im[j] = g.imag();
    }
    const kernels::ProbeGains gains{gain_re.data(), gain_im.data(), streams,
                                    std::sqrt(an_power_at(h, design, profile, factors)),
                                    std::sqrt(profile.sigma_d2)};
    const bool degenerate = std::hypot(gain_re[k], gain_im[k]) <= 1e-12 * cm_amp;

    const kernels::KernelTable& kern = kernels::active_kernels();
    const std::size_t block = static_cast<std::size_t>(kProbeBlockSymbols);
    std::vector<std::uint8_t> bits(2 * block);
    std::vector<double> sym_re(streams * block), sym_im(streams * block);
    std::vector<double> an_re(block), an_im(block), noise_re(block), noise_im(block);
    std::vector<double> y_re(block), y_im(block);

    ProbeErrors out;
    out.degenerate_gain = degenerate;
    const std::int64_t blocks = (n_symbols + kProbeBlockSymbols - 1) / kProbeBlockSymbols;
    for (std::int64_t b = 0; b < blocks; ++b) {
        const std::size_t c = static_cast<std::size_t>(std::min(kProbeBlockSymbols, n_symbols - b * kProbeBlockSymbols));
        std::mt19937_64 rng(substream_seed(seed, {static_cast<std::uint64_t>(b)}));

        for (int j = 0; j < streams; ++j) {
            for (std::size_t w = 0; w < 2 * c; w += 64) {
                std::uint64_t word = rng();
                const std::size_t take = std::min<std::size_t>(64, 2 * c - w);
                for (std::size_t t = 0; t < take; ++t, word >>= 1) bits[w + t] = static_cast<std::uint8_t>(word & 1U);
            }
            kern.qpsk_map(bits.data(), c, sym_re.data() + j * c, sym_im.data() + j * c);
        }

        std::normal_distribution<double> unit(0.0, kInvSqrt2);
        for (std::size_t i = 0; i < c; ++i) {
            an_re[i] = unit(rng);
            an_im[i] = unit(rng);
        }
        for (std::size_t i = 0; i < c; ++i) {
            noise_re[i] = unit(rng);
            noise_im[i] = unit(rng);
        }

        if (degenerate) {
            // No reference for the detector: every bit is a fair guess.
            for (std::size_t w = 0; w < 2 * c; w += 64) {
                const std::size_t take = std::min<std::size_t>(64, 2 * c - w);
                const std::uint64_t mask = take == 64 ? ~0ULL : ((1ULL << take) - 1);
                out.bit_errors += static_cast<std::uint64_t>(std::popcount(rng() & mask));
            }
        } else {
            kern.synthesize(gains, c, sym_re.data(), sym_im.data(), an_re.data(), an_im.data(), noise_re.data(),
                            noise_im.data(), y_re.data(), y_im.data());
            out.bit_errors += kern.count_errors(y_re.data(), y_im.data(), gain_re[k], gain_im[k],
                                                sym_re.data() + k * c, sym_im.data() + k * c, c);
        }
        out.bits += 2 * c;
    }
    return out;
}

BerPoint ber_at_angle(double theta_deg, int k, const Design& design, const ArrayConfig& cfg,
                      const PowerProfile& profile, std::int64_t n_symbols, std::uint64_t seed) {
    if (n_symbols < 10000) throw DomainError("ber_at_angle needs at least 1e4 symbols");
    const ProbeErrors e = probe_errors(theta_deg, k, design, cfg, profile, n_symbols, seed);
    BerPoint p;
    p.sweep_value = theta_deg;
    p.group = k;
    p.scheme = design.scheme;
    p.ber = static_cast<double>(e.bit_errors) / static_cast<double>(e.bits);
    p.trials = n_symbols;
    p.degenerate_gain = e.degenerate_gain;
    return p;
}

}  // namespace dmsec
