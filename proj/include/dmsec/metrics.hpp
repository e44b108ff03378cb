#pragma once

#include <cstdint>
#include <vector>

#include "dmsec/array_channel.hpp"
#include "dmsec/precoder.hpp"
#include "dmsec/signal_chain.hpp"

namespace dmsec {

// Linear SINRs. desired[k][i]: user i of group k. eve[m][k]: eavesdropper m on stream k.
struct SinrReport {
    std::vector<std::vector<double>> desired;
    std::vector<std::vector<double>> eve;
};

struct BerPoint {
    double sweep_value = 0.0;  // angle in degrees or SNR in dB
    int group = 0;             // zero-based
    Scheme scheme = Scheme::MaxGrpNsp;
    double ber = 0.0;
    std::int64_t trials = 0;   // symbols
    bool degenerate_gain = false;
};

struct SsrPoint {
    double snr_db = 0.0;
    int group = 0;
    Scheme scheme = Scheme::MaxGrpNsp;
    double ssr = 0.0;  // bits/s/Hz
};

// SINR of stream k at a single-antenna receiver with channel h: own stream
// over the other streams, the AN reaching h and noise of the given variance.
double sinr_at(const CVector& h, int k, const Design& design, const PowerProfile& profile,
               const NormFactors& factors, double noise_variance);

double sinr_desired(int k, int i, const Design& design, const Channels& ch, const PowerProfile& profile,
                    const NormFactors& factors);

double sinr_eve(int m, int k, const Design& design, const Channels& ch, const PowerProfile& profile,
                const NormFactors& factors);

SinrReport sinr_report(const Design& design, const Channels& ch, const PowerProfile& profile,
                       const NormFactors& factors);

// Power of the AN term at a receiver with channel h.
double an_power_at(const CVector& h, const Design& design, const PowerProfile& profile, const NormFactors& factors);

enum class EveModel {
    Colluding,   // the eavesdropper group decodes jointly (log-det)
    BestSingle,  // strongest single eavesdropper
};

// Eavesdropper rate on stream k under the chosen model.
double eve_rate(int k, const Design& design, const Channels& ch, const PowerProfile& profile,
                const NormFactors& factors, EveModel model);

// max(0, sum_i log2(1 + SINR_ki) - eve_rate(k)).
double secrecy_sum_rate(int k, const Design& design, const Channels& ch, const PowerProfile& profile,
                        const NormFactors& factors, EveModel model = EveModel::Colluding);

struct ProbeErrors {
    std::uint64_t bit_errors = 0;
    std::uint64_t bits = 0;
    bool degenerate_gain = false;
};

inline constexpr std::int64_t kProbeBlockSymbols = 8192;

// Monte Carlo error count of stream k at a probe receiver placed at theta.
// Symbols are simulated in blocks of kProbeBlockSymbols; block b draws from
// substream_seed(seed, {b}), so the count does not depend on who runs which
// block.
ProbeErrors probe_errors(double theta_deg, int k, const Design& design, const ArrayConfig& cfg,
                         const PowerProfile& profile, std::int64_t n_symbols, std::uint64_t seed);

// probe_errors packaged as a BER point; requires n_symbols >= 1e4.
BerPoint ber_at_angle(double theta_deg, int k, const Design& design, const ArrayConfig& cfg,
                      const PowerProfile& profile, std::int64_t n_symbols, std::uint64_t seed);

}  // namespace dmsec
