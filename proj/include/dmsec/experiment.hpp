#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "dmsec/array_channel.hpp"
#include "dmsec/complexity.hpp"
#include "dmsec/metrics.hpp"
#include "dmsec/precoder.hpp"

namespace dmsec {

struct FlopsSweep {
    std::vector<std::int64_t> k{2};
    std::vector<std::int64_t> t{2};
    std::vector<std::int64_t> n{16};
    std::vector<std::int64_t> m{2};
    bool auto_scale_n = false;  // raise N to K*T + M where it falls short
};

// Everything one experiment run depends on. Angles in degrees, SNR in dB.
struct ExperimentConfig {
    ArrayConfig array;
    GroupLayout layout;
    double total_power = 1.0;
    double beta1_squared = 0.9;
    double snr_db = 14.0;
    std::vector<double> snr_grid_db;
    std::vector<Scheme> schemes;
    std::vector<double> angles_deg;
    double max_error_deg = 5.0;
    int error_realizations = 100;
    std::int64_t trials = 200000;
    std::uint64_t seed = 1;
    EveModel eve_model = EveModel::Colluding;
    FlopsSweep flops;

    // N = 16, d = lambda/2, groups {30, 45} and {120, 135}, eavesdroppers
    // {70, 95}, beta1^2 = 0.9, 14 dB, 0.5 degree grid over [0, 180].
    static ExperimentConfig reference_defaults();

    // Missing keys keep their reference_defaults() value. Throws ConfigError
    // naming the offending field.
    static ExperimentConfig from_json(const nlohmann::json& doc);
    static ExperimentConfig load(const std::string& path);

    nlohmann::json to_json() const;

    void validate() const;
    PowerProfile profile_at(double snr_db) const;
};

// Evenly spaced grid start, start + step, ..., up to stop inclusive.
std::vector<double> angle_grid(double start_deg, double stop_deg, double step_deg);

struct RunOptions {
    int threads = 1;
};

// Each runner writes a CSV: '#' lines with the resolved configuration, one
// column header line, then data rows. Output depends only on the config.
void run_ber_angle(const ExperimentConfig& cfg, std::ostream& out, const RunOptions& opt = {});
void run_ssr_snr(const ExperimentConfig& cfg, std::ostream& out, const RunOptions& opt = {});
void run_robust_ber(const ExperimentConfig& cfg, std::ostream& out, const RunOptions& opt = {});
void run_flops(const ExperimentConfig& cfg, std::ostream& out, const RunOptions& opt = {});

// Result rows without the CSV framing, for programmatic use.
std::vector<BerPoint> ber_angle_points(const ExperimentConfig& cfg, const RunOptions& opt = {});
std::vector<SsrPoint> ssr_snr_points(const ExperimentConfig& cfg, const RunOptions& opt = {});
std::vector<BerPoint> robust_ber_points(const ExperimentConfig& cfg, const RunOptions& opt = {});

}  // namespace dmsec
