#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "dmsec/types.hpp"

namespace dmsec {

// Uniform linear array. Only the spacing-to-wavelength ratio enters the
// steering phases.
struct ArrayConfig {
    int n_antennas = 16;
    double spacing_wavelengths = 0.5;

    void validate() const;
};

// K desired multicast groups plus one eavesdropper group, angles in degrees.
struct GroupLayout {
    std::vector<std::vector<double>> desired_angles;
    std::vector<double> eavesdropper_angles;

    int group_count() const { return static_cast<int>(desired_angles.size()); }
    int group_size(int k) const { return static_cast<int>(desired_angles.at(k).size()); }
    int total_desired() const;
    int eavesdropper_count() const { return static_cast<int>(eavesdropper_angles.size()); }

    // Throws ConfigError when K, T_k, M are empty, an angle leaves (0, 180)
    // or the array has no room for a null space (N <= sum T_k).
    void validate(const ArrayConfig& cfg) const;
};

// Stacked unit-norm steering vectors, one column per user.
using ChannelMatrix = CMatrix;

// Steering vector with phase center at the array midpoint:
//   h(theta)_n = exp(j 2 pi (n - (N+1)/2) (d/lambda) cos theta) / sqrt(N),  n = 1..N.
// Accepts the closed interval [0, 180] degrees so that angle sweeps can
// include the endfire directions; user layouts are still restricted to the
// open interval by GroupLayout::validate.
CVector steering_vector(double theta_deg, const ArrayConfig& cfg);

ChannelMatrix channel_matrix(std::span<const double> angles_deg, const ArrayConfig& cfg);

// All channels of one layout, built once and shared read-only.
struct Channels {
    std::vector<ChannelMatrix> desired;  // one N x T_k block per group
    ChannelMatrix eve;                   // N x M

    int n_antennas() const { return static_cast<int>(eve.rows()); }
    int group_count() const { return static_cast<int>(desired.size()); }
    int total_desired() const;

    // H_d: every desired group side by side, group order then user order.
    ChannelMatrix stacked_desired() const;
    // H_{d,-k}: all desired groups except k. Zero columns when K = 1.
    ChannelMatrix complement(int k) const;
};

Channels build_channels(const GroupLayout& layout, const ArrayConfig& cfg);
ChannelMatrix stacked_desired_channel(const GroupLayout& layout, const ArrayConfig& cfg);

// Direction-measurement error, uniform on [-max_error_deg, +max_error_deg].
struct AngleErrorModel {
    double max_error_deg = 0.0;
    double beam_width_rad = 0.0;  // 2 lambda / (N d), reporting only

    static AngleErrorModel for_array(double max_error_deg, const ArrayConfig& cfg);
};

// Adds an independent uniform error to every angle and clips the result to
// the open sector (0, 180).
std::vector<double> perturb_angles(std::span<const double> angles_deg,
                                   const AngleErrorModel& model, std::mt19937_64& rng);

GroupLayout perturb_layout(const GroupLayout& layout, const AngleErrorModel& model,
                           std::mt19937_64& rng);

}  // namespace dmsec
