#include "dmsec/array_channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace dmsec {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

// Smallest margin kept from the sector edges after perturbation.
constexpr double kSectorMarginDeg = 1e-9;

bool in_open_sector(double theta_deg) { return theta_deg > 0.0 && theta_deg < 180.0; }

}  // namespace

void ArrayConfig::validate() const {
    if (n_antennas < 2) {
        throw ConfigError("array.n_antennas must be >= 2, got " + std::to_string(n_antennas));
    }
    if (!(spacing_wavelengths > 0.0) || !std::isfinite(spacing_wavelengths)) {
        throw ConfigError("array.spacing_wavelengths must be > 0");
    }
}

int GroupLayout::total_desired() const {
    int total = 0;
    for (const auto& g : desired_angles) total += static_cast<int>(g.size());
    return total;
}

void GroupLayout::validate(const ArrayConfig& cfg) const {
    cfg.validate();
    if (desired_angles.empty()) throw ConfigError("layout.desired_groups must hold at least one group");
    for (std::size_t k = 0; k < desired_angles.size(); ++k) {
        if (desired_angles[k].empty()) {
            throw ConfigError("layout.desired_groups[" + std::to_string(k) + "] is empty");
        }
        for (std::size_t i = 0; i < desired_angles[k].size(); ++i) {
            if (!in_open_sector(desired_angles[k][i])) {
                throw ConfigError("layout.desired_groups[" + std::to_string(k) + "][" +
                                  std::to_string(i) + "] must lie in (0, 180) degrees");
            }
        }
    }
    if (eavesdropper_angles.empty()) throw ConfigError("layout.eavesdroppers must not be empty");
    for (std::size_t m = 0; m < eavesdropper_angles.size(); ++m) {
        if (!in_open_sector(eavesdropper_angles[m])) {
            throw ConfigError("layout.eavesdroppers[" + std::to_string(m) +
                              "] must lie in (0, 180) degrees");
        }
    }
    if (cfg.n_antennas <= total_desired()) {
        throw ConfigError("array.n_antennas (" + std::to_string(cfg.n_antennas) +
                          ") must exceed the total number of desired users (" +
                          std::to_string(total_desired()) + ")");
    }
}

CVector steering_vector(double theta_deg, const ArrayConfig& cfg) {
    if (!(theta_deg >= 0.0 && theta_deg <= 180.0)) {
        throw DomainError("steering angle must lie in [0, 180] degrees, got " + std::to_string(theta_deg));
    }
    cfg.validate();

    const int n = cfg.n_antennas;
    const double center = (n + 1) / 2.0;
    const double u = cfg.spacing_wavelengths * std::cos(theta_deg * kDegToRad);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));

    CVector h(n);
    for (int i = 0; i < n; ++i) {
        const double phase = 2.0 * std::numbers::pi * ((i + 1) - center) * u;
        h(i) = std::polar(scale, phase);
    }
    return h;
}

ChannelMatrix channel_matrix(std::span<const double> angles_deg, const ArrayConfig& cfg) {
    if (angles_deg.empty()) throw DomainError("channel_matrix needs at least one angle");
    ChannelMatrix h(cfg.n_antennas, static_cast<Eigen::Index>(angles_deg.size()));
    for (std::size_t i = 0; i < angles_deg.size(); ++i) {
        h.col(static_cast<Eigen::Index>(i)) = steering_vector(angles_deg[i], cfg);
    }
    return h;
}

int Channels::total_desired() const {
    int total = 0;
    for (const auto& h : desired) total += static_cast<int>(h.cols());
    return total;
}

ChannelMatrix Channels::stacked_desired() const {
    ChannelMatrix out(n_antennas(), total_desired());
    Eigen::Index col = 0;
    for (const auto& h : desired) {
        out.middleCols(col, h.cols()) = h;
        col += h.cols();
    }
    return out;
}

ChannelMatrix Channels::complement(int k) const {
    Eigen::Index cols = 0;
    for (int i = 0; i < group_count(); ++i) {
        if (i != k) cols += desired[i].cols();
    }
    ChannelMatrix out(n_antennas(), cols);
    Eigen::Index col = 0;
    for (int i = 0; i < group_count(); ++i) {
        if (i == k) continue;
        out.middleCols(col, desired[i].cols()) = desired[i];
        col += desired[i].cols();
    }
    return out;
}

Channels build_channels(const GroupLayout& layout, const ArrayConfig& cfg) {
    layout.validate(cfg);
    Channels ch;
    ch.desired.reserve(layout.desired_angles.size());
    for (const auto& g : layout.desired_angles) ch.desired.push_back(channel_matrix(g, cfg));
    ch.eve = channel_matrix(layout.eavesdropper_angles, cfg);
    return ch;
}

ChannelMatrix stacked_desired_channel(const GroupLayout& layout, const ArrayConfig& cfg) {
    return build_channels(layout, cfg).stacked_desired();
}

AngleErrorModel AngleErrorModel::for_array(double max_error_deg, const ArrayConfig& cfg) {
    if (!(max_error_deg >= 0.0)) throw DomainError("max_error_deg must be >= 0");
    return {max_error_deg, 2.0 / (cfg.n_antennas * cfg.spacing_wavelengths)};
}

std::vector<double> perturb_angles(std::span<const double> angles_deg, const AngleErrorModel& model,
                                   std::mt19937_64& rng) {
    if (!(model.max_error_deg >= 0.0)) throw DomainError("max_error_deg must be >= 0");
    std::vector<double> out(angles_deg.begin(), angles_deg.end());
    if (model.max_error_deg == 0.0) return out;

    std::uniform_real_distribution<double> err(-model.max_error_deg, model.max_error_deg);
    for (double& a : out) {
        a = std::clamp(a + err(rng), kSectorMarginDeg, 180.0 - kSectorMarginDeg);
    }
    return out;
}

GroupLayout perturb_layout(const GroupLayout& layout, const AngleErrorModel& model, std::mt19937_64& rng) {
    GroupLayout out;
    out.desired_angles.reserve(layout.desired_angles.size());
    for (const auto& g : layout.desired_angles) out.desired_angles.push_back(perturb_angles(g, model, rng));
    out.eavesdropper_angles = perturb_angles(layout.eavesdropper_angles, model, rng);
    return out;
}

}  // namespace dmsec
