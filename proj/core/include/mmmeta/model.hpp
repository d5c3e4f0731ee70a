#pragma once

#include <string>
#include <vector>

namespace mmmeta {

/// Speed of light used for near-field loss, m/s.
inline constexpr double kSpeedOfLight = 2.998e8;
inline constexpr double kPi = 3.14159265358979323846;

// All fields are SI: m, m^-2, W, Hz, linear gains.

struct MacroTier {
    double density_lambda1 = 2e-6;
    double power_p1 = 50.0;
    double bias_b1 = 1.0;
    double ple_alpha1 = 4.0;
    double gain_g1_omni = 1.0;
};

struct SmallTier {
    double density_lambda2 = 70e-6;
    double power_p2 = 5.0;
    double bias_b2 = 1.0;
    double ple_alpha2_los = 2.0;
    double ple_alpha2_nlos = 4.0;
    int n_antenna_elements = 10;
};

struct MmWaveChannel {
    int m_los = 2;
    int m_nlos = 1;
    double omega_los = 1.0;
    double omega_nlos = 1.0;
    double los_ball_d = 200.0;
    double p_los = 1.0;
    double p_nlos = 1.0;
    double carrier_freq_mm = 28e9;
    double bandwidth_w2 = 1e9;
};

struct UWaveSpectrum {
    double bandwidth_w1 = 100e6;
    double access_fraction_eta = 0.5;
    double carrier_freq_uw = 2e9;
};

struct DeviceConfig {
    double gain_gd_max = 10.0;
    double gain_gd_uw = 1.0;
};

struct Thresholds {
    double theta_backhaul = 1.0;
    double theta_device = 1.0;
    double rate_t1 = 1e9;
    double rate_t2 = 1e9;
    double rate_tbh = 0;
    double reliability_x = 0.3;
};

struct NetworkConfig {
    MacroTier macro;
    SmallTier small;
    MmWaveChannel mmwave;
    UWaveSpectrum uwave;
    DeviceConfig device;
    Thresholds thresholds;
    double noise_figure_db = 10.0;
    /// Device density. Kept for completeness; no formula uses it.
    double density_device = 0.0;
};

struct DerivedParams {
    double g2_max = 0;
    double g2_min = 0;
    double beamwidth_theta_a = 0;
    double noise_sigma2 = 0;
    double zeta1 = 0;
    double zeta2 = 0;
    double a_hat = 0;
    double a_bar = 0;
    /// Combined gains entering the association rule.
    double g1 = 0;
    double g2 = 0;
};

struct AntennaPattern {
    double g_max;
    double g_min;
    double theta_a;
};

AntennaPattern derive_antenna(int n_elements);

/// Thermal noise of -174 dBm/Hz over the band plus the noise figure, in watts.
double derive_noise(double bandwidth_hz, double noise_figure_db);

/// (c / (4 pi f))^2
double derive_near_field(double carrier_freq);

struct GainRatios {
    double a_hat;
    double a_bar;
};

GainRatios derive_gain_ratios(const NetworkConfig& cfg);

DerivedParams derive(const NetworkConfig& cfg);

struct Violation {
    std::string field;
    std::string message;
    bool fatal = false;
};

/// Every broken invariant, in field order. Empty means the config is usable.
std::vector<Violation> validate(const NetworkConfig& cfg);

/// Throws std::invalid_argument listing all violations if any are present.
void require_valid(const NetworkConfig& cfg);

// Unit helpers used at the config boundary.
double db_to_linear(double db);
double linear_to_db(double lin);
double dbm_to_watt(double dbm);
double watt_to_dbm(double w);
inline double per_km2_to_per_m2(double v) { return v * 1e-6; }
inline double per_m2_to_per_km2(double v) { return v * 1e6; }

}  // namespace mmmeta
