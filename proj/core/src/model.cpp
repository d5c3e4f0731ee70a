#include "mmmeta/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mmmeta {

AntennaPattern derive_antenna(int n_elements) {
    if (n_elements < 1) throw std::invalid_argument("n_antenna_elements must be >= 1");
    const double n = n_elements;
    const double s = std::sin(3.0 * kPi / (2.0 * std::sqrt(n)));
    return {n, 1.0 / (s * s), std::sqrt(3.0) / std::sqrt(n)};
}

double derive_noise(double bandwidth_hz, double noise_figure_db) {
    if (!(bandwidth_hz > 0)) throw std::invalid_argument("bandwidth must be positive");
    return dbm_to_watt(-174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db);
}

double derive_near_field(double carrier_freq) {
    if (!(carrier_freq > 0)) throw std::invalid_argument("carrier frequency must be positive");
    const double r = kSpeedOfLight / (4.0 * kPi * carrier_freq);
    return r * r;
}

GainRatios derive_gain_ratios(const NetworkConfig& cfg) {
    const DerivedParams d = derive(cfg);
    return {d.a_hat, d.a_bar};
}

DerivedParams derive(const NetworkConfig& cfg) {
    DerivedParams d;
    const AntennaPattern ant = derive_antenna(cfg.small.n_antenna_elements);
    d.g2_max = ant.g_max;
    d.g2_min = ant.g_min;
    d.beamwidth_theta_a = ant.theta_a;
    d.noise_sigma2 = derive_noise(cfg.mmwave.bandwidth_w2, cfg.noise_figure_db);
    d.zeta1 = derive_near_field(cfg.uwave.carrier_freq_uw);
    d.zeta2 = derive_near_field(cfg.mmwave.carrier_freq_mm);
    d.g1 = cfg.macro.gain_g1_omni * cfg.device.gain_gd_uw;
    d.g2 = d.g2_max * cfg.device.gain_gd_max;
    const double num = cfg.small.power_p2 * cfg.small.bias_b2 * d.g2 * d.zeta2;
    const double den = cfg.macro.power_p1 * cfg.macro.bias_b1 * d.g1 * d.zeta1;
    d.a_hat = num / den;
    d.a_bar = den / num;
    return d;
}

namespace {

void positive(std::vector<Violation>& out, const char* field, double v) {
    if (!(v > 0) || !std::isfinite(v)) out.push_back({field, std::string(field) + " must be positive", false});
}

void probability(std::vector<Violation>& out, const char* field, double v) {
    if (!(v >= 0 && v <= 1)) out.push_back({field, std::string(field) + " must lie in [0,1]", false});
}

}  // namespace

std::vector<Violation> validate(const NetworkConfig& cfg) {
    std::vector<Violation> v;
    positive(v, "macro.density_lambda1", cfg.macro.density_lambda1);
    positive(v, "macro.power_p1", cfg.macro.power_p1);
    positive(v, "macro.bias_b1", cfg.macro.bias_b1);
    if (!(cfg.macro.ple_alpha1 > 2))
        v.push_back({"macro.ple_alpha1", "ple_alpha1 must exceed 2", true});
    positive(v, "macro.gain_g1_omni", cfg.macro.gain_g1_omni);

    positive(v, "small.density_lambda2", cfg.small.density_lambda2);
    positive(v, "small.power_p2", cfg.small.power_p2);
    positive(v, "small.bias_b2", cfg.small.bias_b2);
    if (!(cfg.small.ple_alpha2_los >= 2))
        v.push_back({"small.ple_alpha2_los", "ple_alpha2_los must be at least 2", false});
    if (!(cfg.small.ple_alpha2_nlos > 2))
        v.push_back({"small.ple_alpha2_nlos", "ple_alpha2_nlos must exceed 2", true});
    if (cfg.small.n_antenna_elements < 1)
        v.push_back({"small.n_antenna_elements", "n_antenna_elements must be >= 1", false});

    if (cfg.mmwave.m_los < 1) v.push_back({"mmwave.m_los", "m_los must be >= 1", false});
    if (cfg.mmwave.m_nlos < 1) v.push_back({"mmwave.m_nlos", "m_nlos must be >= 1", false});
    positive(v, "mmwave.omega_los", cfg.mmwave.omega_los);
    positive(v, "mmwave.omega_nlos", cfg.mmwave.omega_nlos);
    positive(v, "mmwave.los_ball_d", cfg.mmwave.los_ball_d);
    probability(v, "mmwave.p_los", cfg.mmwave.p_los);
    probability(v, "mmwave.p_nlos", cfg.mmwave.p_nlos);
    positive(v, "mmwave.carrier_freq_mm", cfg.mmwave.carrier_freq_mm);
    positive(v, "mmwave.bandwidth_w2", cfg.mmwave.bandwidth_w2);

    positive(v, "uwave.bandwidth_w1", cfg.uwave.bandwidth_w1);
    probability(v, "uwave.access_fraction_eta", cfg.uwave.access_fraction_eta);
    positive(v, "uwave.carrier_freq_uw", cfg.uwave.carrier_freq_uw);

    positive(v, "device.gain_gd_max", cfg.device.gain_gd_max);
    positive(v, "device.gain_gd_uw", cfg.device.gain_gd_uw);

    positive(v, "thresholds.theta_backhaul", cfg.thresholds.theta_backhaul);
    positive(v, "thresholds.theta_device", cfg.thresholds.theta_device);
    if (!(cfg.thresholds.rate_t1 >= 0)) v.push_back({"thresholds.rate_t1", "rate_t1 must be nonnegative", false});
    if (!(cfg.thresholds.rate_t2 >= 0)) v.push_back({"thresholds.rate_t2", "rate_t2 must be nonnegative", false});
    if (!(cfg.thresholds.rate_tbh >= 0)) v.push_back({"thresholds.rate_tbh", "rate_tbh must be nonnegative", false});
    probability(v, "thresholds.reliability_x", cfg.thresholds.reliability_x);
    if (!std::isfinite(cfg.noise_figure_db)) v.push_back({"noise_figure_db", "noise_figure_db must be finite", false});
    return v;
}

void require_valid(const NetworkConfig& cfg) {
    const auto v = validate(cfg);
    if (v.empty()) return;
    std::ostringstream os;
    os << "invalid network config:";
    for (const auto& e : v) os << "\n  " << e.field << ": " << e.message << (e.fatal ? " [fatal]" : "");
    throw std::invalid_argument(os.str());
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double watt_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

}  // namespace mmmeta
