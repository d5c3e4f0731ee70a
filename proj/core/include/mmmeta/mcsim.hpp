#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mmmeta/metadist.hpp"
#include "mmmeta/model.hpp"
#include "mmmeta/moments.hpp"

namespace mmmeta::mc {

enum class LinkState { Los, Nlos };

struct Point {
    double x = 0, y = 0;
    /// Uniform draw used to mark this point when it is seen from a mm-wave
    /// receiver (MBS points in the mm-wave backhaul variant).
    double mark_u = 0;
    LinkState state = LinkState::Nlos;
    double r2() const { return x * x + y * y; }
};

enum class ServingKind { Direct, DualHop };

struct Realization {
    /// Radius of the simulated disc around the typical device at the origin.
    double radius = 0;
    std::vector<Point> mbs_points;
    /// Hybrid and mm-wave backhaul variants keep only the nearest LOS and the
    /// nearest NLOS marked SBS, which is all a noise-limited access link and
    /// the association rule can see. The microwave variant keeps every SBS.
    std::vector<Point> sbs_points;
    ServingKind serving = ServingKind::Direct;
    int serving_mbs = -1;  // the device's MBS (Direct) or the SBS's MBS (DualHop)
    int serving_sbs = -1;
    int resamples = 0;  // draws thrown away because the MBS tier was empty
};

enum class AssocLabel { Mbs, SbsLos, SbsNlos };
const char* to_string(AssocLabel a);

struct CspSample {
    double csp = 0;
    /// ln csp, exact even where csp underflows.
    double log_csp = 0;
    /// In the microwave variant SBS-served devices are labelled SbsNlos.
    AssocLabel label = AssocLabel::Mbs;
    std::optional<double> csp_backhaul, csp_access;
};

struct McOptions {
    std::size_t n_realizations = 100000;
    std::uint64_t seed = 1;
    Variant variant = Variant::Hybrid;
    /// 0 means std::thread::hardware_concurrency().
    unsigned threads = 0;
    /// Disc radius multiplier over default_radius().
    double radius_scale = 1.0;
    /// Extra annuli doubling the radius each; inner points stay identical.
    int radius_doublings = 0;
    /// Multiply each interference product by its expected value beyond the disc.
    bool far_field_correction = true;
    /// Warn when the MBS tier had to be resampled this often.
    double resample_warn_fraction = 1e-3;
    double truncation_tol = 5e-3;
};

/// max(5/sqrt(λ1), 10 d), plus 5/sqrt(λ2) when the whole SBS tier is sampled
/// (µwave-only). The other variants draw only the nearest SBS candidates.
double default_radius(const NetworkConfig& cfg, Variant v = Variant::Hybrid);

/// Substream for realization `index`; identical for any thread layout.
std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index, std::uint64_t lane = 0);

Realization sample_realization(const NetworkConfig& cfg, std::uint64_t seed, std::uint64_t index,
                               const McOptions& opt = {});

/// ln of the expected interference product over a PPP of density lambda beyond
/// radius R, for serving distance r0: -2πλ K² ∫_{R/K}^∞ s/(1+s^α) ds, K = θ^(1/α) r0.
double far_field_log_factor(double lambda, double theta, double r0, double alpha, double R);

/// ∏ 1/(1+θ (r0/r_i)^α) over `interferers` (squared distances), in log form.
double log_rayleigh_product(double r0_sq, const std::vector<double>& interferer_r2, double theta, double alpha);

double csp_direct(const Realization& r, double theta_d, const NetworkConfig& cfg, const McOptions& opt = {});
double csp_backhaul(const Realization& r, double theta2, const NetworkConfig& cfg, const McOptions& opt = {});
/// Exact gamma survival Γ(m, m ν / Ω)/Γ(m) of the serving SBS (mm-wave), or
/// the SBS-tier interference product in the microwave variant.
double csp_access(const Realization& r, double theta_d, const NetworkConfig& cfg, const McOptions& opt = {});

struct McRun {
    /// samples[k][i]: realization i evaluated at threshold set k.
    std::vector<std::vector<CspSample>> samples;
    std::vector<LinkThresholds> thresholds;
    std::size_t resamples = 0;
    std::string warning;
    /// Pearson correlation of backhaul and access CSPs over dual-hop samples,
    /// per threshold set (NaN when undefined).
    std::vector<double> backhaul_access_correlation;
};

McRun run(const NetworkConfig& cfg, const std::vector<LinkThresholds>& thresholds, const McOptions& opt = {});
std::vector<CspSample> run(const NetworkConfig& cfg, ThetaPair thetas, const McOptions& opt = {});

MetaCurve empirical_meta(const std::vector<CspSample>& samples, const std::vector<double>& x_grid);

struct EmpiricalValue {
    std::complex<double> value;
    double std_error = 0;
};

/// Sample mean of csp^b with its jackknife standard error.
EmpiricalValue empirical_moment(const std::vector<CspSample>& samples, std::complex<double> b);
/// M2 - M1^2 of the samples with its jackknife standard error.
EmpiricalValue empirical_variance(const std::vector<CspSample>& samples);

struct AssocFrequencies {
    double mbs = 0, sbs_los = 0, sbs_nlos = 0;
    std::size_t n = 0;
};
AssocFrequencies association_frequencies(const std::vector<CspSample>& samples);

struct TruncationCheck {
    double m1 = 0, m1_doubled = 0, rel_change = 0;
    bool within = false;
};
/// Empirical M1 at the default radius and with one extra annulus, on shared points.
TruncationCheck truncation_check(const NetworkConfig& cfg, LinkThresholds th, const McOptions& opt = {});

/// Fraction of `draws` Rayleigh fading draws with SIR above θ, for a serving
/// link at r0 and interferers at r_i (test oracle for the CSP products).
double brute_force_success(double r0, const std::vector<double>& interferer_r, double theta, double alpha,
                           std::size_t draws, std::uint64_t seed);

}  // namespace mmmeta::mc
