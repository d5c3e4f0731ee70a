#pragma once

#include <complex>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "mmmeta/moments.hpp"
#include "mmmeta/quadrature.hpp"

namespace mmmeta {

enum class MetaMethod { GilPelaez, BetaApprox, Empirical };
const char* to_string(MetaMethod m);

struct MetaCurve {
    std::vector<double> x_grid;
    std::vector<double> ccdf;
    MetaMethod method = MetaMethod::BetaApprox;
    /// Thresholds the curve was evaluated at (for rate curves, the Shannon thresholds).
    LinkThresholds thresholds;
    /// Largest inversion error estimate over the grid (Gil-Pelaez only).
    double max_abs_error = 0.0;
};

using MomentFn = std::function<std::complex<double>(double)>;

struct GilPelaezOptions {
    /// Panel width near the origin; panels double every octave past t = 50 up
    /// to max_panel_width. Panels do not depend on x, so a grid shares moments.
    double panel_width = 1.0;
    double max_panel_width = 8.0;
    /// The truncation point doubles from here until two successive estimates,
    /// each with its asymptotic tail term, agree to tail_tol.
    double t_first_check = 25.0;
    double t_cap = 3200.0;
    double tail_tol = 1e-6;
    /// Throw IntegrationFailure if the final error estimate exceeds this.
    double fail_error = 1e-2;
    quad::Options quad{1e-10, 1e-8, 200, false};
};

struct GilPelaezResult {
    double value = 0;  // clamped to [0, 1]
    double raw = 0;
    double abs_error = 0;
    double t_max = 0;
    bool converged = false;
};

/// CCDF at x of the variable whose imaginary moments t -> E[X^{jt}] are given.
GilPelaezResult gil_pelaez_ccdf(const MomentFn& moment_fn, double x, const GilPelaezOptions& opt = {});

/// Same for a grid, evaluating each moment at most once across grid points.
std::vector<GilPelaezResult> gil_pelaez_ccdf(const MomentFn& moment_fn, const std::vector<double>& xs,
                                             const GilPelaezOptions& opt = {});

struct BetaFit {
    double shape_a;
    double shape_b;
};
/// Zero-variance marker: all mass at `at`.
struct PointMass {
    double at;
};
using BetaFitResult = std::variant<BetaFit, PointMass>;

/// Beta distribution with mean m1 and second moment m2.
BetaFitResult beta_fit(double m1, double m2);
double beta_ccdf(const BetaFitResult& fit, double x);
double beta_ccdf(const BetaFit& fit, double x);

MetaCurve meta_sir(const NetworkConfig& cfg, ThetaPair thetas, const std::vector<double>& x_grid,
                   MetaMethod method = MetaMethod::BetaApprox, Variant variant = Variant::Hybrid,
                   const GilPelaezOptions& opt = {});

MetaCurve meta_rate(const NetworkConfig& cfg, RateTargets rates, const std::vector<double>& x_grid,
                    MetaMethod method = MetaMethod::BetaApprox, const GilPelaezOptions& opt = {});

/// Shared pipeline behind meta_sir and meta_rate.
MetaCurve meta_curve(const MomentEngine& engine, const std::vector<double>& x_grid, MetaMethod method,
                     const GilPelaezOptions& opt = {});

}  // namespace mmmeta
