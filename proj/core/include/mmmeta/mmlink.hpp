#pragma once

#include <complex>
#include <string>

namespace mmmeta {

using cplx = std::complex<double>;

enum class EvalPath { Series, DirectQuadrature };

/// ζ_m = m (m!)^(-1/m), the constant in Alzer's bound on the gamma CDF.
double alzer_zeta(int m);

/// ln(1 - (1 - e^-x)^m), accurate for both small and large x.
double log_alzer_csp(int m, double x);
/// Same for complex x with Re x comfortably positive (used off the real axis).
cplx log_alzer_csp(int m, cplx x);

/// Moment of one mm-wave link plus diagnostics.
struct LinkMoment {
    cplx value{0.0, 0.0};
    bool diverged = false;
    std::string reason;
    /// Bound on the neglected series tail (Series path only).
    double tail_bound = 0.0;
    double abs_error = 0.0;
};

/// A receiver served by the nearest (smallest path loss) point of a LOS-ball
/// marked PPP, optionally losing to a competing tier. Distances enter through
/// u = r^2, so the LOS branch lives on (0, d^2] and the NLOS one on [d^2, inf).
/// The success probability of the link at path loss l is the Alzer form
/// 1 - (1 - exp(-ζ_m ν l / Ω))^m.
struct MmLink {
    double lambda = 0;  // density of the serving tier, m^-2
    double p_los = 1, p_nlos = 1;
    double d = 200;
    double alpha_los = 2, alpha_nlos = 4;
    /// Competing tier wins unless none of its points has path loss below
    /// (that tier's scaling) * l; its void probability is exp(-coef l^(2/alpha)).
    double competitor_coef = 0;
    double competitor_alpha = 4;
    int m_los = 2, m_nlos = 1;
    double omega_los = 1, omega_nlos = 1;
    /// Threshold over unit-distance SNR: θ σ² / (P G ζ).
    double nu = 0;

    /// Expected number of marked points with path loss at most l.
    double count(double l) const;
    double los_density_u(double u) const;
    double nlos_density_u(double u) const;
    double kappa_los() const { return alzer_zeta(m_los) * nu / omega_los; }
    double kappa_nlos() const { return alzer_zeta(m_nlos) * nu / omega_nlos; }

    double mass_los() const;
    double mass_nlos() const;

    /// E[(p S)^b 1{served by this tier}] with p the branch probability.
    LinkMoment moment(cplx b, EvalPath path = EvalPath::DirectQuadrature, int series_terms = 64) const;

   private:
    cplx los_direct(cplx b, double& err) const;
    cplx nlos_direct(cplx b, double& err) const;
    bool contour_applicable(cplx b) const;
    cplx nlos_contour(cplx b, double& err) const;
    LinkMoment series(cplx b, int terms) const;
};

}  // namespace mmmeta
