#include "mmmeta/association.hpp"

#include <algorithm>
#include <cmath>

#include "mmmeta/errors.hpp"
#include "mmmeta/quadrature.hpp"
#include "mmmeta/specfun.hpp"

namespace mmmeta {
namespace {

MmLink sbs_geometry(const NetworkConfig& cfg) {
    MmLink k;
    k.lambda = cfg.small.density_lambda2;
    k.p_los = cfg.mmwave.p_los;
    k.p_nlos = cfg.mmwave.p_nlos;
    k.d = cfg.mmwave.los_ball_d;
    k.alpha_los = cfg.small.ple_alpha2_los;
    k.alpha_nlos = cfg.small.ple_alpha2_nlos;
    k.m_los = cfg.mmwave.m_los;
    k.m_nlos = cfg.mmwave.m_nlos;
    k.omega_los = cfg.mmwave.omega_los;
    k.omega_nlos = cfg.mmwave.omega_nlos;
    return k;
}

void require_closed_form_exponents(const NetworkConfig& cfg, const char* who) {
    if (cfg.macro.ple_alpha1 != 4.0 || cfg.small.ple_alpha2_los != 2.0 || cfg.small.ple_alpha2_nlos != 4.0)
        throw PreconditionError(std::string(who) + " needs ple_alpha1 = 4, ple_alpha2_los = 2, ple_alpha2_nlos = 4");
}

// e^{x^2} erfc(x), with the asymptotic series where the product underflows.
double erfcx(double x) {
    if (x < 25.0) return std::exp(x * x) * std::erfc(x);
    const double x2 = x * x;
    return (1.0 - 0.5 / x2 + 0.75 / (x2 * x2) - 1.875 / (x2 * x2 * x2)) / (x * std::sqrt(kPi));
}

}  // namespace

MmLink access_link(const NetworkConfig& cfg, const DerivedParams& dp, double theta_device) {
    MmLink k = sbs_geometry(cfg);
    const double a1 = cfg.macro.ple_alpha1;
    k.competitor_alpha = a1;
    k.competitor_coef = kPi * cfg.macro.density_lambda1 * std::pow(dp.a_bar, 2.0 / a1);
    k.nu = theta_device * dp.noise_sigma2 / (cfg.small.power_p2 * dp.g2 * dp.zeta2);
    return k;
}

MmLink mm_backhaul_link(const NetworkConfig& cfg, const DerivedParams& dp, double theta_backhaul) {
    MmLink k = sbs_geometry(cfg);
    k.lambda = cfg.macro.density_lambda1;
    k.competitor_coef = 0;
    // Both ends steer their main lobes: SBS array gain at the MBS and at the SBS.
    const double gain = dp.g2_max * dp.g2_max;
    k.nu = theta_backhaul * dp.noise_sigma2 / (cfg.macro.power_p1 * gain * dp.zeta2);
    return k;
}

double sbs_count(double l, const NetworkConfig& cfg) { return sbs_geometry(cfg).count(l); }

double assoc_density_los(double l, const NetworkConfig& cfg) {
    const double aL = cfg.small.ple_alpha2_los;
    const double top = std::pow(cfg.mmwave.los_ball_d, aL);
    if (!(l > 0 && l <= top)) throw DomainError("assoc_density_los: path loss outside (0, d^alpha_L]");
    const MmLink k = access_link(cfg, derive(cfg), 1.0);
    const double u = std::pow(l, 2.0 / aL);
    return k.los_density_u(u) * (2.0 / aL) * u / l;
}

double assoc_density_nlos(double l, const NetworkConfig& cfg) {
    const double aN = cfg.small.ple_alpha2_nlos;
    if (!(l >= std::pow(cfg.mmwave.los_ball_d, aN)) || !std::isfinite(l))
        throw DomainError("assoc_density_nlos: path loss below d^alpha_N");
    const MmLink k = access_link(cfg, derive(cfg), 1.0);
    const double u = std::pow(l, 2.0 / aN);
    return k.nlos_density_u(u) * (2.0 / aN) * u / l;
}

double mbs_pathloss_density(double l1, const NetworkConfig& cfg) {
    if (!(l1 > 0)) throw DomainError("mbs_pathloss_density: l1 must be positive");
    const double a1 = cfg.macro.ple_alpha1;
    const double lam = cfg.macro.density_lambda1;
    const double u = std::pow(l1, 2.0 / a1);
    return kPi * lam * std::exp(-kPi * lam * u) * (2.0 / a1) * u / l1;
}

double cond_assoc_sbs(double l1, const NetworkConfig& cfg) {
    if (!(l1 > 0)) throw DomainError("cond_assoc_sbs: l1 must be positive");
    const DerivedParams dp = derive(cfg);
    return -std::expm1(-sbs_count(dp.a_hat * l1, cfg));
}

double assoc_a1_direct(const NetworkConfig& cfg) {
    const DerivedParams dp = derive(cfg);
    const MmLink k = sbs_geometry(cfg);
    const double a1 = cfg.macro.ple_alpha1;
    const double lam = cfg.macro.density_lambda1;
    auto f = [&](double u) {
        const double l1 = std::pow(u, 0.5 * a1);
        return kPi * lam * std::exp(-kPi * lam * u - k.count(dp.a_hat * l1));
    };
    // Breakpoints where a_hat * l1 crosses d^alpha_L and d^alpha_N.
    const double ua = std::pow(std::pow(k.d, k.alpha_los) / dp.a_hat, 2.0 / a1);
    const double ub = std::pow(std::pow(k.d, k.alpha_nlos) / dp.a_hat, 2.0 / a1);
    std::vector<double> pts{0.0, std::min(ua, ub), std::max(ua, ub)};
    quad::Options o;
    o.abs_tol = 1e-15;
    o.rel_tol = 1e-12;
    auto head = quad::integrate_pieces(f, pts, o);
    const double scale = std::clamp(1.0 / (kPi * lam), 1e-3 * pts.back() + 1.0, 1e12);
    auto tail = quad::integrate_to_infinity(f, pts.back(), scale, o);
    return head.value + tail.value;
}

AssocProbabilities assoc_probs(const NetworkConfig& cfg) {
    const DerivedParams dp = derive(cfg);
    const MmLink k = access_link(cfg, dp, 0.0);
    AssocProbabilities p;
    p.a2_los = k.mass_los();
    p.a2_nlos = k.mass_nlos();
    p.a1 = 1.0 - p.a2_los - p.a2_nlos;
    p.a1_direct = assoc_a1_direct(cfg);
    p.abs_error = std::abs(p.a1 - p.a1_direct);
    return p;
}

double closed_form_a1(const NetworkConfig& cfg) {
    require_closed_form_exponents(cfg, "closed_form_a1");
    const DerivedParams dp = derive(cfg);
    const double l1 = cfg.macro.density_lambda1, l2 = cfg.small.density_lambda2;
    const double pL = cfg.mmwave.p_los, pN = cfg.mmwave.p_nlos, d = cfg.mmwave.los_ball_d;
    const double a = dp.a_hat, sa = std::sqrt(a);
    double total = 0.0;
    // u = r1^2 < d / sqrt(a): the SBS competitor is LOS, Gaussian exponent in u.
    if (pL > 0) {
        const double C = kPi * l1 * l1 / (4.0 * a * pL * l2);
        const double y = std::sqrt(kPi * l2 * pL) * d;
        const double sc = std::sqrt(C);
        // e^C [erf(sqrt C + y) - erf(sqrt C)] = erfcx(sqrt C) - e^{C-(sqrt C+y)^2} erfcx(sqrt C + y)
        const double bracket = erfcx(sc) - std::exp(C - (sc + y) * (sc + y)) * erfcx(sc + y);
        total += kPi * l1 / (2.0 * std::sqrt(l2 * pL * a)) * bracket;
    } else {
        total += -std::expm1(-kPi * l1 * d / sa);
    }
    // d / sqrt(a) <= u < d^2 / sqrt(a): competitor count frozen at the LOS ball.
    total += std::exp(-kPi * l2 * pL * d * d) * (std::exp(-kPi * l1 * d / sa) - std::exp(-kPi * l1 * d * d / sa));
    // u >= d^2 / sqrt(a): NLOS competitors, linear exponent.
    const double C1 = kPi * (l1 + sa * pN * l2);
    total += kPi * l1 / C1 * std::exp(-kPi * l2 * (pL - pN) * d * d - C1 * d * d / sa);
    return total;
}

double closed_form_a1_large_bias(const NetworkConfig& cfg) {
    require_closed_form_exponents(cfg, "closed_form_a1_large_bias");
    const DerivedParams dp = derive(cfg);
    const double l1 = cfg.macro.density_lambda1, l2 = cfg.small.density_lambda2;
    const double pL = cfg.mmwave.p_los, pN = cfg.mmwave.p_nlos, d = cfg.mmwave.los_ball_d;
    const double a = dp.a_hat;
    return kPi * l1 / (2.0 * std::sqrt(l2 * pL * a)) * std::erf(std::sqrt(kPi * l2 * pL) * d) +
           l1 / (std::sqrt(a) * pN * l2) * std::exp(-kPi * pL * l2 * d * d);
}

AsymptoticAssoc asymptotic_assoc(const NetworkConfig& cfg) {
    require_closed_form_exponents(cfg, "asymptotic_assoc");
    const double l2 = cfg.small.density_lambda2;
    const double pL = cfg.mmwave.p_los, pN = cfg.mmwave.p_nlos, d = cfg.mmwave.los_ball_d;
    const double z = kPi * pN * l2 * d * d;
    AsymptoticAssoc out;
    out.a2_los = -std::expm1(-kPi * pL * d * d * l2);
    out.a2_nlos = std::exp(kPi * l2 * d * d * (pN - pL)) * (1.0 - z * specfun::kummer_1f1(1.0, 2.0, -z));
    if (pN == 0) out.a2_nlos = 0.0;
    return out;
}

}  // namespace mmmeta
