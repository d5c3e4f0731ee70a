#include "mmmeta/mmlink.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "mmmeta/model.hpp"
#include "mmmeta/quadrature.hpp"
#include "mmmeta/specfun.hpp"

namespace mmmeta {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

quad::Options link_quad() {
    quad::Options o;
    o.abs_tol = 1e-14;
    o.rel_tol = 1e-11;
    o.max_intervals = 4000;
    return o;
}

cplx log1p_c(cplx w) {
    if (std::abs(w) < 1e-4) return w * (1.0 - w * (0.5 - w / 3.0));
    return std::log(1.0 + w);
}

}  // namespace

double alzer_zeta(int m) { return m * std::exp(-std::lgamma(m + 1.0) / m); }

double log_alzer_csp(int m, double x) {
    if (x <= 0) return 0.0;
    if (x <= 1.0) return std::log1p(-std::pow(-std::expm1(-x), m));
    // S = w P(w) with w = e^-x and P(w) = (1 - (1-w)^m)/w, so ln S = -x + ln P.
    const double w = std::exp(-x);
    if (x > 30.0) return std::log(double(m)) - x + std::log1p(-0.5 * (m - 1) * w);
    const double P = -std::expm1(m * std::log1p(-w)) / w;
    return -x + std::log(P);
}

cplx log_alzer_csp(int m, cplx x) {
    const cplx w = std::exp(-x);
    if (x.real() > 30.0) return std::log(double(m)) - x + log1p_c(-0.5 * (m - 1) * w);
    const cplx P = -specfun::expm1(double(m) * log1p_c(-w)) / w;
    return -x + std::log(P);
}

double MmLink::count(double l) const {
    if (l <= 0) return 0.0;
    const double d2 = d * d;
    const double los = p_los * std::min(std::pow(l, 2.0 / alpha_los), d2);
    const double nlos = p_nlos * std::max(0.0, std::pow(l, 2.0 / alpha_nlos) - d2);
    return kPi * lambda * (los + nlos);
}

double MmLink::los_density_u(double u) const {
    const double l = std::pow(u, 0.5 * alpha_los);
    const double comp = competitor_coef > 0 ? competitor_coef * std::pow(l, 2.0 / competitor_alpha) : 0.0;
    return kPi * lambda * p_los * std::exp(-count(l) - comp);
}

double MmLink::nlos_density_u(double u) const {
    const double l = std::pow(u, 0.5 * alpha_nlos);
    const double comp = competitor_coef > 0 ? competitor_coef * std::pow(l, 2.0 / competitor_alpha) : 0.0;
    return kPi * lambda * p_nlos * std::exp(-count(l) - comp);
}

namespace {

// Decay length (in u) of the NLOS distance density at u = d^2, used to size
// the first panel of the semi-infinite integral.
double nlos_scale(const MmLink& k, double extra_rate) {
    const double d2 = k.d * k.d;
    double rate = kPi * k.lambda * k.p_nlos;
    if (k.competitor_coef > 0) {
        const double e = k.alpha_nlos / k.competitor_alpha;
        rate += k.competitor_coef * e * std::pow(d2, e - 1.0);
    }
    rate += extra_rate;
    double s = rate > 0 ? 1.0 / rate : 100.0 * d2;
    return std::clamp(s, 1e-6 * d2, 100.0 * d2);
}

template <class F>
auto integrate_los(const MmLink& k, F&& f, double& err) {
    const double d2 = k.d * k.d;
    auto r = quad::integrate_pieces(f, {0.0, d2 / 64, d2 / 16, d2 / 4, d2}, link_quad());
    err += r.abs_error;
    return r.value;
}

template <class F>
auto integrate_nlos(const MmLink& k, F&& f, double extra_rate, double& err) {
    auto r = quad::integrate_to_infinity(f, k.d * k.d, nlos_scale(k, extra_rate), link_quad());
    err += r.abs_error;
    return r.value;
}

}  // namespace

double MmLink::mass_los() const {
    if (lambda <= 0 || p_los <= 0) return 0.0;
    double err = 0;
    return integrate_los(*this, [&](double u) { return los_density_u(u); }, err);
}

double MmLink::mass_nlos() const {
    if (lambda <= 0 || p_nlos <= 0) return 0.0;
    double err = 0;
    return integrate_nlos(*this, [&](double u) { return nlos_density_u(u); }, 0.0, err);
}

cplx MmLink::los_direct(cplx b, double& err) const {
    if (lambda <= 0 || p_los <= 0) return 0.0;
    const double kap = kappa_los();
    const double lp = std::log(p_los);
    auto f = [&](double u) -> cplx {
        const double x = kap * std::pow(u, 0.5 * alpha_los);
        return los_density_u(u) * std::exp(b * (lp + log_alzer_csp(m_los, x)));
    };
    return integrate_los(*this, f, err);
}

cplx MmLink::nlos_direct(cplx b, double& err) const {
    if (lambda <= 0 || p_nlos <= 0) return 0.0;
    const double kap = kappa_nlos();
    const double lp = std::log(p_nlos);
    auto f = [&](double u) -> cplx {
        const double x = kap * std::pow(u, 0.5 * alpha_nlos);
        return nlos_density_u(u) * std::exp(b * (lp + log_alzer_csp(m_nlos, x)));
    };
    const double d2 = d * d;
    const double growth = b.real() * kap * 0.5 * alpha_nlos * std::pow(d2, 0.5 * alpha_nlos - 1.0);
    return integrate_nlos(*this, f, std::max(0.0, growth), err);
}

bool MmLink::contour_applicable(cplx b) const {
    if (b.imag() == 0.0 || b.real() < 0) return false;
    if (lambda <= 0 || p_nlos <= 0) return false;
    const double kap = kappa_nlos();
    if (!(kap > 0)) return false;
    const double x0 = kap * std::pow(d, alpha_nlos);
    // ln S stays on its principal branch only while e^-x is small next to 1.
    if (x0 < m_nlos * std::log(2.0) + 1.0) return false;
    // The LOS part of the point count must already be saturated at d^2 for
    // every NLOS distance, otherwise the integrand has a kink on the real axis.
    return alpha_nlos >= alpha_los && d >= 1.0;
}

// The NLOS integrand oscillates like exp(-j t x) in x = κ u^(α/2). Moving the
// path to x = x0 - j sgn(t) s turns the oscillation into exp(-|t| s) decay.
// The integrand is analytic in the swept quadrant and decays on the far arc,
// so the value is unchanged.
cplx MmLink::nlos_contour(cplx b, double& err) const {
    const double kap = kappa_nlos();
    const double d2 = d * d;
    const double x0 = kap * std::pow(d, alpha_nlos);
    const double sgn = b.imag() > 0 ? 1.0 : -1.0;
    const double lp = std::log(p_nlos);
    const double e_comp = alpha_nlos / competitor_alpha;
    const cplx dir(0.0, -sgn);
    auto f = [&](double s) -> cplx {
        const cplx x = x0 + dir * s;
        const cplx u = d2 * std::exp((2.0 / alpha_nlos) * std::log(x / x0));
        const cplx du = (2.0 / alpha_nlos) * u / x * dir;
        cplx expo = -kPi * lambda * (p_los * d2 + p_nlos * (u - d2));
        if (competitor_coef > 0) expo -= competitor_coef * std::exp(e_comp * std::log(u));
        expo += b * (lp + log_alzer_csp(m_nlos, x));
        return kPi * lambda * p_nlos * std::exp(expo) * du;
    };
    const double scale = 1.0 / std::max(std::abs(b.imag()), 1e-3);
    auto r = quad::integrate_to_infinity(f, 0.0, scale, link_quad());
    err += r.abs_error;
    return r.value;
}

LinkMoment MmLink::moment(cplx b, EvalPath path, int series_terms) const {
    LinkMoment out;
    const bool nlos_active = lambda > 0 && p_nlos > 0;
    if (b.real() < 0 && nlos_active && kappa_nlos() > 0) {
        out.diverged = true;
        out.value = cplx(kInf, 0.0);
        out.reason = "negative moment of the noise-limited NLOS access branch: 1/CSP grows like exp(c u^(alpha/2)) "
                     "while the distance density decays only like exp(-c' u)";
        return out;
    }
    if (path == EvalPath::Series) return series(b, series_terms);
    double err = 0;
    cplx v = los_direct(b, err);
    if (nlos_active) v += contour_applicable(b) ? nlos_contour(b, err) : nlos_direct(b, err);
    out.value = v;
    out.abs_error = err;
    return out;
}

// Newton series (1 - F)^b = sum_k (-b)_k / k! F^k with F = (1 - e^-x)^m the
// Alzer bound on the gamma CDF. For small m k the k-th term is expanded
// binomially into exponentials exp(-q x) against the distance density; larger
// orders integrate F^k directly.
LinkMoment MmLink::series(cplx b, int terms) const {
    LinkMoment out;
    const bool integer_b = b.imag() == 0.0 && b.real() >= 0 && b.real() == std::floor(b.real());
    const int K = integer_b ? static_cast<int>(b.real()) : terms;
    constexpr int kExpandLimit = 12;

    struct Branch {
        bool los;
        double p;
        int m;
        double kap;
        double alpha;
    };
    std::vector<Branch> branches;
    if (lambda > 0 && p_los > 0) branches.push_back({true, p_los, m_los, kappa_los(), alpha_los});
    if (lambda > 0 && p_nlos > 0) branches.push_back({false, p_nlos, m_nlos, kappa_nlos(), alpha_nlos});

    std::vector<cplx> coef(K + 1);
    coef[0] = 1.0;
    for (int k = 0; k < K; ++k) coef[k + 1] = coef[k] * (double(k) - b) / (k + 1.0);

    double err = 0;
    cplx total = 0.0;
    double tail = 0.0;
    for (const Branch& br : branches) {
        // With m = 1 the series is the binomial expansion of exp(-b x), whose
        // partial sums converge like K^(-Re b) once S is near 0. Sum it in
        // closed form, on the real axis.
        if (br.m == 1 && !integer_b) {
            total += br.los ? los_direct(b, err) : nlos_direct(b, err);
            continue;
        }
        auto density = [&](double u) { return br.los ? los_density_u(u) : nlos_density_u(u); };
        auto xof = [&](double u) { return br.kap * std::pow(u, 0.5 * br.alpha); };
        auto integ = [&](auto&& fn) {
            return br.los ? integrate_los(*this, fn, err) : integrate_nlos(*this, fn, 0.0, err);
        };
        std::vector<double> expo_moment;  // ∫ density e^{-q x}, q = 0..
        auto exp_moment = [&](int q) {
            while (static_cast<int>(expo_moment.size()) <= q) {
                const int qq = static_cast<int>(expo_moment.size());
                expo_moment.push_back(integ([&](double u) { return density(u) * std::exp(-qq * xof(u)); }));
            }
            return expo_moment[q];
        };
        cplx branch_sum = 0.0;
        for (int k = 0; k <= K; ++k) {
            if (coef[k] == 0.0) continue;
            double Tk;
            const int n = br.m * k;
            if (n <= kExpandLimit) {
                Tk = 0.0;
                double binom = 1.0;
                for (int q = 0; q <= n; ++q) {
                    Tk += ((q % 2) ? -binom : binom) * exp_moment(q);
                    binom = binom * (n - q) / (q + 1.0);
                }
            } else {
                Tk = integ([&](double u) {
                    const double x = xof(u);
                    return density(u) * std::exp(n * std::log(-std::expm1(-x)));
                });
            }
            branch_sum += coef[k] * Tk;
        }
        const cplx pb = std::exp(b * std::log(br.p));
        total += pb * branch_sum;
        if (!integer_b) {
            cplx c = coef[K];
            double cmax = 0;
            for (int k = K; k < K + 2000; ++k) {
                c *= (double(k) - b) / (k + 1.0);
                cmax = std::max(cmax, std::abs(c));
            }
            const double rem = integ([&](double u) {
                const double x = xof(u);
                const double lf = br.m * std::log(-std::expm1(-x));
                return density(u) * std::exp((K + 1) * lf - log_alzer_csp(br.m, x));
            });
            tail += std::abs(pb) * cmax * rem;
        }
    }
    out.value = total;
    out.abs_error = err;
    out.tail_bound = std::isfinite(tail) ? tail : kInf;
    return out;
}

}  // namespace mmmeta
