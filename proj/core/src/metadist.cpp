#include "mmmeta/metadist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "mmmeta/errors.hpp"
#include "mmmeta/specfun.hpp"

namespace mmmeta {

const char* to_string(MetaMethod m) {
    switch (m) {
        case MetaMethod::GilPelaez: return "gil_pelaez";
        case MetaMethod::BetaApprox: return "beta";
        case MetaMethod::Empirical: return "empirical";
    }
    return "?";
}

namespace {

class CachedMoments {
   public:
    explicit CachedMoments(const MomentFn& fn) : fn_(fn) {}
    cplx operator()(double t) {
        auto it = cache_.find(t);
        if (it != cache_.end()) return it->second;
        const cplx v = fn_(t);
        cache_.emplace(t, v);
        return v;
    }

   private:
    const MomentFn& fn_;
    std::map<double, cplx> cache_;
};

double panel_width_at(double t, const GilPelaezOptions& opt) {
    double w = opt.panel_width;
    for (double edge = 50.0; t >= edge && w < opt.max_panel_width; edge *= 2.0) w *= 2.0;
    return std::min(w, opt.max_panel_width);
}

// Integral of Im(G) over [T, inf) for G(t) = e^{-jtw} M(jt) / t, from the
// leading endpoint term of an integrand A(t) e^{j psi(t)} with slowly varying
// A and local frequency psi'(T): -G(T) / (j psi'(T)).
double endpoint_tail(CachedMoments& M, double T, double w) {
    const double h = 1e-3 * std::max(1.0, T);
    const cplx m0 = M(T), m1 = M(T - h);
    if (std::abs(m0) == 0.0) return 0.0;
    const double dphase = std::arg(m0 / m1) / h;
    const double omega = dphase - w;
    if (std::abs(omega) < 1e-12) return 0.0;
    const cplx G = std::exp(cplx(0.0, -T * w)) * m0 / T;
    return std::imag(-G / cplx(0.0, omega));
}

GilPelaezResult invert_one(CachedMoments& M, double x, const GilPelaezOptions& opt) {
    GilPelaezResult out;
    if (!(x >= 0 && x <= 1)) throw std::invalid_argument("gil_pelaez_ccdf: x must lie in [0,1]");
    if (x == 0 || x == 1) {
        out.value = out.raw = (x == 0) ? 1.0 : 0.0;
        out.converged = true;
        return out;
    }
    const double w = std::log(x);
    // Im(e^{-jtw} M(jt)) / t is finite as t -> 0 and GK nodes never touch 0.
    auto g = [&](double t) -> double { return std::imag(std::exp(cplx(0.0, -t * w)) * M(t)) / t; };
    double head = 0.0, quad_err = 0.0;
    double t = 0.0;
    double checkpoint = opt.t_first_check;
    double prev_total = std::numeric_limits<double>::quiet_NaN();
    double total = 0.0, change = std::numeric_limits<double>::infinity();
    while (true) {
        const double hi = std::min(t + panel_width_at(t, opt), checkpoint);
        auto r = quad::integrate(g, t, hi, opt.quad);
        head += r.value;
        quad_err += r.abs_error;
        t = hi;
        if (t < checkpoint) continue;
        total = head + endpoint_tail(M, t, w);
        if (!std::isnan(prev_total)) {
            change = std::abs(total - prev_total) / kPi;
            if (change < opt.tail_tol) {
                out.converged = true;
                break;
            }
        }
        prev_total = total;
        if (t >= opt.t_cap) break;
        checkpoint *= 2.0;
    }
    out.t_max = t;
    out.raw = 0.5 + total / kPi;
    out.value = std::clamp(out.raw, 0.0, 1.0);
    out.abs_error = quad_err / kPi + std::min(change, 1.0);
    if (out.abs_error > opt.fail_error)
        throw IntegrationFailure("gil_pelaez_ccdf: inversion error too large", out.abs_error);
    return out;
}

}  // namespace

GilPelaezResult gil_pelaez_ccdf(const MomentFn& moment_fn, double x, const GilPelaezOptions& opt) {
    CachedMoments M(moment_fn);
    return invert_one(M, x, opt);
}

std::vector<GilPelaezResult> gil_pelaez_ccdf(const MomentFn& moment_fn, const std::vector<double>& xs,
                                             const GilPelaezOptions& opt) {
    CachedMoments M(moment_fn);
    std::vector<GilPelaezResult> out;
    out.reserve(xs.size());
    for (double x : xs) out.push_back(invert_one(M, x, opt));
    return out;
}

BetaFitResult beta_fit(double m1, double m2) {
    // Quadrature noise of order 1e-12 can push a zero variance slightly negative.
    constexpr double kZeroVar = 1e-11;
    if (m1 >= -kZeroVar && m1 <= 1 + kZeroVar && std::abs(m2 - m1 * m1) <= kZeroVar)
        return PointMass{std::clamp(m1, 0.0, 1.0)};
    if (!(m1 > 0 && m1 < 1)) throw std::invalid_argument("beta_fit: m1 must lie in (0,1)");
    const double var = m2 - m1 * m1;
    if (!(var > 0) || !(m2 < m1)) throw std::invalid_argument("beta_fit: need m1^2 < m2 < m1");
    const double beta = (m1 - m2) * (1.0 - m1) / var;
    return BetaFit{beta * m1 / (1.0 - m1), beta};
}

double beta_ccdf(const BetaFit& fit, double x) {
    if (!(x >= 0 && x <= 1)) throw std::invalid_argument("beta_ccdf: x must lie in [0,1]");
    return 1.0 - specfun::reg_inc_beta(x, fit.shape_a, fit.shape_b);
}

double beta_ccdf(const BetaFitResult& fit, double x) {
    if (const auto* b = std::get_if<BetaFit>(&fit)) return beta_ccdf(*b, x);
    const double p = std::get<PointMass>(fit).at;
    if (x <= 0) return 1.0;
    if (x >= 1) return 0.0;
    if (x < p) return 1.0;
    if (x > p) return 0.0;
    return 0.5;
}

MetaCurve meta_curve(const MomentEngine& engine, const std::vector<double>& x_grid, MetaMethod method,
                     const GilPelaezOptions& opt) {
    MetaCurve c;
    c.x_grid = x_grid;
    c.method = method;
    c.thresholds = engine.thresholds();
    if (method == MetaMethod::BetaApprox) {
        const MomentResult m1 = engine(1.0), m2 = engine(2.0);
        const BetaFitResult fit = beta_fit(m1.value.real(), m2.value.real());
        for (double x : x_grid) c.ccdf.push_back(beta_ccdf(fit, x));
    } else if (method == MetaMethod::GilPelaez) {
        MomentFn fn = [&](double t) { return engine(cplx(0.0, t)).value; };
        for (const auto& r : gil_pelaez_ccdf(fn, x_grid, opt)) {
            c.ccdf.push_back(r.value);
            c.max_abs_error = std::max(c.max_abs_error, r.abs_error);
        }
    } else {
        throw std::invalid_argument("meta_curve: empirical curves come from Monte Carlo samples");
    }
    return c;
}

MetaCurve meta_sir(const NetworkConfig& cfg, ThetaPair thetas, const std::vector<double>& x_grid, MetaMethod method,
                   Variant variant, const GilPelaezOptions& opt) {
    MomentEngine engine(cfg, LinkThresholds::from(thetas), variant);
    return meta_curve(engine, x_grid, method, opt);
}

MetaCurve meta_rate(const NetworkConfig& cfg, RateTargets rates, const std::vector<double>& x_grid, MetaMethod method,
                    const GilPelaezOptions& opt) {
    MomentEngine engine(cfg, rate_thresholds(rates, cfg), Variant::Hybrid);
    return meta_curve(engine, x_grid, method, opt);
}

}  // namespace mmmeta
