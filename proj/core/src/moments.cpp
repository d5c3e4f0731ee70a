#include "mmmeta/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mmmeta/association.hpp"
#include "mmmeta/errors.hpp"
#include "mmmeta/quadrature.hpp"
#include "mmmeta/specfun.hpp"

namespace mmmeta {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool is_real(cplx b) { return b.imag() == 0.0; }

LinkMoment diverged(std::string why) {
    LinkMoment m;
    m.diverged = true;
    m.value = cplx(kInf, 0.0);
    m.reason = std::move(why);
    return m;
}

// 2F1(b, -delta; 1 - delta; -theta) = 1 + delta * J(b, theta) with
// J = int_0^1 [1 - (1 + theta v)^-b] v^(-delta-1) dv, the PGFL exponent of a
// PPP of Rayleigh-faded interferers beyond the serving distance.
cplx pgfl_factor(cplx b, double theta, double alpha) {
    const double delta = 2.0 / alpha;
    return specfun::gauss_2f1(b, -delta, 1.0 - delta, -theta);
}

double backhaul_pole(cplx b, double alpha1) {
    return (b == cplx(-1.0, 0.0)) ? 0.5 * (alpha1 - 2.0) : kNaN;
}

LinkMoment direct_moment(cplx b, double theta_d, const NetworkConfig& cfg, const DerivedParams& dp) {
    const double a1 = cfg.macro.ple_alpha1;
    const double lam1 = cfg.macro.density_lambda1;
    const cplx F = pgfl_factor(b, theta_d, a1);
    MmLink sbs = access_link(cfg, dp, 0.0);

    // The void probability of the SBS tier decays like exp(-c u^(a1/aN)) when
    // NLOS SBSs exist; with that, a nonpositive PGFL factor may still integrate.
    const double e = a1 / cfg.small.ple_alpha2_nlos;
    const double nlos_rate = kPi * cfg.small.density_lambda2 * cfg.mmwave.p_nlos *
                             std::pow(dp.a_hat, 2.0 / cfg.small.ple_alpha2_nlos);
    const double lin_rate = kPi * lam1 * F.real() + (e == 1.0 ? nlos_rate : 0.0);
    const bool ok = F.real() > 0 || (nlos_rate > 0 && (e > 1.0 || lin_rate > 0));
    if (!ok) return diverged("direct link: interference PGFL exponent is nonpositive for this order");

    auto f = [&](double u) -> cplx {
        const double l1 = std::pow(u, 0.5 * a1);
        return kPi * lam1 * std::exp(-kPi * lam1 * u * F - sbs.count(dp.a_hat * l1));
    };
    const double ua = std::pow(std::pow(sbs.d, sbs.alpha_los) / dp.a_hat, 2.0 / a1);
    const double ub = std::pow(std::pow(sbs.d, sbs.alpha_nlos) / dp.a_hat, 2.0 / a1);
    const double lo = std::min(ua, ub), hi = std::max(ua, ub);
    quad::Options o;
    o.abs_tol = 1e-14;
    o.rel_tol = 1e-11;
    o.max_intervals = 4000;
    LinkMoment out;
    // Resolve the near region first: with a large F the mass sits well before the breakpoints.
    const double near = lin_rate > 0 ? std::min(lo, 40.0 / lin_rate) : lo;
    auto head = quad::integrate_pieces(f, {0.0, near / 8, near, lo, hi}, o);
    double scale = lin_rate > 0 ? 1.0 / lin_rate : 1.0 / (kPi * lam1);
    scale = std::clamp(scale, 1e-6 * (hi + 1.0), 1e6 * (hi + 1.0));
    auto tail = quad::integrate_to_infinity(f, hi, scale, o);
    out.value = head.value + tail.value;
    out.abs_error = head.abs_error + tail.abs_error;
    return out;
}

}  // namespace

const char* to_string(Variant v) {
    switch (v) {
        case Variant::Hybrid: return "hybrid";
        case Variant::UWaveOnly: return "uwave";
        case Variant::MmWaveBackhaul: return "mmwave-backhaul";
    }
    return "?";
}

Variant variant_from_string(const std::string& s) {
    if (s == "hybrid") return Variant::Hybrid;
    if (s == "uwave") return Variant::UWaveOnly;
    if (s == "mmwave-backhaul") return Variant::MmWaveBackhaul;
    throw std::invalid_argument("unknown variant: " + s);
}

LinkMoment moment_backhaul(cplx b, double theta2, double alpha1) {
    if (!(alpha1 > 2)) throw std::invalid_argument("moment_backhaul: alpha1 must exceed 2");
    const cplx F = pgfl_factor(b, theta2, alpha1);
    if (is_real(b) && F.real() <= 0) {
        auto m = diverged("backhaul: 2F1 denominator is nonpositive (threshold at or beyond the pole)");
        return m;
    }
    LinkMoment m;
    m.value = 1.0 / F;
    return m;
}

LinkMoment moment_access(cplx b, double theta_d, const NetworkConfig& cfg, EvalPath path, int series_terms) {
    const DerivedParams dp = derive(cfg);
    return access_link(cfg, dp, theta_d).moment(b, path, series_terms);
}

LinkMoment moment_direct(cplx b, double theta_d, const NetworkConfig& cfg) {
    return direct_moment(b, theta_d, cfg, derive(cfg));
}

MomentEngine::MomentEngine(const NetworkConfig& cfg, LinkThresholds th, Variant variant, EvalPath path,
                           int series_terms)
    : cfg_(cfg), dp_(derive(cfg)), th_(th), variant_(variant), path_(path), series_terms_(series_terms) {
    require_valid(cfg_);
    if (th.backhaul < 0 || th.access < 0 || th.direct < 0) throw std::invalid_argument("thresholds must be >= 0");
    access_ = access_link(cfg_, dp_, th_.access);
    mm_backhaul_ = mm_backhaul_link(cfg_, dp_, th_.backhaul);
}

MomentResult MomentEngine::operator()(cplx b) const {
    if (!std::isfinite(b.real()) || !std::isfinite(b.imag())) throw std::invalid_argument("moment order must be finite");
    MomentResult r;
    LinkMoment bh, acc, dir;
    const double a1 = cfg_.macro.ple_alpha1;
    switch (variant_) {
        case Variant::Hybrid:
        case Variant::MmWaveBackhaul:
            if (variant_ == Variant::Hybrid) {
                bh = moment_backhaul(b, th_.backhaul, a1);
                r.backhaul_pole = backhaul_pole(b, a1);
            } else {
                bh = mm_backhaul_.moment(b, EvalPath::DirectQuadrature);
            }
            acc = access_.moment(b, path_, series_terms_);
            dir = direct_moment(b, th_.direct, cfg_, dp_);
            break;
        case Variant::UWaveOnly:
            bh = moment_backhaul(b, th_.backhaul, a1);
            r.backhaul_pole = backhaul_pole(b, a1);
            acc = moment_tier_uwave(b, th_.access, 2, cfg_);
            dir = moment_tier_uwave(b, th_.direct, 1, cfg_);
            break;
    }
    r.components = {bh.value, acc.value, dir.value};
    r.series_tail_bound = acc.tail_bound;
    for (const LinkMoment* m : {&bh, &acc, &dir}) {
        if (m->diverged) {
            r.diverged = true;
            if (!r.reason.empty()) r.reason += "; ";
            r.reason += m->reason;
        }
    }
    r.value = r.diverged ? cplx(kInf, 0.0) : bh.value * acc.value + dir.value;
    return r;
}

MomentResult moment_total(const MomentQuery& q, const NetworkConfig& cfg) {
    MomentEngine eng(cfg, LinkThresholds{q.theta_backhaul, q.theta_device, q.theta_device}, q.variant, q.eval_path,
                     q.series_terms);
    return eng(q.order_b);
}

cplx imaginary_moment(double t, ThetaPair thetas, const NetworkConfig& cfg, Variant variant, EvalPath path) {
    if (t == 0.0) return 1.0;
    MomentEngine eng(cfg, LinkThresholds::from(thetas), variant, path);
    return eng(cplx(0.0, t)).value;
}

MomentResult mean_local_delay(ThetaPair thetas, const NetworkConfig& cfg, Variant variant) {
    MomentEngine eng(cfg, LinkThresholds::from(thetas), variant);
    return eng(cplx(-1.0, 0.0));
}

JitterResult network_jitter(ThetaPair thetas, const NetworkConfig& cfg, Variant variant) {
    MomentEngine eng(cfg, LinkThresholds::from(thetas), variant);
    const MomentResult m1 = eng(cplx(-1.0, 0.0));
    const MomentResult m2 = eng(cplx(-2.0, 0.0));
    JitterResult j;
    if (m1.diverged || m2.diverged) {
        j.diverged = true;
        j.value = kInf;
        j.reason = m2.diverged ? m2.reason : m1.reason;
        return j;
    }
    j.value = m2.value.real() - m1.value.real() * m1.value.real();
    return j;
}

LinkThresholds rate_thresholds(RateTargets r, const NetworkConfig& cfg) {
    if (r.t1 < 0 || r.t2 < 0 || r.tbh < 0) throw std::invalid_argument("rate targets must be nonnegative");
    const double eta = cfg.uwave.access_fraction_eta;
    const double w1 = cfg.uwave.bandwidth_w1, w2 = cfg.mmwave.bandwidth_w2;
    if ((r.tbh > 0 || r.t1 > 0) && !(eta > 0 && eta < 1))
        throw PreconditionError("rate targets on microwave links need access_fraction_eta in (0,1)");
    auto shannon = [](double t, double w) { return t == 0 ? 0.0 : std::expm1(std::log(2.0) * t / w); };
    return {shannon(r.tbh, (1.0 - eta) * w1), shannon(r.t2, w2), shannon(r.t1, eta * w1)};
}

MomentResult rate_moment(cplx b, RateTargets r, const NetworkConfig& cfg) {
    MomentEngine eng(cfg, rate_thresholds(r, cfg), Variant::Hybrid);
    return eng(b);
}

LinkMoment moment_tier_uwave(cplx b, double theta, int k, const NetworkConfig& cfg) {
    if (k != 1 && k != 2) throw std::invalid_argument("moment_tier_uwave: tier must be 1 or 2");
    const double l1 = cfg.macro.density_lambda1, l2 = cfg.small.density_lambda2;
    const double pb1 = cfg.macro.power_p1 * cfg.macro.bias_b1;
    const double pb2 = cfg.small.power_p2 * cfg.small.bias_b2;
    const double a1 = cfg.macro.ple_alpha1, a2 = cfg.small.ple_alpha2_nlos;
    // Competing tier j weighted by its density and power-bias ratio.
    const double other = (k == 1) ? (l2 / l1) * std::pow(pb2 / pb1, 2.0 / a2) : (l1 / l2) * std::pow(pb1 / pb2, 2.0 / a1);
    const double ak = (k == 1) ? a1 : a2;
    if (!(ak > 2)) throw std::invalid_argument("moment_tier_uwave: path-loss exponent must exceed 2");
    const cplx denom = other + pgfl_factor(b, theta, ak);
    if (is_real(b) && denom.real() <= 0)
        return diverged("microwave tier: PGFL denominator is nonpositive for this order");
    LinkMoment m;
    m.value = 1.0 / denom;
    return m;
}

MomentResult moment_total_uwave(cplx b, ThetaPair thetas, const NetworkConfig& cfg) {
    MomentEngine eng(cfg, LinkThresholds::from(thetas), Variant::UWaveOnly);
    return eng(b);
}

}  // namespace mmmeta
