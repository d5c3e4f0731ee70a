#include "mmmeta/mcsim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "mmmeta/association.hpp"
#include "mmmeta/quadrature.hpp"
#include "mmmeta/specfun.hpp"

namespace mmmeta::mc {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kMaxAttempts = 10000;
// Lane layout inside one realization's stream family.
constexpr std::uint64_t kLanesPerAttempt = 1000;
constexpr std::uint64_t kSbsLane = 500;

struct Context {
    const NetworkConfig& cfg;
    DerivedParams dp;
    McOptions opt;
    double base_radius;
};

double exp1(std::mt19937_64& g) { return std::exponential_distribution<double>(1.0)(g); }
double unif(std::mt19937_64& g) { return std::uniform_real_distribution<double>(0.0, 1.0)(g); }

// Homogeneous PPP on the annulus r in (r_in, r_out].
void sample_annulus(std::vector<Point>& out, double lambda, double r_in, double r_out, std::mt19937_64& g) {
    const double area = kPi * (r_out * r_out - r_in * r_in);
    const auto n = std::poisson_distribution<long long>(lambda * area)(g);
    for (long long i = 0; i < n; ++i) {
        const double r = std::sqrt(r_in * r_in + unif(g) * (r_out * r_out - r_in * r_in));
        const double phi = 2.0 * kPi * unif(g);
        Point p;
        p.x = r * std::cos(phi);
        p.y = r * std::sin(phi);
        p.mark_u = unif(g);
        out.push_back(p);
    }
}

void sample_tier(std::vector<Point>& out, double lambda, const Context& c, std::uint64_t seed, std::uint64_t index,
                 std::uint64_t lane0) {
    double r_in = 0.0, r_out = c.base_radius;
    for (int ring = 0; ring <= c.opt.radius_doublings; ++ring) {
        auto g = substream(seed, index, lane0 + static_cast<std::uint64_t>(ring));
        sample_annulus(out, lambda, r_in, r_out, g);
        r_in = r_out;
        r_out *= 2.0;
    }
}

Point at_u(double u, std::mt19937_64& g, LinkState s) {
    const double r = std::sqrt(u), phi = 2.0 * kPi * unif(g);
    Point p;
    p.x = r * std::cos(phi);
    p.y = r * std::sin(phi);
    p.state = s;
    return p;
}

int nearest(const std::vector<Point>& pts, double x0, double y0) {
    int best = -1;
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double dx = pts[i].x - x0, dy = pts[i].y - y0, d2 = dx * dx + dy * dy;
        if (d2 < bd) {
            bd = d2;
            best = static_cast<int>(i);
        }
    }
    return best;
}

double sbs_pathloss(const Point& p, const NetworkConfig& cfg) {
    const double a = p.state == LinkState::Los ? cfg.small.ple_alpha2_los : cfg.small.ple_alpha2_nlos;
    return std::pow(p.r2(), 0.5 * a);
}

// MBS serving an SBS over mm-wave: smallest path loss among MBSs marked as
// seen from the SBS. Returns -1 if none is marked.
int mm_backhaul_server(const Realization& r, const Point& s, const NetworkConfig& cfg, LinkState& state, double& pl) {
    const double d2 = cfg.mmwave.los_ball_d * cfg.mmwave.los_ball_d;
    int best = -1;
    pl = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < r.mbs_points.size(); ++i) {
        const Point& m = r.mbs_points[i];
        const double dx = m.x - s.x, dy = m.y - s.y, q = dx * dx + dy * dy;
        double l;
        LinkState st;
        if (q < d2) {
            if (m.mark_u >= cfg.mmwave.p_los) continue;
            st = LinkState::Los;
            l = std::pow(q, 0.5 * cfg.small.ple_alpha2_los);
        } else {
            if (m.mark_u >= cfg.mmwave.p_nlos) continue;
            st = LinkState::Nlos;
            l = std::pow(q, 0.5 * cfg.small.ple_alpha2_nlos);
        }
        if (l < pl) {
            pl = l;
            best = static_cast<int>(i);
            state = st;
        }
    }
    return best;
}

Realization sample(const Context& c, std::uint64_t seed, std::uint64_t index) {
    const NetworkConfig& cfg = c.cfg;
    Realization r;
    r.radius = c.base_radius * std::ldexp(1.0, c.opt.radius_doublings);
    const double R2 = r.radius * r.radius;
    const bool full_sbs = c.opt.variant == Variant::UWaveOnly;
    for (int attempt = 0;; ++attempt) {
        if (attempt >= kMaxAttempts) throw std::runtime_error("sample_realization: MBS tier empty in every attempt");
        const std::uint64_t lane0 = kLanesPerAttempt * static_cast<std::uint64_t>(attempt);
        r.mbs_points.clear();
        sample_tier(r.mbs_points, cfg.macro.density_lambda1, c, seed, index, lane0);
        if (r.mbs_points.empty()) {
            ++r.resamples;
            continue;
        }
        r.sbs_points.clear();
        if (full_sbs) {
            sample_tier(r.sbs_points, cfg.small.density_lambda2, c, seed, index, lane0 + kSbsLane);
        } else {
            auto g = substream(seed, index, lane0 + kSbsLane);
            const double lam2 = cfg.small.density_lambda2, d2 = cfg.mmwave.los_ball_d * cfg.mmwave.los_ball_d;
            // Nearest LOS-marked point inside the ball, nearest NLOS-marked one outside.
            const double e_los = exp1(g), e_nlos = exp1(g);
            if (cfg.mmwave.p_los > 0) {
                const double u = e_los / (kPi * lam2 * cfg.mmwave.p_los);
                if (u < d2 && u < R2) r.sbs_points.push_back(at_u(u, g, LinkState::Los));
            }
            if (cfg.mmwave.p_nlos > 0) {
                const double u = d2 + e_nlos / (kPi * lam2 * cfg.mmwave.p_nlos);
                if (u < R2) r.sbs_points.push_back(at_u(u, g, LinkState::Nlos));
            }
        }
        break;
    }

    const int m1 = nearest(r.mbs_points, 0.0, 0.0);
    const double l1 = std::pow(r.mbs_points[m1].r2(), 0.5 * cfg.macro.ple_alpha1);
    int s = -1;
    if (full_sbs) {
        s = nearest(r.sbs_points, 0.0, 0.0);
        if (s >= 0) {
            const double p1 = cfg.macro.power_p1 * cfg.macro.bias_b1 / l1;
            const double p2 = cfg.small.power_p2 * cfg.small.bias_b2 /
                              std::pow(r.sbs_points[s].r2(), 0.5 * cfg.small.ple_alpha2_nlos);
            if (!(p2 > p1)) s = -1;
        }
    } else {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < r.sbs_points.size(); ++i) {
            const double l = sbs_pathloss(r.sbs_points[i], cfg);
            if (l < best) {
                best = l;
                s = static_cast<int>(i);
            }
        }
        if (s >= 0 && !(best < c.dp.a_hat * l1)) s = -1;
    }
    if (s < 0) {
        r.serving = ServingKind::Direct;
        r.serving_mbs = m1;
        return r;
    }
    r.serving = ServingKind::DualHop;
    r.serving_sbs = s;
    const Point& sp = r.sbs_points[s];
    if (c.opt.variant == Variant::MmWaveBackhaul) {
        LinkState st;
        double pl;
        r.serving_mbs = mm_backhaul_server(r, sp, cfg, st, pl);
    } else {
        r.serving_mbs = nearest(r.mbs_points, sp.x, sp.y);
    }
    return r;
}

// ln Γ(m, x)/Γ(m) for integer m, finite for any x >= 0.
double log_upper_gamma_ratio(int m, double x) {
    if (x <= 0) return 0.0;
    if (x < 1.0) return std::log(specfun::upper_gamma_ratio(m, x));
    // Σ_{k<m} x^k/k! = x^(m-1)/(m-1)! (1 + (m-1)/x + ...), summed from the top.
    double s = 1.0, t = 1.0;
    for (int k = m - 1; k >= 1; --k) {
        t *= k / x;
        s += t;
    }
    return -x + (m - 1) * std::log(x) - std::lgamma(static_cast<double>(m)) + std::log(s);
}

double log_gamma_csp(int m, double omega, double nu, double pathloss) {
    return log_upper_gamma_ratio(m, m * nu * pathloss / omega);
}

std::vector<double> r2_from(const std::vector<Point>& pts, double x0, double y0, int skip) {
    std::vector<double> out;
    out.reserve(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (static_cast<int>(i) == skip) continue;
        const double dx = pts[i].x - x0, dy = pts[i].y - y0;
        out.push_back(dx * dx + dy * dy);
    }
    return out;
}

double log_product_at(const std::vector<Point>& pts, double x0, double y0, int serving, double theta, double alpha,
                      double lambda, double radius, bool correct) {
    const Point& s = pts[serving];
    const double dx = s.x - x0, dy = s.y - y0, r0_sq = dx * dx + dy * dy;
    double v = log_rayleigh_product(r0_sq, r2_from(pts, x0, y0, serving), theta, alpha);
    if (correct) v += far_field_log_factor(lambda, theta, std::sqrt(r0_sq), alpha, radius);
    return v;
}

double log_direct(const Realization& r, double theta, const Context& c) {
    if (r.serving != ServingKind::Direct) throw std::invalid_argument("csp_direct: device is not served directly");
    return log_product_at(r.mbs_points, 0.0, 0.0, r.serving_mbs, theta, c.cfg.macro.ple_alpha1,
                          c.cfg.macro.density_lambda1, r.radius, c.opt.far_field_correction);
}

double log_backhaul(const Realization& r, double theta, const Context& c) {
    if (r.serving != ServingKind::DualHop) throw std::invalid_argument("csp_backhaul: device is not dual-hop");
    const Point& sp = r.sbs_points[r.serving_sbs];
    if (c.opt.variant == Variant::MmWaveBackhaul) {
        LinkState st{};
        double pl;
        if (mm_backhaul_server(r, sp, c.cfg, st, pl) < 0) return -std::numeric_limits<double>::infinity();
        const MmLink k = mm_backhaul_link(c.cfg, c.dp, theta);
        return st == LinkState::Los ? log_gamma_csp(k.m_los, k.omega_los, k.nu, pl)
                                    : log_gamma_csp(k.m_nlos, k.omega_nlos, k.nu, pl);
    }
    // The correction treats the SBS as the disc centre; it sits close to it.
    return log_product_at(r.mbs_points, sp.x, sp.y, r.serving_mbs, theta, c.cfg.macro.ple_alpha1,
                          c.cfg.macro.density_lambda1, r.radius, c.opt.far_field_correction);
}

double log_access(const Realization& r, double theta, const Context& c) {
    if (r.serving != ServingKind::DualHop) throw std::invalid_argument("csp_access: device is not dual-hop");
    if (c.opt.variant == Variant::UWaveOnly)
        return log_product_at(r.sbs_points, 0.0, 0.0, r.serving_sbs, theta, c.cfg.small.ple_alpha2_nlos,
                              c.cfg.small.density_lambda2, r.radius, c.opt.far_field_correction);
    const Point& sp = r.sbs_points[r.serving_sbs];
    const MmLink k = access_link(c.cfg, c.dp, theta);
    const double pl = sbs_pathloss(sp, c.cfg);
    return sp.state == LinkState::Los ? log_gamma_csp(k.m_los, k.omega_los, k.nu, pl)
                                      : log_gamma_csp(k.m_nlos, k.omega_nlos, k.nu, pl);
}

Context make_context(const NetworkConfig& cfg, const McOptions& opt) {
    require_valid(cfg);
    if (!(opt.radius_scale > 0)) throw std::invalid_argument("radius_scale must be positive");
    if (opt.radius_doublings < 0 || opt.radius_doublings > 8)
        throw std::invalid_argument("radius_doublings must lie in [0, 8]");
    return Context{cfg, derive(cfg), opt, default_radius(cfg, opt.variant) * opt.radius_scale};
}

CspSample evaluate(const Realization& r, const LinkThresholds& th, const Context& c) {
    CspSample s;
    if (r.serving == ServingKind::Direct) {
        s.label = AssocLabel::Mbs;
        s.log_csp = log_direct(r, th.direct, c);
    } else {
        const double lb = log_backhaul(r, th.backhaul, c), la = log_access(r, th.access, c);
        s.label = (c.opt.variant != Variant::UWaveOnly && r.sbs_points[r.serving_sbs].state == LinkState::Los)
                      ? AssocLabel::SbsLos
                      : AssocLabel::SbsNlos;
        s.csp_backhaul = std::exp(lb);
        s.csp_access = std::exp(la);
        s.log_csp = lb + la;
    }
    s.csp = std::exp(s.log_csp);
    return s;
}

double pearson(const std::vector<CspSample>& v) {
    long double n = 0, sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (const auto& s : v) {
        if (!s.csp_backhaul || !s.csp_access) continue;
        const long double x = *s.csp_backhaul, y = *s.csp_access;
        n += 1;
        sx += x;
        sy += y;
        sxx += x * x;
        syy += y * y;
        sxy += x * y;
    }
    if (n < 2) return kNaN;
    const long double cxy = sxy - sx * sy / n, cxx = sxx - sx * sx / n, cyy = syy - sy * sy / n;
    if (cxx <= 0 || cyy <= 0) return kNaN;
    return static_cast<double>(cxy / std::sqrt(cxx * cyy));
}

}  // namespace

const char* to_string(AssocLabel a) {
    switch (a) {
        case AssocLabel::Mbs: return "mbs";
        case AssocLabel::SbsLos: return "sbs_los";
        case AssocLabel::SbsNlos: return "sbs_nlos";
    }
    return "?";
}

double default_radius(const NetworkConfig& cfg, Variant v) {
    const double r = std::max(5.0 / std::sqrt(cfg.macro.density_lambda1), 10.0 * cfg.mmwave.los_ball_d);
    return v == Variant::UWaveOnly ? std::max(r, 5.0 / std::sqrt(cfg.small.density_lambda2)) : r;
}

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index, std::uint64_t lane) {
    auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v); };
    auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
    std::seed_seq seq{lo(seed), hi(seed), lo(index), hi(index), lo(lane), hi(lane)};
    return std::mt19937_64(seq);
}

Realization sample_realization(const NetworkConfig& cfg, std::uint64_t seed, std::uint64_t index,
                               const McOptions& opt) {
    return sample(make_context(cfg, opt), seed, index);
}

double far_field_log_factor(double lambda, double theta, double r0, double alpha, double R) {
    if (lambda <= 0 || theta <= 0 || r0 <= 0) return 0.0;
    if (!(alpha > 2)) throw std::invalid_argument("far_field_log_factor: alpha must exceed 2");
    const double K = std::pow(theta, 1.0 / alpha) * r0;
    const double rho = R / K;
    // I(rho) = ∫_rho^∞ s/(1+s^α) ds.
    auto series = [alpha](double p) {
        const double q = std::pow(p, -alpha);
        double sum = 0.0, pk = std::pow(p, 2.0 - alpha);
        for (int k = 0; k < 200; ++k) {
            const double term = pk / (alpha * (k + 1) - 2.0);
            sum += (k % 2 == 0) ? term : -term;
            if (term < 1e-17 * std::abs(sum)) break;
            pk *= q;
        }
        return sum;
    };
    double I;
    if (rho >= 2.0) {
        I = series(rho);
    } else {
        quad::Options o;
        o.abs_tol = 1e-14;
        o.rel_tol = 1e-12;
        auto f = [alpha](double s) { return s / (1.0 + std::pow(s, alpha)); };
        I = quad::integrate(f, rho, 2.0, o).value + series(2.0);
    }
    return -2.0 * kPi * lambda * K * K * I;
}

double log_rayleigh_product(double r0_sq, const std::vector<double>& interferer_r2, double theta, double alpha) {
    double s = 0.0;
    for (double q : interferer_r2) s -= std::log1p(theta * std::pow(r0_sq / q, 0.5 * alpha));
    return s;
}

double csp_direct(const Realization& r, double theta_d, const NetworkConfig& cfg, const McOptions& opt) {
    return std::exp(log_direct(r, theta_d, make_context(cfg, opt)));
}

double csp_backhaul(const Realization& r, double theta2, const NetworkConfig& cfg, const McOptions& opt) {
    return std::exp(log_backhaul(r, theta2, make_context(cfg, opt)));
}

double csp_access(const Realization& r, double theta_d, const NetworkConfig& cfg, const McOptions& opt) {
    return std::exp(log_access(r, theta_d, make_context(cfg, opt)));
}

McRun run(const NetworkConfig& cfg, const std::vector<LinkThresholds>& thresholds, const McOptions& opt) {
    if (opt.n_realizations < 1) throw std::invalid_argument("run: need at least one realization");
    if (thresholds.empty()) throw std::invalid_argument("run: no thresholds");
    const Context c = make_context(cfg, opt);
    const std::size_t n = opt.n_realizations, K = thresholds.size();
    McRun out;
    out.thresholds = thresholds;
    out.samples.assign(K, std::vector<CspSample>(n));
    std::vector<int> resamples(n, 0);

    auto work = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const Realization r = sample(c, opt.seed, i);
            resamples[i] = r.resamples;
            for (std::size_t k = 0; k < K; ++k) out.samples[k][i] = evaluate(r, thresholds[k], c);
        }
    };
    unsigned T = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
    T = static_cast<unsigned>(std::min<std::size_t>(T, n));
    if (T <= 1) {
        work(0, n);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < T; ++t) pool.emplace_back(work, n * t / T, n * (t + 1) / T);
        for (auto& th : pool) th.join();
    }
    for (int v : resamples) out.resamples += static_cast<std::size_t>(v);
    const double frac = static_cast<double>(out.resamples) / static_cast<double>(n + out.resamples);
    if (frac > opt.resample_warn_fraction)
        out.warning = "MBS tier was empty in " + std::to_string(out.resamples) +
                      " draws; results lean towards realizations with at least one MBS";
    for (const auto& v : out.samples) out.backhaul_access_correlation.push_back(pearson(v));
    return out;
}

std::vector<CspSample> run(const NetworkConfig& cfg, ThetaPair thetas, const McOptions& opt) {
    return std::move(run(cfg, {LinkThresholds::from(thetas)}, opt).samples.front());
}

MetaCurve empirical_meta(const std::vector<CspSample>& samples, const std::vector<double>& x_grid) {
    if (samples.empty()) throw std::invalid_argument("empirical_meta: no samples");
    MetaCurve c;
    c.method = MetaMethod::Empirical;
    c.x_grid = x_grid;
    std::vector<double> sorted;
    sorted.reserve(samples.size());
    for (const auto& s : samples) sorted.push_back(s.csp);
    std::sort(sorted.begin(), sorted.end());
    for (double x : x_grid) {
        const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), x);
        c.ccdf.push_back(static_cast<double>(above) / static_cast<double>(sorted.size()));
    }
    return c;
}

EmpiricalValue empirical_moment(const std::vector<CspSample>& samples, std::complex<double> b) {
    if (samples.empty()) throw std::invalid_argument("empirical_moment: no samples");
    const std::size_t n = samples.size();
    if (b == std::complex<double>(0.0, 0.0)) return {1.0, 0.0};
    std::vector<std::complex<double>> z(n);
    std::complex<long double> sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lc = samples[i].log_csp;
        if (b.real() < 0 && !std::isfinite(lc))
            throw std::domain_error("empirical_moment: zero CSP with a negative order");
        z[i] = std::isfinite(lc) ? std::exp(b * lc) : std::complex<double>(0.0, 0.0);
        sum += std::complex<long double>(z[i].real(), z[i].imag());
    }
    const std::complex<double> mean(static_cast<double>(sum.real() / n), static_cast<double>(sum.imag() / n));
    // Leave-one-out means are (S - z_i)/(n-1); their jackknife spread reduces
    // to the usual standard error of a mean.
    long double ss = 0;
    for (const auto& v : z) ss += std::norm(v - mean);
    EmpiricalValue out{mean, 0.0};
    if (n > 1) out.std_error = static_cast<double>(std::sqrt(ss / (static_cast<long double>(n) * (n - 1))));
    return out;
}

EmpiricalValue empirical_variance(const std::vector<CspSample>& samples) {
    const std::size_t n = samples.size();
    if (n < 2) throw std::invalid_argument("empirical_variance: need two samples");
    long double s1 = 0, s2 = 0;
    for (const auto& s : samples) {
        s1 += s.csp;
        s2 += static_cast<long double>(s.csp) * s.csp;
    }
    const long double m1 = s1 / n, m2 = s2 / n;
    EmpiricalValue out{static_cast<double>(m2 - m1 * m1), 0.0};
    std::vector<long double> loo(n);
    long double mean_loo = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const long double x = samples[i].csp;
        const long double a = (s1 - x) / (n - 1), b = (s2 - x * x) / (n - 1);
        loo[i] = b - a * a;
        mean_loo += loo[i];
    }
    mean_loo /= n;
    long double ss = 0;
    for (long double v : loo) ss += (v - mean_loo) * (v - mean_loo);
    out.std_error = static_cast<double>(std::sqrt(ss * (n - 1) / n));
    return out;
}

AssocFrequencies association_frequencies(const std::vector<CspSample>& samples) {
    AssocFrequencies f;
    f.n = samples.size();
    if (f.n == 0) return f;
    for (const auto& s : samples) {
        switch (s.label) {
            case AssocLabel::Mbs: f.mbs += 1; break;
            case AssocLabel::SbsLos: f.sbs_los += 1; break;
            case AssocLabel::SbsNlos: f.sbs_nlos += 1; break;
        }
    }
    const double n = static_cast<double>(f.n);
    f.mbs /= n;
    f.sbs_los /= n;
    f.sbs_nlos /= n;
    return f;
}

TruncationCheck truncation_check(const NetworkConfig& cfg, LinkThresholds th, const McOptions& opt) {
    McOptions a = opt, b = opt;
    b.radius_doublings = opt.radius_doublings + 1;
    TruncationCheck t;
    t.m1 = empirical_moment(run(cfg, {th}, a).samples[0], 1.0).value.real();
    t.m1_doubled = empirical_moment(run(cfg, {th}, b).samples[0], 1.0).value.real();
    t.rel_change = std::abs(t.m1_doubled - t.m1) / std::abs(t.m1);
    t.within = t.rel_change < opt.truncation_tol;
    return t;
}

double brute_force_success(double r0, const std::vector<double>& interferer_r, double theta, double alpha,
                           std::size_t draws, std::uint64_t seed) {
    auto g = substream(seed, 0, 0);
    std::exponential_distribution<double> h(1.0);
    std::vector<double> gain;
    for (double r : interferer_r) gain.push_back(std::pow(r, -alpha));
    const double g0 = std::pow(r0, -alpha);
    std::size_t ok = 0;
    for (std::size_t k = 0; k < draws; ++k) {
        double I = 0.0;
        for (double gi : gain) I += h(g) * gi;
        if (h(g) * g0 > theta * I) ++ok;
    }
    return static_cast<double>(ok) / static_cast<double>(draws);
}

}  // namespace mmmeta::mc
