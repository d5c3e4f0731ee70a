#include "validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <stdexcept>

#include "mmmeta/association.hpp"
#include "mmmeta/mcsim.hpp"
#include "mmmeta/metadist.hpp"
#include "mmmeta/moments.hpp"
#include "mmmeta/specfun.hpp"
#include "oracles/specfun_oracles.inc"

namespace mmmeta::tools {
namespace {

using cplx = std::complex<double>;

std::vector<double> grid(double a, double b, int n) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(a + (b - a) * i / (n - 1));
    return v;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// Collects sub-check outcomes into one verdict.
struct Checks {
    bool ok = true;
    std::ostringstream log;
    void info(const std::string& s) { log << s << "; "; }
    void require(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            log << "FAILED " << what << "; ";
        }
    }
};

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

std::size_t index_of(const std::vector<double>& xs, double x) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (std::abs(xs[i] - x) < std::abs(xs[best] - x)) best = i;
    return best;
}

// Null-hypothesis binomial sigma, with p kept off the boundaries.
double binomial_sigma(double p, std::size_t n) {
    const double q = std::clamp(p, 1.0 / n, 1.0 - 1.0 / n);
    return std::sqrt(q * (1.0 - q) / n);
}

mc::McOptions mc_opts(const AcceptanceOptions& o, std::uint64_t seed_offset = 0) {
    mc::McOptions m;
    m.n_realizations = o.n_realizations;
    m.seed = o.seed + seed_offset;
    m.threads = o.threads;
    return m;
}

const std::vector<double> kThetas{10.0, 1.0, 0.1};

// Meta distribution at x = 0.3 against figure-read values, plus GP vs Beta.
void figure_meta(Checks& c, Variant v, const std::vector<double>& targets, const AcceptanceOptions& o,
                 bool with_mc) {
    const NetworkConfig cfg;
    const auto xs = grid(0.05, 0.95, 19);
    const std::size_t i03 = index_of(xs, 0.3);
    std::vector<LinkThresholds> ths;
    for (double t : kThetas) ths.push_back(LinkThresholds::from({t, t}));
    mc::McRun run;
    if (with_mc) {
        mc::McOptions m = mc_opts(o);
        m.variant = v;
        run = mc::run(cfg, ths, m);
    }
    for (std::size_t k = 0; k < kThetas.size(); ++k) {
        const double th = kThetas[k];
        const ThetaPair tp{th, th};
        MetaCurve gp, beta;
        try {
            gp = meta_sir(cfg, tp, xs, MetaMethod::GilPelaez, v);
            beta = meta_sir(cfg, tp, xs, MetaMethod::BetaApprox, v);
        } catch (const std::exception& e) {
            c.require(false, fmt("theta=%g analytic curve: %s", th, e.what()));
            continue;
        }
        const double f = gp.ccdf[i03];
        c.info(fmt("theta=%g F(0.3)=%.4f (target %.2f) beta=%.4f", th, f, targets[k], beta.ccdf[i03]));
        c.require(std::abs(f - targets[k]) <= 0.05, fmt("theta=%g |F(0.3)-%.2f|=%.3f > 0.05", th, targets[k],
                                                         std::abs(f - targets[k])));
        const double sup = sup_diff(gp.ccdf, beta.ccdf);
        c.require(sup <= 0.02, fmt("theta=%g GP vs Beta sup-norm %.4f > 0.02", th, sup));
        if (with_mc) {
            const MetaCurve emp = mc::empirical_meta(run.samples[k], xs);
            const std::size_t n = run.samples[k].size();
            double worst = 0;
            for (std::size_t i = 0; i < xs.size(); ++i)
                worst = std::max(worst, std::abs(emp.ccdf[i] - gp.ccdf[i]) / binomial_sigma(gp.ccdf[i], n));
            c.info(fmt("theta=%g MC worst |z|=%.2f", th, worst));
            c.require(worst <= 3.0, fmt("theta=%g Monte Carlo curve off by %.2f sigma", th, worst));
        }
    }
}

CriterionResult c1(const AcceptanceOptions& o) {
    Checks c;
    figure_meta(c, Variant::Hybrid, {0.18, 0.51, 0.96}, o, true);
    return {1, "", c.ok, c.log.str()};
}

CriterionResult c2(const AcceptanceOptions&) {
    Checks c;
    const NetworkConfig cfg;
    double best_db = 0, best_var = -1, m1_at = 0;
    for (int db = -15; db <= 15; ++db) {
        const double t = db_to_linear(db);
        MomentEngine eng(cfg, LinkThresholds::from({t, t}));
        const double m1 = eng(1.0).value.real(), m2 = eng(2.0).value.real();
        if (m2 - m1 * m1 > best_var) {
            best_var = m2 - m1 * m1;
            best_db = db;
            m1_at = m1;
        }
    }
    c.info(fmt("variance peaks at %g dB (value %.4f), M1 there %.4f", best_db, best_var, m1_at));
    c.require(std::abs(best_db + 3.0) <= 1.0, fmt("peak at %g dB, not -3 +/- 1 dB", best_db));
    c.require(std::abs(m1_at - 0.49) <= 0.03, fmt("M1 at peak %.4f, not 0.49 +/- 0.03", m1_at));
    return {2, "", c.ok, c.log.str()};
}

CriterionResult c3(const AcceptanceOptions& o) {
    Checks c;
    NetworkConfig cfg;
    cfg.mmwave.m_los = 1;
    cfg.mmwave.m_nlos = 1;
    int pos_m1 = 0, pos_var = 0, n = 0;
    double worst_m1 = 0, worst_var = 0;
    for (int db = -15; db <= 15; db += 3, ++n) {
        const double t = db_to_linear(db);
        const LinkThresholds th = LinkThresholds::from({t, t});
        MomentEngine eng(cfg, th);
        const double a1 = eng(1.0).value.real(), av = eng(2.0).value.real() - a1 * a1;
        // Independent seeds per point keep the signs independent.
        const auto run = mc::run(cfg, {th}, mc_opts(o, 1000 + static_cast<std::uint64_t>(n)));
        const auto e1 = mc::empirical_moment(run.samples[0], 1.0);
        const auto ev = mc::empirical_variance(run.samples[0]);
        const double z1 = (e1.value.real() - a1) / e1.std_error, zv = (ev.value.real() - av) / ev.std_error;
        pos_m1 += z1 > 0;
        pos_var += zv > 0;
        worst_m1 = std::max(worst_m1, std::abs(z1));
        worst_var = std::max(worst_var, std::abs(zv));
        c.require(std::abs(z1) <= 3.0, fmt("%d dB: M1 analytic %.5f vs MC %.5f (z=%.2f)", db, a1, e1.value.real(), z1));
        c.require(std::abs(zv) <= 3.0,
                  fmt("%d dB: variance analytic %.5f vs MC %.5f (z=%.2f)", db, av, ev.value.real(), zv));
    }
    const double p1 = sign_test_p(pos_m1, n), pv = sign_test_p(pos_var, n);
    c.info(fmt("worst |z| M1 %.2f variance %.2f; sign test M1 %d/%d p=%.3f, variance %d/%d p=%.3f", worst_m1,
               worst_var, pos_m1, n, p1, pos_var, n, pv));
    c.require(p1 > 0.01, "sign test on M1");
    c.require(pv > 0.01, "sign test on the variance");
    return {3, "", c.ok, c.log.str()};
}

CriterionResult c4(const AcceptanceOptions&) {
    Checks c;
    const double th = 0.1;
    for (int l2 = 20; l2 <= 100; l2 += 10) {
        NetworkConfig cfg;
        cfg.small.density_lambda2 = per_km2_to_per_m2(l2);
        const MomentResult m = mean_local_delay({th, th}, cfg);
        if (m.diverged) {
            c.require(false, fmt("lambda2=%d: M_-1 diverged (%s)", l2, m.reason.c_str()));
            continue;
        }
        const double v = m.value.real();
        c.info(fmt("lambda2=%d M_-1=%.4f", l2, v));
        c.require(std::abs(v - 1.11) <= 0.02, fmt("lambda2=%d M_-1=%.4f not 1.11 +/- 0.02", l2, v));
        const double bh = m.components.m_backhaul.real();
        c.require(std::abs(bh - 1.0 / (1.0 - th)) <= 1e-9, fmt("backhaul M_-1 %.12f vs 1/(1-theta)", bh));
    }
    return {4, "", c.ok, c.log.str()};
}

CriterionResult c5(const AcceptanceOptions& o) {
    Checks c;
    figure_meta(c, Variant::UWaveOnly, {0.23, 0.72, 0.98}, o, false);
    return {5, "", c.ok, c.log.str()};
}

CriterionResult c6(const AcceptanceOptions& o) {
    Checks c;
    std::mt19937_64 g(o.seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    double worst_sum = 0, worst_cf = 0;
    for (int i = 0; i < 20; ++i) {
        NetworkConfig cfg;
        cfg.macro.density_lambda1 = per_km2_to_per_m2(0.5 + 4.5 * U(g));
        cfg.small.density_lambda2 = per_km2_to_per_m2(5.0 + 145.0 * U(g));
        cfg.small.bias_b2 = db_to_linear(-10.0 + 30.0 * U(g));
        cfg.mmwave.los_ball_d = 50.0 + 250.0 * U(g);
        cfg.mmwave.p_los = 0.2 + 0.8 * U(g);
        cfg.mmwave.p_nlos = U(g);
        try {
            const AssocProbabilities p = assoc_probs(cfg);
            const double sum = p.a1_direct + p.a2_los + p.a2_nlos;
            const double cf = closed_form_a1(cfg);
            worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
            worst_cf = std::max(worst_cf, std::abs(cf - p.a1_direct));
            c.require(std::abs(sum - 1.0) <= 1e-6, fmt("config %d: probabilities sum to 1%+.2e", i, sum - 1.0));
            c.require(std::abs(cf - p.a1_direct) <= 1e-6,
                      fmt("config %d: closed form %.9f vs quadrature %.9f", i, cf, p.a1_direct));
        } catch (const std::exception& e) {
            c.require(false, fmt("config %d: %s", i, e.what()));
        }
    }
    c.info(fmt("20 configs: worst |sum-1| %.2e, worst |closed form - quadrature| %.2e", worst_sum, worst_cf));
    const NetworkConfig cfg;
    const AssocProbabilities p = assoc_probs(cfg);
    const auto run = mc::run(cfg, {LinkThresholds{}}, mc_opts(o, 7));
    const auto f = mc::association_frequencies(run.samples[0]);
    const double an[3] = {p.a1, p.a2_los, p.a2_nlos}, em[3] = {f.mbs, f.sbs_los, f.sbs_nlos};
    const char* name[3] = {"a1", "a2_los", "a2_nlos"};
    for (int k = 0; k < 3; ++k) {
        const double z = (em[k] - an[k]) / binomial_sigma(an[k], f.n);
        c.info(fmt("%s analytic %.6f MC %.6f (z=%.2f)", name[k], an[k], em[k], z));
        c.require(std::abs(z) <= 3.0, fmt("%s Monte Carlo frequency off by %.2f sigma", name[k], z));
    }
    return {6, "", c.ok, c.log.str()};
}

// E[X^{jt}] of Beta(a, b) with integer b: prod_{k<b} (a+k)/(a+k+jt).
MomentFn beta_moments(double a, int b) {
    return [a, b](double t) {
        cplx v = 1.0;
        for (int k = 0; k < b; ++k) v *= (a + k) / cplx(a + k, t);
        return v;
    };
}

struct Frozen2F1 {
    cplx a;
    double b, c, z;
    cplx value;
};

void special_function_checks(Checks& c) {
    // Reference values from 40-digit arithmetic.
    const Frozen2F1 f21[] = {
        {{1, 0}, -0.5, 0.5, -1, {1.7853981633974483096, 0.0}},
        {{0.5, 2}, -0.5, 0.5, -3, {3.1509028224688848785, 2.9483665928603359442}},
        {{0, 3}, -0.5, 0.5, -10, {6.4562524964466218744, 7.0112873308311383218}},
        {{2, 0}, -0.25, 0.75, -0.7, {1.3331148775217027487, 0.0}},
        {{-1.5, 0}, -0.5, 0.5, -100, {-537.41724968939316932, 0.0}},
        {{1, 1}, -0.5, 0.5, -1000, {56.218695893397406422, 27.4190844231609352}},
        {{0, 20}, -0.5, 0.5, -1, {5.5238002762728445992, 5.6219724025530454724}},
        {{1.5, -4}, -2.0 / 3.0, 1.0 / 3.0, -50, {63.844411924466481307, -70.114991422595242224}},
    };
    double worst = 0;
    for (const auto& f : f21) {
        const cplx v = specfun::gauss_2f1(f.a, f.b, f.c, f.z);
        worst = std::max(worst, std::abs(v - f.value) / std::abs(f.value));
    }
    struct R {
        double got, want;
    };
    const R reals[] = {
        {specfun::kummer_1f1(1, 2, 1), 1.7182818284590452354},
        {specfun::kummer_1f1(0.5, 1.5, -20), 0.1981663648299736541},
        {specfun::kummer_1f1(2.5, 1.5, 30), 224415966212013.70509},
        {specfun::kummer_1f1(-0.5, 0.5, -200), 25.066282746310005024},
        {specfun::upper_gamma_ratio(3, 2.5), 0.543813115883329518},
        {specfun::upper_gamma_ratio(2, 1), 0.73575888234288464319},
        {specfun::upper_gamma_ratio(5, 12), 0.0076003906810669954715},
        {specfun::reg_inc_beta(0.3, 2.5, 1.5), 0.088943723170665591581},
        {specfun::erf(1.0), 0.84270079294971486934},
        {specfun::erf(0.3), 0.32862675945912741619},
    };
    for (const auto& r : reals) worst = std::max(worst, std::abs(r.got - r.want) / std::abs(r.want));
    // 50-point grids; relative error with unit floor
    auto rel = [](auto got, auto want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); };
    for (const auto& o : kOracle2F1)
        worst = std::max(worst, rel(specfun::gauss_2f1(cplx(o.ar, o.ai), o.b, o.c, o.z), cplx(o.vr, o.vi)));
    for (const auto& o : kOracle1F1) worst = std::max(worst, rel(specfun::kummer_1f1(o.a, o.b, o.z), o.v));
    for (const auto& o : kOracleGamma) worst = std::max(worst, rel(specfun::upper_gamma_ratio(o.m, o.x), o.v));
    for (const auto& o : kOracleBeta) worst = std::max(worst, rel(specfun::reg_inc_beta(o.x, o.a, o.b), o.v));
    for (const auto& o : kOracleErf) worst = std::max(worst, rel(specfun::erf(o.x), o.v));
    c.info(fmt("special functions worst relative error %.2e", worst));
    c.require(worst <= 1e-10, fmt("special functions off by %.2e relative", worst));
}

CriterionResult c7(const AcceptanceOptions&) {
    Checks c;
    const NetworkConfig cfg;
    for (Variant v : {Variant::Hybrid, Variant::UWaveOnly, Variant::MmWaveBackhaul}) {
        for (double th : kThetas) {
            MomentEngine eng(cfg, LinkThresholds::from({th, th}), v);
            const double m0 = eng(0.0).value.real();
            c.require(std::abs(m0 - 1.0) <= 1e-8, fmt("%s theta=%g: M0=%.12f", to_string(v), th, m0));
            double prev = m0;
            for (double b = 0.25; b <= 4.0; b += 0.25) {
                const double m = eng(b).value.real();
                c.require(m <= prev, fmt("%s theta=%g: M_b rises at b=%g", to_string(v), th, b));
                prev = m;
            }
            const double m1 = eng(1.0).value.real(), m2 = eng(2.0).value.real();
            c.require(m1 * m1 <= m2 && m2 <= m1, fmt("%s theta=%g: M1=%.6f M2=%.6f out of order", to_string(v), th,
                                                     m1, m2));
            for (double t : {0.5, 1.0, 5.0, 20.0, 100.0}) {
                const double mag = std::abs(eng(cplx(0.0, t)).value);
                c.require(mag <= 1.0 + 1e-12, fmt("%s theta=%g: |M_jt|=%.15f at t=%g", to_string(v), th, mag, t));
            }
        }
    }
    c.info("moment identities checked for 3 variants x 3 thresholds");

    const auto xs = grid(0.05, 0.95, 19);
    double worst_rt = 0;
    for (auto [a, b] : {std::pair{2.0, 1}, std::pair{0.5, 3}, std::pair{3.7, 2}}) {
        const auto gp = gil_pelaez_ccdf(beta_moments(a, b), xs);
        for (std::size_t i = 0; i < xs.size(); ++i)
            worst_rt = std::max(worst_rt, std::abs(gp[i].value - (1.0 - specfun::reg_inc_beta(xs[i], a, b))));
    }
    c.info(fmt("Beta round trip worst %.2e", worst_rt));
    c.require(worst_rt <= 1e-4, fmt("Beta round trip off by %.2e", worst_rt));

    for (cplx b : {cplx(1, 0), cplx(2, 0), cplx(3, 0), cplx(0, 0.5), cplx(0, 1)}) {
        const auto d = moment_access(b, 1.0, cfg, EvalPath::DirectQuadrature);
        const auto s = moment_access(b, 1.0, cfg, EvalPath::Series);
        const double diff = std::abs(s.value - d.value);
        c.info(fmt("series vs quadrature at b=%g%+gj: %.2e", b.real(), b.imag(), diff));
        c.require(diff <= 1e-6, fmt("series vs quadrature at b=%g%+gj differ by %.2e", b.real(), b.imag(), diff));
    }
    special_function_checks(c);
    return {7, "", c.ok, c.log.str()};
}

CriterionResult c8(const AcceptanceOptions&) {
    Checks c;
    const auto xs = grid(0.1, 0.9, 9);
    std::vector<std::vector<double>> curves;
    const int ns[] = {10, 20, 40, 50};
    for (int n : ns) {
        NetworkConfig cfg;
        cfg.small.n_antenna_elements = n;
        curves.push_back(meta_rate(cfg, {1e9, 1e9, 0}, xs, MetaMethod::BetaApprox).ccdf);
        c.info(fmt("N=%d F(0.5)=%.5f", n, curves.back()[index_of(xs, 0.5)]));
    }
    for (std::size_t k = 1; k < curves.size(); ++k)
        for (std::size_t i = 0; i < xs.size(); ++i)
            c.require(curves[k][i] >= curves[k - 1][i],
                      fmt("x=%.1f: N=%d gives %.6f < N=%d %.6f", xs[i], ns[k], curves[k][i], ns[k - 1],
                          curves[k - 1][i]));
    return {8, "", c.ok, c.log.str()};
}

}  // namespace

std::vector<int> all_criteria() { return {1, 2, 3, 4, 5, 6, 7, 8}; }

std::string criterion_title(int id) {
    switch (id) {
        case 1: return "hybrid meta distribution at x=0.3 for theta in {10, 1, 0.1}";
        case 2: return "variance of the CSP peaks at -3 dB with M1 = 0.49";
        case 3: return "Rayleigh access: analytic M1 and variance match Monte Carlo";
        case 4: return "mean local delay 1.11 at -10 dB for lambda2 in 20..100";
        case 5: return "microwave-only meta distribution at x=0.3";
        case 6: return "association probabilities: sum, closed form, Monte Carlo";
        case 7: return "moment and special-function property suite";
        case 8: return "rate meta distribution nondecreasing in antenna count";
    }
    throw std::invalid_argument("no acceptance criterion " + std::to_string(id));
}

CriterionResult run_criterion(int id, const AcceptanceOptions& opt) {
    static const std::function<CriterionResult(const AcceptanceOptions&)> table[] = {c1, c2, c3, c4,
                                                                                      c5, c6, c7, c8};
    const std::string title = criterion_title(id);
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
        r = table[id - 1](opt);
    } catch (const std::exception& e) {
        r = {id, "", false, std::string("FAILED with exception: ") + e.what()};
    }
    r.id = id;
    r.title = title;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids, const AcceptanceOptions& opt) {
    std::vector<CriterionResult> out;
    for (int id : ids) out.push_back(run_criterion(id, opt));
    return out;
}

double sign_test_p(int k, int n) {
    if (n <= 0) return 1.0;
    auto pmf = [n](int i) {
        return std::exp(std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0) - n * std::log(2.0));
    };
    double lo = 0, hi = 0;
    for (int i = 0; i <= k; ++i) lo += pmf(i);
    for (int i = k; i <= n; ++i) hi += pmf(i);
    return std::min(1.0, 2.0 * std::min(lo, hi));
}

}  // namespace mmmeta::tools
