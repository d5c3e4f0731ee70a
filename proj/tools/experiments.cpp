#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>

#include "mmmeta/association.hpp"
#include "mmmeta/config_io.hpp"
#include "mmmeta/mcsim.hpp"
#include "mmmeta/metadist.hpp"
#include "validation.hpp"

namespace mmmeta::tools {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
    return v;
}

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string short_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

bool is_config_key(const std::string& name) {
    try {
        (void)get_config_field(NetworkConfig{}, name);
        return true;
    } catch (const std::invalid_argument&) {
        return false;
    }
}

double binomial_se(double p, std::size_t n) { return std::sqrt(std::max(p * (1.0 - p), 0.0) / n); }

ResultRow row(double s, std::string curve, double analytic, double empirical = kNaN, double se = kNaN) {
    ResultRow r;
    r.sweep_value = s;
    r.curve = std::move(curve);
    r.analytic = analytic;
    r.empirical = empirical;
    r.std_error = se;
    r.abs_diff = (std::isnan(analytic) || std::isnan(empirical)) ? kNaN : std::abs(analytic - empirical);
    return r;
}

ResultRow failed(double s, std::string curve, const std::string& what) {
    ResultRow r = row(s, std::move(curve), kNaN);
    r.error = what;
    return r;
}

bool wants_analytic(const ExperimentSpec& s) { return s.mode != Mode::MonteCarlo; }
bool wants_mc(const ExperimentSpec& s) { return s.mode != Mode::Analytic; }

mc::McOptions mc_options(const ExperimentSpec& s) {
    mc::McOptions o;
    o.n_realizations = s.n_realizations;
    o.seed = s.seed;
    o.variant = s.variant;
    o.threads = s.threads;
    return o;
}

ThetaPair both(double theta_db) {
    const double t = db_to_linear(theta_db);
    return {t, t};
}

void note_run(ResultTable& t, const mc::McRun& run, const std::string& where) {
    if (!run.warning.empty()) t.notes.push_back(where + ": " + run.warning);
    for (std::size_t k = 0; k < run.backhaul_access_correlation.size(); ++k) {
        const double c = run.backhaul_access_correlation[k];
        if (!std::isnan(c))
            t.notes.push_back(where + ": backhaul/access CSP correlation " + short_num(c));
    }
}

// Config for one point of a config-key sweep.
NetworkConfig at_point(const NetworkConfig& base, const Sweep& sw, double v) {
    NetworkConfig c = base;
    if (is_config_key(sw.name)) set_config_field(c, sw.name, v);
    return c;
}

ResultTable run_assoc(const ExperimentSpec& s, const NetworkConfig& cfg) {
    ResultTable t;
    t.value_name = "association probability";
    for (double v : s.sweep.grid) {
        try {
            const NetworkConfig c = at_point(cfg, s.sweep, v);
            double a[3] = {kNaN, kNaN, kNaN}, e[3] = {kNaN, kNaN, kNaN}, se[3] = {kNaN, kNaN, kNaN};
            if (wants_analytic(s)) {
                const AssocProbabilities p = assoc_probs(c);
                a[0] = p.a1;
                a[1] = p.a2_los;
                a[2] = p.a2_nlos;
            }
            if (wants_mc(s)) {
                mc::McOptions o = mc_options(s);
                const auto run = mc::run(c, {LinkThresholds{}}, o);
                note_run(t, run, s.sweep.name + "=" + short_num(v));
                const auto f = mc::association_frequencies(run.samples[0]);
                e[0] = f.mbs;
                e[1] = f.sbs_los;
                e[2] = f.sbs_nlos;
                for (int i = 0; i < 3; ++i) se[i] = binomial_se(e[i], f.n);
            }
            const char* names[3] = {"a1", "a2_los", "a2_nlos"};
            for (int i = 0; i < 3; ++i) t.rows.push_back(row(v, names[i], a[i], e[i], se[i]));
        } catch (const std::exception& ex) {
            for (const char* n : {"a1", "a2_los", "a2_nlos"}) t.rows.push_back(failed(v, n, ex.what()));
        }
    }
    return t;
}

std::vector<std::pair<std::string, MetaMethod>> methods(AnalyticMethod m) {
    switch (m) {
        case AnalyticMethod::GilPelaez: return {{"gp", MetaMethod::GilPelaez}};
        case AnalyticMethod::Beta: return {{"beta", MetaMethod::BetaApprox}};
        case AnalyticMethod::Both: break;
    }
    return {{"gp", MetaMethod::GilPelaez}, {"beta", MetaMethod::BetaApprox}};
}

// Analytic and empirical CCDF curves sharing one x grid.
void meta_rows(ResultTable& t, const ExperimentSpec& s, const std::string& prefix,
               const std::function<MetaCurve(MetaMethod)>& analytic,
               const std::function<mc::McRun()>& simulate) {
    const auto& xs = s.sweep.grid;
    std::vector<double> emp(xs.size(), kNaN), se(xs.size(), kNaN);
    if (wants_mc(s)) {
        try {
            const auto run = simulate();
            note_run(t, run, prefix);
            const MetaCurve e = mc::empirical_meta(run.samples[0], xs);
            for (std::size_t i = 0; i < xs.size(); ++i) {
                emp[i] = e.ccdf[i];
                se[i] = binomial_se(e.ccdf[i], run.samples[0].size());
            }
        } catch (const std::exception& ex) {
            for (double x : xs) t.rows.push_back(failed(x, prefix + "/mc", ex.what()));
            if (!wants_analytic(s)) return;
        }
    }
    if (!wants_analytic(s)) {
        for (std::size_t i = 0; i < xs.size(); ++i) t.rows.push_back(row(xs[i], prefix + "/mc", kNaN, emp[i], se[i]));
        return;
    }
    for (const auto& [tag, m] : methods(s.method)) {
        const std::string name = prefix + "/" + tag;
        try {
            const MetaCurve c = analytic(m);
            for (std::size_t i = 0; i < xs.size(); ++i) t.rows.push_back(row(xs[i], name, c.ccdf[i], emp[i], se[i]));
        } catch (const std::exception& ex) {
            for (double x : xs) t.rows.push_back(failed(x, name, ex.what()));
        }
    }
}

ResultTable run_meta(const ExperimentSpec& s, const NetworkConfig& cfg) {
    ResultTable t;
    t.value_name = "fraction of links with CSP above x";
    for (double th : s.theta_db) {
        const ThetaPair tp = both(th);
        meta_rows(
            t, s, "theta_db=" + short_num(th),
            [&](MetaMethod m) { return meta_sir(cfg, tp, s.sweep.grid, m, s.variant); },
            [&] { return mc::run(cfg, {LinkThresholds::from(tp)}, mc_options(s)); });
    }
    return t;
}

ResultTable run_rate(const ExperimentSpec& s, const NetworkConfig& cfg) {
    ResultTable t;
    t.value_name = "fraction of links meeting the rate targets with probability above x";
    const RateTargets rt{cfg.thresholds.rate_t1, cfg.thresholds.rate_t2, cfg.thresholds.rate_tbh};
    for (double n : s.antennas) {
        NetworkConfig c = cfg;
        c.small.n_antenna_elements = static_cast<int>(n);
        meta_rows(
            t, s, "n=" + short_num(n), [&](MetaMethod m) { return meta_rate(c, rt, s.sweep.grid, m); },
            [&] {
                mc::McOptions o = mc_options(s);
                o.variant = Variant::Hybrid;
                return mc::run(c, {rate_thresholds(rt, c)}, o);
            });
    }
    return t;
}

// Per sweep point: config and thresholds.
struct Point {
    NetworkConfig cfg;
    ThetaPair theta;
};

Point point(const ExperimentSpec& s, const NetworkConfig& cfg, double v) {
    if (s.sweep.name == "theta_db") return {cfg, both(v)};
    return {at_point(cfg, s.sweep, v), both(s.theta_db.front())};
}

ResultTable run_coverage(const ExperimentSpec& s, const NetworkConfig& cfg) {
    ResultTable t;
    t.value_name = "moment of the CSP";
    for (double v : s.sweep.grid) {
        try {
            const Point p = point(s, cfg, v);
            double a1 = kNaN, var = kNaN;
            mc::EmpiricalValue e1{kNaN, kNaN}, ev{kNaN, kNaN};
            if (wants_analytic(s)) {
                MomentEngine eng(p.cfg, LinkThresholds::from(p.theta), s.variant);
                a1 = eng(1.0).value.real();
                var = eng(2.0).value.real() - a1 * a1;
            }
            if (wants_mc(s)) {
                const auto run = mc::run(p.cfg, {LinkThresholds::from(p.theta)}, mc_options(s));
                note_run(t, run, s.sweep.name + "=" + short_num(v));
                e1 = mc::empirical_moment(run.samples[0], 1.0);
                ev = mc::empirical_variance(run.samples[0]);
            }
            t.rows.push_back(row(v, "m1", a1, e1.value.real(), e1.std_error));
            t.rows.push_back(row(v, "variance", var, ev.value.real(), ev.std_error));
        } catch (const std::exception& ex) {
            t.rows.push_back(failed(v, "m1", ex.what()));
            t.rows.push_back(failed(v, "variance", ex.what()));
        }
    }
    return t;
}

// Samples with csp replaced by its reciprocal, for the spread of the delay.
std::vector<mc::CspSample> reciprocal(const std::vector<mc::CspSample>& v) {
    std::vector<mc::CspSample> out = v;
    for (auto& s : out) {
        s.log_csp = -s.log_csp;
        s.csp = std::exp(s.log_csp);
    }
    return out;
}

ResultTable run_delay(const ExperimentSpec& s, const NetworkConfig& cfg) {
    ResultTable t;
    t.value_name = "mean local delay (slots)";
    for (double v : s.sweep.grid) {
        ResultRow md, jit;
        try {
            const Point p = point(s, cfg, v);
            double a = kNaN, aj = kNaN;
            std::string why;
            if (wants_analytic(s)) {
                const MomentResult m = mean_local_delay(p.theta, p.cfg, s.variant);
                const JitterResult j = network_jitter(p.theta, p.cfg, s.variant);
                a = m.diverged ? std::numeric_limits<double>::infinity() : m.value.real();
                aj = j.diverged ? std::numeric_limits<double>::infinity() : j.value;
                if (m.diverged) why = "diverged: " + m.reason;
            }
            mc::EmpiricalValue e{kNaN, kNaN}, ej{kNaN, kNaN};
            if (wants_mc(s)) {
                const auto run = mc::run(p.cfg, {LinkThresholds::from(p.theta)}, mc_options(s));
                note_run(t, run, s.sweep.name + "=" + short_num(v));
                e = mc::empirical_moment(run.samples[0], -1.0);
                ej = mc::empirical_variance(reciprocal(run.samples[0]));
            }
            md = row(v, "m_minus1", a, e.value.real(), e.std_error);
            jit = row(v, "jitter", aj, ej.value.real(), ej.std_error);
            md.error = jit.error = why;
        } catch (const std::exception& ex) {
            md = failed(v, "m_minus1", ex.what());
            jit = failed(v, "jitter", ex.what());
        }
        t.rows.push_back(md);
        t.rows.push_back(jit);
    }
    return t;
}

ResultTable run_validate(const ExperimentSpec& s) {
    ResultTable t;
    t.value_name = "criterion passed (1) or failed (0)";
    AcceptanceOptions o;
    o.n_realizations = s.n_realizations;
    o.seed = s.seed;
    o.threads = s.threads;
    for (const CriterionResult& c : run_acceptance(all_criteria(), o)) {
        ResultRow r = row(c.id, "criterion", c.pass ? 1.0 : 0.0);
        r.error = c.pass ? "" : c.detail;
        t.rows.push_back(r);
        t.notes.push_back("criterion " + std::to_string(c.id) + ": " + c.detail);
    }
    return t;
}

}  // namespace

const char* to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::Assoc: return "assoc";
        case ExperimentKind::Meta: return "meta";
        case ExperimentKind::Coverage: return "coverage";
        case ExperimentKind::Delay: return "delay";
        case ExperimentKind::Rate: return "rate";
        case ExperimentKind::Validate: return "validate";
    }
    return "?";
}

const char* to_string(Mode m) {
    switch (m) {
        case Mode::Analytic: return "analytic";
        case Mode::MonteCarlo: return "mc";
        case Mode::Both: return "both";
    }
    return "?";
}

ExperimentKind kind_from_string(const std::string& s) {
    for (auto k : {ExperimentKind::Assoc, ExperimentKind::Meta, ExperimentKind::Coverage, ExperimentKind::Delay,
                   ExperimentKind::Rate, ExperimentKind::Validate})
        if (s == to_string(k)) return k;
    throw SpecError("kind: unknown experiment " + s);
}

Mode mode_from_string(const std::string& s) {
    for (auto m : {Mode::Analytic, Mode::MonteCarlo, Mode::Both})
        if (s == to_string(m)) return m;
    throw SpecError("mode: expected analytic, mc or both, got " + s);
}

AnalyticMethod method_from_string(const std::string& s) {
    if (s == "gp") return AnalyticMethod::GilPelaez;
    if (s == "beta") return AnalyticMethod::Beta;
    if (s == "both") return AnalyticMethod::Both;
    throw SpecError("method: expected gp, beta or both, got " + s);
}

std::vector<double> parse_grid(const std::string& text) {
    auto number = [&](const std::string& tok) {
        std::size_t used = 0;
        double v;
        try {
            v = std::stod(tok, &used);
        } catch (const std::exception&) {
            throw SpecError("grid: cannot parse '" + tok + "' in '" + text + "'");
        }
        if (used != tok.size()) throw SpecError("grid: cannot parse '" + tok + "' in '" + text + "'");
        return v;
    };
    if (text.find_first_not_of(" \t") == std::string::npos) throw SpecError("grid: empty");
    std::vector<std::string> parts;
    const char sep = text.find(':') != std::string::npos ? ':' : ',';
    std::stringstream ss(text);
    for (std::string tok; std::getline(ss, tok, sep);) parts.push_back(tok);
    if (sep == ':') {
        if (parts.size() != 3) throw SpecError("grid: expected START:STOP:STEPS, got '" + text + "'");
        const double steps = number(parts[2]);
        if (steps < 1 || steps != std::floor(steps) || steps > 1e6)
            throw SpecError("grid: STEPS must be a positive integer in '" + text + "'");
        return linspace(number(parts[0]), number(parts[1]), static_cast<int>(steps));
    }
    std::vector<double> v;
    for (const auto& p : parts) v.push_back(number(p));
    return v;
}

Sweep parse_sweep(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0) throw SpecError("sweep: expected NAME=START:STOP:STEPS, got '" + text + "'");
    return Sweep{text.substr(0, eq), parse_grid(text.substr(eq + 1))};
}

ExperimentSpec with_defaults(ExperimentSpec s) {
    auto fill = [&](const char* name, std::vector<double> grid) {
        if (s.sweep.name.empty()) s.sweep.name = name;
        if (s.sweep.grid.empty()) s.sweep.grid = std::move(grid);
    };
    switch (s.kind) {
        case ExperimentKind::Assoc: fill("small.density_lambda2", linspace(1, 100, 12)); break;
        case ExperimentKind::Meta:
            fill("x", s.x_grid.empty() ? linspace(0.05, 0.95, 19) : s.x_grid);
            if (s.theta_db.empty()) s.theta_db = {10.0, 0.0, -10.0};
            break;
        case ExperimentKind::Coverage:
            fill("theta_db", linspace(-15, 15, 31));
            if (s.theta_db.empty()) s.theta_db = {0.0};
            break;
        case ExperimentKind::Delay:
            fill("small.density_lambda2", linspace(20, 100, 9));
            if (s.theta_db.empty()) s.theta_db = {-10.0};
            break;
        case ExperimentKind::Rate: fill("x", s.x_grid.empty() ? linspace(0.1, 0.9, 9) : s.x_grid); break;
        case ExperimentKind::Validate: break;
    }
    return s;
}

void validate_spec(const ExperimentSpec& s) {
    if (s.mode != Mode::Analytic && s.n_realizations < 100)
        throw SpecError("realizations: Monte Carlo needs at least 100, got " + std::to_string(s.n_realizations));
    if (s.kind == ExperimentKind::Validate) return;
    const Sweep& sw = s.sweep;
    if (sw.grid.empty()) throw SpecError("sweep.grid: empty");
    for (double v : sw.grid)
        if (!std::isfinite(v)) throw SpecError("sweep.grid: values must be finite");
    for (std::size_t i = 1; i < sw.grid.size(); ++i)
        if (!(sw.grid[i] > sw.grid[i - 1])) throw SpecError("sweep.grid: must be strictly increasing");
    const bool x_kind = s.kind == ExperimentKind::Meta || s.kind == ExperimentKind::Rate;
    if (x_kind) {
        if (sw.name != "x") throw SpecError("sweep.name: " + std::string(to_string(s.kind)) + " sweeps over x only");
        if (sw.grid.front() < 0 || sw.grid.back() > 1) throw SpecError("sweep.grid: x must lie in [0, 1]");
    } else if (sw.name == "theta_db") {
        if (s.kind == ExperimentKind::Assoc) throw SpecError("sweep.name: association does not depend on theta_db");
    } else if (!is_config_key(sw.name)) {
        throw SpecError("sweep.name: unknown parameter " + sw.name);
    }
    if ((s.kind == ExperimentKind::Meta || s.kind == ExperimentKind::Coverage || s.kind == ExperimentKind::Delay) &&
        s.theta_db.empty())
        throw SpecError("theta_db: empty");
    if (s.kind == ExperimentKind::Rate) {
        if (s.antennas.empty()) throw SpecError("antennas: empty");
        for (double n : s.antennas)
            if (n < 1 || n != std::floor(n)) throw SpecError("antennas: expected positive integers");
        if (s.variant != Variant::Hybrid) throw SpecError("variant: rate curves exist for the hybrid network only");
    }
}

std::vector<std::string> ResultTable::curves() const {
    std::vector<std::string> out;
    for (const auto& r : rows)
        if (std::find(out.begin(), out.end(), r.curve) == out.end()) out.push_back(r.curve);
    return out;
}

const std::vector<std::string>& csv_columns() {
    static const std::vector<std::string> cols = {"sweep_value", "curve",    "analytic", "empirical",
                                                  "std_error",   "abs_diff", "error"};
    return cols;
}

namespace {
std::string csv_impl(const ResultTable& t, const std::string* only) {
    std::string out;
    for (std::size_t i = 0; i < csv_columns().size(); ++i) out += (i ? "," : "") + csv_columns()[i];
    out += "\n";
    for (const auto& r : t.rows) {
        if (only && r.curve != *only) continue;
        out += num(r.sweep_value) + "," + csv_field(r.curve) + "," + num(r.analytic) + "," + num(r.empirical) + "," +
               num(r.std_error) + "," + num(r.abs_diff) + "," + csv_field(r.error) + "\n";
    }
    return out;
}
}  // namespace

std::string to_csv(const ResultTable& t) { return csv_impl(t, nullptr); }
std::string to_csv(const ResultTable& t, const std::string& curve) { return csv_impl(t, &curve); }

ResultTable run_experiment(const ExperimentSpec& spec_in, const NetworkConfig& cfg) {
    const ExperimentSpec s = with_defaults(spec_in);
    validate_spec(s);
    require_valid(cfg);
    ResultTable t;
    switch (s.kind) {
        case ExperimentKind::Assoc: t = run_assoc(s, cfg); break;
        case ExperimentKind::Meta: t = run_meta(s, cfg); break;
        case ExperimentKind::Coverage: t = run_coverage(s, cfg); break;
        case ExperimentKind::Delay: t = run_delay(s, cfg); break;
        case ExperimentKind::Rate: t = run_rate(s, cfg); break;
        case ExperimentKind::Validate: t = run_validate(s); break;
    }
    t.kind = to_string(s.kind);
    // Files carry linear SI values; human units exist only on the way in.
    t.sweep_name = s.kind == ExperimentKind::Validate ? "criterion" : s.sweep.name;
    t.sweep_unit = "linear";
    if (t.sweep_name == "theta_db") {
        t.sweep_name = "theta";
        for (auto& r : t.rows) r.sweep_value = db_to_linear(r.sweep_value);
    } else if (is_config_key(t.sweep_name)) {
        t.sweep_unit = config_si_unit(t.sweep_name);
        for (auto& r : t.rows) r.sweep_value = config_value_to_si(t.sweep_name, r.sweep_value);
    } else if (t.sweep_name == "criterion") {
        t.sweep_unit = "id";
    }
    t.value_unit = s.kind == ExperimentKind::Delay ? "slots" : "linear";
    return t;
}

}  // namespace mmmeta::tools
