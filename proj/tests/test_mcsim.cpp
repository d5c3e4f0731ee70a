#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "doctest.h"
#include "mmmeta/association.hpp"
#include "mmmeta/mcsim.hpp"
#include "mmmeta/quadrature.hpp"

using namespace mmmeta;
using namespace mmmeta::mc;

namespace {
McOptions small_run(std::size_t n, std::uint64_t seed = 11) {
    McOptions o;
    o.n_realizations = n;
    o.seed = seed;
    return o;
}

McOptions no_far_field() {
    McOptions o;
    o.far_field_correction = false;
    return o;
}

Point at(double x, double y) {
    Point p;
    p.x = x;
    p.y = y;
    return p;
}

// Device served directly by MBS 0; every other MBS interferes.
Realization direct_fixture(const std::vector<Point>& mbs) {
    Realization r;
    r.radius = 1e5;
    r.mbs_points = mbs;
    r.serving = ServingKind::Direct;
    r.serving_mbs = 0;
    return r;
}

// 10 MBSs around the device, the first one serving. Frozen positions.
std::vector<Point> ten_point_fixture() {
    return {at(80, 20),    at(-150, 60), at(200, -90), at(-40, -260), at(310, 140),
            at(-330, -80), at(90, 420),  at(-500, 310), at(610, -20), at(-120, -700)};
}

bool same(const std::vector<CspSample>& a, const std::vector<CspSample>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].log_csp != b[i].log_csp || a[i].label != b[i].label) return false;
    return true;
}

double binomial_sigma(double p, std::size_t n) {
    const double q = std::clamp(p, 1.0 / n, 1.0 - 1.0 / n);
    return std::sqrt(q * (1 - q) / n);
}
}  // namespace

TEST_CASE("disc radius at the default network") {
    CHECK(default_radius(NetworkConfig{}) == doctest::Approx(5.0 / std::sqrt(2e-6)).epsilon(1e-12));
    NetworkConfig sparse;
    sparse.small.density_lambda2 = 1e-9;
    CHECK(default_radius(sparse) == doctest::Approx(5.0 / std::sqrt(2e-6)).epsilon(1e-12));
    CHECK(default_radius(sparse, Variant::UWaveOnly) == doctest::Approx(5.0 / std::sqrt(1e-9)).epsilon(1e-12));
}

TEST_CASE("determinism across runs and thread counts") {
    const NetworkConfig cfg;
    McOptions o = small_run(3000);
    o.threads = 1;
    const auto serial = run(cfg, ThetaPair{1.0, 1.0}, o);
    o.threads = 4;
    const auto parallel = run(cfg, ThetaPair{1.0, 1.0}, o);
    CHECK(same(serial, parallel));
    CHECK(same(serial, run(cfg, ThetaPair{1.0, 1.0}, o)));
    o.seed = 12;
    CHECK_FALSE(same(serial, run(cfg, ThetaPair{1.0, 1.0}, o)));

    const auto r1 = sample_realization(cfg, 5, 77), r2 = sample_realization(cfg, 5, 77);
    REQUIRE(r1.mbs_points.size() == r2.mbs_points.size());
    for (std::size_t i = 0; i < r1.mbs_points.size(); ++i) {
        CHECK(r1.mbs_points[i].x == r2.mbs_points[i].x);
        CHECK(r1.mbs_points[i].y == r2.mbs_points[i].y);
    }
    CHECK(r1.serving_mbs == r2.serving_mbs);
    CHECK(r1.serving_sbs == r2.serving_sbs);
}

TEST_CASE("sparse SBS tier leaves devices on the MBS") {
    NetworkConfig cfg;
    cfg.small.density_lambda2 = 1e-12;
    for (std::uint64_t i = 0; i < 50; ++i) CHECK(sample_realization(cfg, 3, i).serving == ServingKind::Direct);
}

TEST_CASE("direct CSP on small fixtures") {
    const NetworkConfig cfg;
    CHECK(csp_direct(direct_fixture({at(100, 0)}), 1.0, cfg, no_far_field()) == 1.0);
    CHECK(csp_direct(direct_fixture({at(100, 0), at(0, 100)}), 2.0, cfg, no_far_field()) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("backhaul CSP on small fixtures") {
    const NetworkConfig cfg;
    Realization r;
    r.radius = 1e5;
    r.serving = ServingKind::DualHop;
    r.sbs_points = {at(30, 40)};
    r.serving_sbs = 0;
    r.mbs_points = {at(130, 40)};
    r.serving_mbs = 0;
    CHECK(csp_backhaul(r, 1.0, cfg, no_far_field()) == 1.0);
    r.mbs_points.push_back(at(30, 140));
    CHECK(csp_backhaul(r, 0.5, cfg, no_far_field()) == doctest::Approx(1.0 / 1.5).epsilon(1e-14));
}

TEST_CASE("CSP products match fading draws on a 10-point fixture") {
    const auto pts = ten_point_fixture();
    std::vector<double> radii;
    for (std::size_t i = 1; i < pts.size(); ++i) radii.push_back(std::sqrt(pts[i].r2()));
    const double r0 = std::sqrt(pts[0].r2());
    const NetworkConfig cfg;
    const std::size_t n = 1000000;
    for (double th : {0.3, 1.0, 4.0}) {
        const double exact = csp_direct(direct_fixture(pts), th, cfg, no_far_field());
        const double drawn = brute_force_success(r0, radii, th, 4.0, n, 99);
        CAPTURE(th);
        CHECK(std::abs(exact - drawn) <= 3 * binomial_sigma(exact, n));
    }

    // same fixture seen from an SBS at (10, -20)
    Realization bh;
    bh.radius = 1e5;
    bh.serving = ServingKind::DualHop;
    bh.sbs_points = {at(10, -20)};
    bh.serving_sbs = 0;
    bh.mbs_points = pts;
    bh.serving_mbs = 0;
    std::vector<double> from_sbs;
    for (std::size_t i = 1; i < pts.size(); ++i) from_sbs.push_back(std::hypot(pts[i].x - 10, pts[i].y + 20));
    const double exact = csp_backhaul(bh, 1.0, cfg, no_far_field());
    const double drawn = brute_force_success(std::hypot(80 - 10, 20 + 20), from_sbs, 1.0, 4.0, n, 100);
    CHECK(std::abs(exact - drawn) <= 3 * binomial_sigma(exact, n));
}

TEST_CASE("access CSP is the gamma survival") {
    const NetworkConfig cfg;
    const double nu1 = access_link(cfg, derive(cfg), 1.0).nu;
    Realization r;
    r.serving = ServingKind::DualHop;
    r.sbs_points = {at(60, 80)};
    r.sbs_points[0].state = LinkState::Los;
    r.serving_sbs = 0;
    const double pl = 1e4;
    // m = 2: argument m nu pl = 1 gives (1 + 1) e^-1
    CHECK(csp_access(r, 0.5 / (pl * nu1), cfg) == doctest::Approx(2.0 / std::exp(1.0)).epsilon(1e-13));
    CHECK(csp_access(r, 0.5 / (pl * nu1), cfg) == doctest::Approx(0.735759).epsilon(1e-6));
    // m = 1: e^-nu
    r.sbs_points[0].state = LinkState::Nlos;
    const double pl_n = 1e8;
    CHECK(csp_access(r, 0.7 / (pl_n * nu1), cfg) == doctest::Approx(std::exp(-0.7)).epsilon(1e-13));
    r.sbs_points[0] = at(1e-6, 0);
    r.sbs_points[0].state = LinkState::Los;
    CHECK(csp_access(r, 1.0, cfg) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("far-field factor against quadrature") {
    const double lam = 2e-6, th = 1.0, r0 = 300.0, R = 3536.0;
    const double K = std::pow(th, 0.25) * r0;
    const auto tail = quad::integrate_to_infinity([](double s) { return s / (1 + std::pow(s, 4)); }, R / K, R / K);
    CHECK(far_field_log_factor(lam, th, r0, 4.0, R) ==
          doctest::Approx(-2 * kPi * lam * K * K * tail.value).epsilon(1e-8));
    CHECK(far_field_log_factor(lam, th, 1.0, 4.0, 0.5) < 0.0);
}

TEST_CASE("association frequencies match the analytic probabilities") {
    const NetworkConfig cfg;
    const auto s = run(cfg, ThetaPair{1.0, 1.0}, small_run(20000, 21));
    const auto f = association_frequencies(s);
    const auto p = assoc_probs(cfg);
    CHECK(f.n == 20000);
    CHECK(f.mbs + f.sbs_los + f.sbs_nlos == doctest::Approx(1.0));
    CHECK(std::abs(f.mbs - p.a1) <= 3 * binomial_sigma(p.a1, f.n));
    CHECK(std::abs(f.sbs_los - p.a2_los) <= 3 * binomial_sigma(p.a2_los, f.n));
    CHECK(std::abs(f.sbs_nlos - p.a2_nlos) <= 3 * binomial_sigma(p.a2_nlos, f.n));
}

TEST_CASE("empirical moments and curves") {
    const auto s = run(NetworkConfig{}, ThetaPair{1.0, 1.0}, small_run(20000, 31));
    CHECK(empirical_moment(s, 0.0).value == std::complex<double>(1.0, 0.0));
    std::vector<double> xs;
    for (int i = 0; i <= 4000; ++i) xs.push_back(i / 4000.0);
    const auto c = empirical_meta(s, xs);
    CHECK(c.ccdf.front() == 1.0);
    CHECK(c.ccdf.back() == 0.0);
    double area = 0;
    for (std::size_t i = 1; i < xs.size(); ++i) area += 0.5 * (c.ccdf[i] + c.ccdf[i - 1]) * (xs[i] - xs[i - 1]);
    const auto m1 = empirical_moment(s, 1.0);
    CHECK(std::abs(area - m1.value.real()) < 1e-3);
    CHECK(m1.std_error > 0);
    const auto v = empirical_variance(s);
    const auto m2 = empirical_moment(s, 2.0);
    CHECK(v.value.real() == doctest::Approx(m2.value.real() - m1.value.real() * m1.value.real()).epsilon(1e-9));

    std::vector<CspSample> zero(3);
    for (auto& z : zero) z.log_csp = -std::numeric_limits<double>::infinity();
    CHECK_THROWS(empirical_moment(zero, -1.0));
}

TEST_CASE("disc truncation") {
    McOptions o = small_run(20000, 41);
    const auto t = truncation_check(NetworkConfig{}, {1.0, 1.0, 1.0}, o);
    CHECK(t.within);
    CHECK(t.rel_change < o.truncation_tol);
}

TEST_CASE("Rayleigh access: empirical M1 matches the analytic moment") {
    NetworkConfig cfg;
    cfg.mmwave.m_los = cfg.mmwave.m_nlos = 1;
    for (double th : {0.1, 1.0, 10.0}) {
        const auto s = run(cfg, ThetaPair{th, th}, small_run(20000, 51));
        const auto e = empirical_moment(s, 1.0);
        MomentQuery q;
        q.theta_backhaul = q.theta_device = th;
        const double a = moment_total(q, cfg).value.real();
        CAPTURE(th);
        CHECK(std::abs(e.value.real() - a) <= 3 * e.std_error);
    }
}

TEST_CASE("Nakagami access: empirical M1 within the Alzer gap") {
    const NetworkConfig cfg;
    for (double th : {0.1, 1.0, 10.0}) {
        const auto e = empirical_moment(run(cfg, ThetaPair{th, th}, small_run(20000, 61)), 1.0);
        MomentQuery q;
        q.theta_backhaul = q.theta_device = th;
        CAPTURE(th);
        CHECK(std::abs(e.value.real() - moment_total(q, cfg).value.real()) <= std::max(3 * e.std_error, 0.03));
    }
}

TEST_CASE("microwave-only: empirical M1 at theta = 1") {
    McOptions o = small_run(100000, 71);
    o.variant = Variant::UWaveOnly;
    const NetworkConfig cfg;
    const auto e = empirical_moment(run(cfg, ThetaPair{1.0, 1.0}, o), 1.0);
    const double a = moment_total_uwave(1.0, {1.0, 1.0}, cfg).value.real();
    CHECK(std::abs(e.value.real() - a) <= 3 * e.std_error);
}

TEST_CASE("empirical mean local delay at -10 dB") {
    const auto e = empirical_moment(run(NetworkConfig{}, ThetaPair{0.1, 0.1}, small_run(100000, 81)), -1.0);
    CAPTURE(e.value.real());
    CAPTURE(e.std_error);
    // A heavy 1/CSP tail can make 3 sigma cover anything; require a usable estimate.
    CHECK(e.std_error < 0.01);
    CHECK(std::abs(e.value.real() - 1.11) <= 3 * e.std_error);
}
