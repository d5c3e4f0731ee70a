#include <cmath>
#include <complex>

#include "doctest.h"
#include "mmmeta/association.hpp"
#include "mmmeta/moments.hpp"
#include "mmmeta/specfun.hpp"
#include "oracles/model_oracles.inc"

using namespace mmmeta;

namespace {
double rel(cplx got, double want) { return std::abs(got - want) / std::abs(want); }

NetworkConfig single_macro_tier() {
    NetworkConfig c;
    c.small.density_lambda2 = 1e-300;
    return c;
}
}  // namespace

TEST_CASE("backhaul moment") {
    CHECK(std::abs(moment_backhaul(0.0, 1.0, 4.0).value - 1.0) < 1e-15);
    CHECK(moment_backhaul(1.0, 1.0, 4.0).value.real() == doctest::Approx(1.0 / (1.0 + kPi / 4)).epsilon(1e-13));
    CHECK(moment_backhaul(1.0, 1.0, 4.0).value.real() == doctest::Approx(0.560099).epsilon(1e-6));
    CHECK(moment_backhaul(-1.0, 0.1, 4.0).value.real() == doctest::Approx(1.0 / 0.9).epsilon(1e-13));
    // closed form of M_{-1} for general alpha
    CHECK(moment_backhaul(-1.0, 0.2, 3.0).value.real() ==
          doctest::Approx(1.0 / (1.0 - 2 * 0.2 / (3.0 - 2.0))).epsilon(1e-12));
}

TEST_CASE("backhaul M_{-1} pole") {
    const auto at_pole = moment_backhaul(-1.0, 1.0, 4.0);
    CHECK(at_pole.diverged);
    CHECK(moment_backhaul(-1.0, 1.5, 4.0).diverged);
    CHECK_FALSE(moment_backhaul(-1.0, 0.99, 4.0).diverged);
}

TEST_CASE("backhaul moment ignores macro density and power") {
    NetworkConfig a, b;
    b.macro.density_lambda1 *= 17;
    b.macro.power_p1 /= 9;
    MomentEngine ea(a, {0.7, 1.0, 1.0}), eb(b, {0.7, 1.0, 1.0});
    CHECK(std::abs(ea(1.5).components.m_backhaul - eb(1.5).components.m_backhaul) < 1e-15);
}

TEST_CASE("components against an independent 40-digit evaluation") {
    const NetworkConfig cfg;
    for (const auto& o : kOracleMoments) {
        CAPTURE(o.theta);
        CAPTURE(o.b);
        CHECK(rel(moment_backhaul(o.b, o.theta, 4.0).value, o.backhaul) < 1e-12);
        CHECK(rel(moment_access(o.b, o.theta, cfg).value, o.access) < 1e-8);
        CHECK(rel(moment_direct(o.b, o.theta, cfg).value, o.direct) < 1e-7);
        MomentQuery q;
        q.order_b = o.b;
        q.theta_backhaul = q.theta_device = o.theta;
        CHECK(rel(moment_total(q, cfg).value, o.total) < 1e-8);
    }
}

TEST_CASE("zero-order moments are association masses") {
    const NetworkConfig cfg;
    const auto p = assoc_probs(cfg);
    CHECK(moment_access(0.0, 1.0, cfg).value.real() == doctest::Approx(p.a2_los + p.a2_nlos).epsilon(1e-9));
    CHECK(moment_direct(0.0, 1.0, cfg).value.real() == doctest::Approx(p.a1).epsilon(1e-6));
    CHECK(moment_access(1.0, 1e-12, cfg).value.real() == doctest::Approx(p.a2_los + p.a2_nlos).epsilon(1e-9));
    CHECK(moment_direct(1.0, 1e-12, cfg).value.real() == doctest::Approx(p.a1).epsilon(1e-6));
    MomentQuery q;
    q.order_b = 1.0;
    q.theta_backhaul = q.theta_device = 1e-12;
    CHECK(moment_total(q, cfg).value.real() == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("single macro tier reduces to the interference-limited form") {
    const NetworkConfig cfg = single_macro_tier();
    for (double th : {0.1, 1.0, 10.0}) {
        const double want = 1.0 / specfun::gauss_2f1(1.0, -0.5, 0.5, -th);
        CHECK(moment_direct(1.0, th, cfg).value.real() == doctest::Approx(want).epsilon(1e-8));
    }
}

TEST_CASE("series and quadrature paths agree") {
    const NetworkConfig cfg;
    for (cplx b : {cplx(1, 0), cplx(2, 0), cplx(3, 0), cplx(0, 0.5), cplx(0, 1)}) {
        CAPTURE(b);
        const auto d = moment_access(b, 1.0, cfg, EvalPath::DirectQuadrature);
        const auto s = moment_access(b, 1.0, cfg, EvalPath::Series);
        CHECK(std::abs(d.value - s.value) < 1e-6);
    }
}

TEST_CASE("moment order properties at the default network") {
    const NetworkConfig cfg;
    for (Variant v : {Variant::Hybrid, Variant::UWaveOnly, Variant::MmWaveBackhaul}) {
        for (double th : {0.1, 1.0, 10.0}) {
            CAPTURE(to_string(v));
            CAPTURE(th);
            MomentEngine eng(cfg, LinkThresholds::from({th, th}), v);
            CHECK(eng(0.0).value.real() == doctest::Approx(1.0).epsilon(1e-8));
            const double m1 = eng(1.0).value.real(), m2 = eng(2.0).value.real();
            CHECK(m1 <= 1.0);
            CHECK(m2 <= m1);
            CHECK(m1 * m1 <= m2);
            for (double t : {0.5, 1.0, 5.0, 20.0}) {
                const cplx p = eng(cplx(0, t)).value, n = eng(cplx(0, -t)).value;
                CHECK(std::abs(p) <= 1.0 + 1e-12);
                CHECK(std::abs(p - std::conj(n)) < 1e-10);
            }
        }
    }
}

TEST_CASE("imaginary moment at t = 0") {
    CHECK(std::abs(imaginary_moment(0.0, {1.0, 1.0}, NetworkConfig{}) - 1.0) < 1e-8);
}

TEST_CASE("local delay") {
    const NetworkConfig cfg;
    CHECK(mean_local_delay({1.0, 0.1}, cfg).diverged);
    const auto r = mean_local_delay({0.1, 0.1}, cfg);
    CHECK(std::abs(r.components.m_backhaul - 1.0 / 0.9) < 1e-12);
    // the access link alone carries a divergence when NLOS SBSs can serve
    CHECK(r.diverged);
    CHECK_FALSE(r.reason.empty());

    NetworkConfig los_only;
    los_only.mmwave.p_nlos = 0.0;
    const auto l = mean_local_delay({1e-9, 1e-9}, los_only);
    CHECK_FALSE(l.diverged);
    CHECK(l.value.real() == doctest::Approx(1.0).epsilon(1e-6));
    const auto j = network_jitter({1e-9, 1e-9}, los_only);
    CHECK_FALSE(j.diverged);
    CHECK(std::abs(j.value) < 1e-6);
}

TEST_CASE("rate thresholds and moments") {
    const NetworkConfig cfg;
    const auto th = rate_thresholds({0.0, 1e9, 0.0}, cfg);
    CHECK(th.access == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(th.backhaul == 0.0);
    CHECK(th.direct == 0.0);
    CHECK(std::abs(rate_moment(1.0, {0.0, 0.0, 0.0}, cfg).value - 1.0) < 1e-8);
    const auto t1 = rate_thresholds({1e8, 0.0, 1e8}, cfg);
    CHECK(t1.direct == doctest::Approx(std::exp2(1e8 / (0.5 * 100e6)) - 1.0));
    CHECK(t1.backhaul == doctest::Approx(std::exp2(1e8 / (0.5 * 100e6)) - 1.0));
    NetworkConfig bad = cfg;
    bad.uwave.access_fraction_eta = 1.0;
    CHECK_THROWS(rate_thresholds({1e8, 0.0, 0.0}, bad));
}

TEST_CASE("microwave-only tier moments") {
    NetworkConfig c;
    // no competitor: same form as the backhaul
    NetworkConfig alone = c;
    alone.macro.density_lambda1 = 1e-300;
    CHECK(moment_tier_uwave(1.0, 1.0, 2, alone).value.real() == doctest::Approx(0.560099).epsilon(1e-6));
    CHECK(moment_tier_uwave(1.0, 1.0, 2, alone).value.real() ==
          doctest::Approx(moment_backhaul(1.0, 1.0, 4.0).value.real()).epsilon(1e-12));
    // b = 0 is the tier-2 association probability (alpha = 4 on both tiers)
    CHECK(moment_tier_uwave(0.0, 1.0, 2, c).value.real() == doctest::Approx(kOracleUwaveTier2Assoc).epsilon(1e-10));
    const double a1 = moment_tier_uwave(0.0, 1.0, 1, c).value.real();
    CHECK(a1 + kOracleUwaveTier2Assoc == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(moment_total_uwave(1.0, {1e-12, 1e-12}, c).value - 1.0) < 1e-8);
}

TEST_CASE("microwave-only local delay grows with SBS density") {
    double prev = 0;
    for (double lam : {20e-6, 50e-6, 100e-6}) {
        NetworkConfig c;
        c.small.density_lambda2 = lam;
        const auto r = moment_total_uwave(-1.0, {0.1, 0.1}, c);
        REQUIRE_FALSE(r.diverged);
        CHECK(r.value.real() > prev);
        prev = r.value.real();
    }
}
