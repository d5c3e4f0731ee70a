#include <cmath>
#include <random>

#include "doctest.h"
#include "mmmeta/association.hpp"
#include "mmmeta/errors.hpp"
#include "mmmeta/quadrature.hpp"
#include "oracles/model_oracles.inc"

using namespace mmmeta;

namespace {
// Scales the SBS gain ratio a_hat by `factor` through the SBS bias.
NetworkConfig with_gain_factor(double factor) {
    NetworkConfig c;
    c.small.bias_b2 *= factor;
    return c;
}
}  // namespace

TEST_CASE("LOS association density at 100 m") {
    CHECK(assoc_density_los(1e4, NetworkConfig{}) == doctest::Approx(kOracleLosDensity1e4).epsilon(1e-10));
    CHECK(assoc_density_los(1e4, NetworkConfig{}) == doctest::Approx(2.43207181455107e-05).epsilon(1e-10));
}

TEST_CASE("association densities: supports and limits") {
    const NetworkConfig c;
    CHECK_THROWS_AS(assoc_density_los(0.0, c), DomainError);
    CHECK_THROWS_AS(assoc_density_los(200.0 * 200.0 * 1.01, c), DomainError);
    CHECK_THROWS_AS(assoc_density_nlos(1e4, c), DomainError);
    CHECK(assoc_density_nlos(std::pow(200.0, 4) * 1.5, c) >= 0.0);

    NetworkConfig sparse;
    sparse.small.density_lambda2 = 1e-15;
    CHECK(assoc_density_los(1e4, sparse) < 1e-12);
    CHECK(assoc_density_nlos(std::pow(200.0, 4) * 2, sparse) < 1e-12);
}

TEST_CASE("association probabilities at the default network") {
    const auto p = assoc_probs(NetworkConfig{});
    CHECK(p.a1 + p.a2_los + p.a2_nlos == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(p.a1_direct + p.a2_los + p.a2_nlos - 1.0) < std::max(1e-9, 10 * p.abs_error));
    CHECK(p.a2_los + p.a2_nlos == doctest::Approx(kOracleSbsMass).epsilon(1e-8));
    CHECK(closed_form_a1(NetworkConfig{}) == doctest::Approx(p.a1_direct).epsilon(1e-6));
}

TEST_CASE("closed form agrees with quadrature on random networks") {
    std::mt19937_64 g(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        NetworkConfig c;
        c.macro.density_lambda1 = std::pow(10.0, -7 + 1.5 * u(g));
        c.small.density_lambda2 = std::pow(10.0, -6 + 2.0 * u(g));
        c.small.bias_b2 = std::pow(10.0, -1 + 3 * u(g));
        c.mmwave.los_ball_d = 20 + 300 * u(g);
        c.mmwave.p_los = u(g);
        c.mmwave.p_nlos = u(g);
        const auto p = assoc_probs(c);
        CHECK(std::abs(closed_form_a1(c) - p.a1_direct) < 1e-6);
        CHECK(std::abs(p.a1_direct + p.a2_los + p.a2_nlos - 1.0) < 1e-6);
    }
}

TEST_CASE("conditional association integrates back to a1") {
    const NetworkConfig c;
    const auto p = assoc_probs(c);
    const auto r = quad::integrate_to_infinity(
        [&](double l1) { return mbs_pathloss_density(l1, c) * (1.0 - cond_assoc_sbs(l1, c)); }, 0.0, 1e10);
    CHECK(std::abs(r.value - p.a1) < 1e-6);
}

TEST_CASE("conditional association limits") {
    NetworkConfig sparse;
    sparse.small.density_lambda2 = 1e-15;
    CHECK(cond_assoc_sbs(1e10, sparse) < 1e-9);
    CHECK(cond_assoc_sbs(1e10, with_gain_factor(1e12)) > 1 - 1e-9);
}

TEST_CASE("monotone in SBS density and LOS ball radius") {
    double prev = 0;
    for (double lam : {5e-6, 10e-6, 20e-6, 40e-6, 70e-6, 100e-6}) {
        NetworkConfig c;
        c.small.density_lambda2 = lam;
        const double v = assoc_probs(c).a2_los;
        CHECK(v >= prev);
        prev = v;
    }
    prev = 0;
    for (double d : {50.0, 100.0, 150.0, 200.0, 300.0}) {
        NetworkConfig c;
        c.mmwave.los_ball_d = d;
        const double v = assoc_probs(c).a2_los;
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("dense SBS tier takes every device over LOS") {
    // what is left goes to MBSs very close to the device, shrinking like 1/sqrt(lambda2)
    double prev_gap = 1.0;
    for (double lam : {1e-4, 1e-3, 1e-2}) {
        NetworkConfig c;
        c.small.density_lambda2 = lam;
        const double gap = 1.0 - assoc_probs(c).a2_los;
        CHECK(gap < 0.5 * prev_gap);
        prev_gap = gap;
    }
    CHECK(prev_gap < 2e-4);
}

TEST_CASE("no competing tier leaves the MBS") {
    NetworkConfig c;
    c.small.density_lambda2 = 1e-15;
    c.mmwave.p_nlos = 0.0;
    CHECK(closed_form_a1(c) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("large SBS gain limits") {
    const NetworkConfig c = with_gain_factor(1e9 / 0.0510204081633);
    const auto p = assoc_probs(c);
    const auto a = asymptotic_assoc(c);
    CHECK(std::abs(p.a2_los - a.a2_los) < 1e-4);
    CHECK(std::abs(p.a2_nlos - a.a2_nlos) < 1e-4);
    CHECK(a.a2_los == doctest::Approx(1 - std::exp(-kPi * 200.0 * 200.0 * 70e-6)).epsilon(1e-12));

    const NetworkConfig big = with_gain_factor(1e4);
    CHECK(closed_form_a1_large_bias(big) == doctest::Approx(closed_form_a1(big)).epsilon(1e-3));

    NetworkConfig sparse = c;
    sparse.small.density_lambda2 = 1e-12;
    CHECK(asymptotic_assoc(sparse).a2_nlos == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("closed forms need the default exponents") {
    NetworkConfig c;
    c.macro.ple_alpha1 = 3.5;
    CHECK_THROWS_AS(closed_form_a1(c), PreconditionError);
    CHECK_THROWS_AS(asymptotic_assoc(c), PreconditionError);
}
