#include <cmath>
#include <complex>
#include <variant>

#include "doctest.h"
#include "mmmeta/metadist.hpp"
#include "mmmeta/quadrature.hpp"
#include "mmmeta/specfun.hpp"

using namespace mmmeta;

namespace {
using cplx = std::complex<double>;

// E[X^{jt}] for X ~ Beta(a, n) with integer n.
MomentFn beta_moments(double a, int n) {
    return [=](double t) {
        cplx v = 1.0;
        for (int k = 0; k < n; ++k) v *= (a + k) / (a + cplx(0.0, t) + double(k));
        return v;
    };
}

double beta_sf(double a, double b, double x) { return 1.0 - specfun::reg_inc_beta(x, a, b); }
}  // namespace

TEST_CASE("Gil-Pelaez on a point mass") {
    const MomentFn atom = [](double t) { return std::exp(cplx(0.0, t * std::log(0.5))); };
    CHECK(gil_pelaez_ccdf(atom, 0.3).value == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(gil_pelaez_ccdf(atom, 0.7).value == doctest::Approx(0.0).epsilon(1e-3));
    CHECK(gil_pelaez_ccdf(atom, 0.5).value == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("Gil-Pelaez on Beta(2,1)") {
    for (double x : {0.25, 0.5, 0.75}) {
        const auto r = gil_pelaez_ccdf(beta_moments(2.0, 1), x);
        CHECK(r.value == doctest::Approx(1.0 - x * x).epsilon(1e-4));
        CHECK(r.converged);
    }
}

TEST_CASE("Gil-Pelaez round trip over a grid") {
    std::vector<double> xs;
    for (int i = 1; i < 40; ++i) xs.push_back(i / 40.0);
    for (auto [a, n] : {std::pair{0.5, 3}, std::pair{3.7, 2}, std::pair{1.0, 1}}) {
        const auto rs = gil_pelaez_ccdf(beta_moments(a, n), xs);
        double worst = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            worst = std::max(worst, std::abs(rs[i].value - beta_sf(a, n, xs[i])));
            CHECK(rs[i].raw >= -1e-3);
            CHECK(rs[i].raw <= 1 + 1e-3);
        }
        CAPTURE(a);
        CHECK(worst <= 1e-4);
    }
}

TEST_CASE("Gil-Pelaez endpoints") {
    CHECK(gil_pelaez_ccdf(beta_moments(2.0, 1), 0.0).value == 1.0);
    CHECK(gil_pelaez_ccdf(beta_moments(2.0, 1), 1.0).value == 0.0);
}

TEST_CASE("beta moment matching") {
    const auto f = std::get<BetaFit>(beta_fit(2.0 / 3.0, 0.5));
    CHECK(f.shape_a == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(f.shape_b == doctest::Approx(1.0).epsilon(1e-12));
    const auto u = std::get<BetaFit>(beta_fit(0.5, 1.0 / 3.0));
    CHECK(u.shape_a == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(u.shape_b == doctest::Approx(1.0).epsilon(1e-12));

    const auto deg = beta_fit(0.4, 0.16);
    REQUIRE(std::holds_alternative<PointMass>(deg));
    CHECK(std::get<PointMass>(deg).at == doctest::Approx(0.4));
    CHECK(beta_ccdf(deg, 0.3) == 1.0);
    CHECK(beta_ccdf(deg, 0.5) == 0.0);

    for (auto [m1, m2] : {std::pair{0.3, 0.1}, std::pair{0.9, 0.82}, std::pair{0.05, 0.004}}) {
        const auto b = std::get<BetaFit>(beta_fit(m1, m2));
        const double s = b.shape_a + b.shape_b;
        CHECK(b.shape_a / s == doctest::Approx(m1).epsilon(1e-12));
        CHECK(b.shape_a * (b.shape_a + 1) / (s * (s + 1)) == doctest::Approx(m2).epsilon(1e-9));
        // mean-CCDF identity
        const auto area = quad::integrate([&](double x) { return beta_ccdf(b, x); }, 0.0, 1.0);
        CHECK(area.value == doctest::Approx(m1).epsilon(1e-6));
    }
}

TEST_CASE("beta CCDF") {
    const BetaFit uni{1.0, 1.0}, tri{2.0, 1.0};
    CHECK(beta_ccdf(uni, 0.0) == 1.0);
    CHECK(beta_ccdf(uni, 1.0) == 0.0);
    CHECK(beta_ccdf(uni, 0.37) == doctest::Approx(0.63).epsilon(1e-14));
    CHECK(beta_ccdf(tri, 0.5) == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("hybrid meta distribution curves") {
    const NetworkConfig cfg;
    const std::vector<double> xs{0.05, 0.2, 0.3, 0.5, 0.7, 0.9, 0.95};
    const auto gp = meta_sir(cfg, {1.0, 1.0}, xs, MetaMethod::GilPelaez);
    const auto bt = meta_sir(cfg, {1.0, 1.0}, xs, MetaMethod::BetaApprox);
    REQUIRE(gp.ccdf.size() == xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        CHECK(gp.ccdf[i] >= 0.0);
        CHECK(gp.ccdf[i] <= 1.0);
        if (i > 0) CHECK(gp.ccdf[i] <= gp.ccdf[i - 1] + 1e-4);
        if (i > 0) CHECK(bt.ccdf[i] <= bt.ccdf[i - 1]);
    }
    CHECK(gp.max_abs_error < 1e-3);
}

TEST_CASE("rate meta distribution") {
    const NetworkConfig cfg;
    const std::vector<double> xs{0.1, 0.5, 0.9};
    for (double v : meta_rate(cfg, {0.0, 0.0, 0.0}, xs).ccdf) CHECK(v == doctest::Approx(1.0).epsilon(1e-8));

    const RateTargets r{1e9, 1e9, 0.0};
    const auto curve = meta_rate(cfg, r, xs, MetaMethod::BetaApprox);
    const double q1 = rate_moment(1.0, r, cfg).value.real(), q2 = rate_moment(2.0, r, cfg).value.real();
    const auto fit = std::get<BetaFit>(beta_fit(q1, q2));
    const double s = fit.shape_a + fit.shape_b;
    CHECK(fit.shape_a / s == doctest::Approx(q1).epsilon(1e-9));
    CHECK(fit.shape_a * (fit.shape_a + 1) / (s * (s + 1)) == doctest::Approx(q2).epsilon(1e-9));
    for (std::size_t i = 0; i < xs.size(); ++i) CHECK(curve.ccdf[i] == doctest::Approx(beta_ccdf(fit, xs[i])));

    NetworkConfig big = cfg;
    big.small.n_antenna_elements = 50;
    const auto wide = meta_rate(big, r, xs, MetaMethod::BetaApprox);
    for (std::size_t i = 0; i < xs.size(); ++i) CHECK(wide.ccdf[i] >= curve.ccdf[i]);
}
