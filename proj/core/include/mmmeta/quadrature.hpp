#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <type_traits>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "mmmeta/errors.hpp"

namespace mmmeta::quad {

struct Options {
    double abs_tol = 1e-13;
    double rel_tol = 1e-10;
    int max_intervals = 2000;
    /// Throw QuadratureFailure instead of returning an unconverged result.
    bool throw_on_failure = true;
};

template <class T>
struct Result {
    T value{};
    double abs_error = 0;
    int evaluations = 0;
    bool converged = true;
};

namespace detail {

template <class T, class F>
std::pair<T, double> gk21(F& f, double a, double b) {
    using boost::math::quadrature::gauss;
    using boost::math::quadrature::gauss_kronrod;
    const auto& x = gauss_kronrod<double, 21>::abscissa();
    const auto& wk = gauss_kronrod<double, 21>::weights();
    const auto& wg = gauss<double, 10>::weights();
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    T fc = f(c);
    T kron = fc * wk[0];
    T gsum{};
    for (std::size_t i = 1; i < x.size(); ++i) {
        const T pair = f(c - h * x[i]) + f(c + h * x[i]);
        kron += pair * wk[i];
        if (i % 2 == 1) gsum += pair * wg[i / 2];
    }
    kron *= h;
    gsum *= h;
    double err = std::abs(kron - gsum);
    // Same error scaling as QUADPACK qk21: the raw difference is pessimistic.
    err = err > 0 ? std::min(err, std::pow(200.0 * err / std::max(std::abs(kron), 1e-300), 1.5) *
                                       std::max(std::abs(kron), 1e-300))
                  : 0.0;
    if (!std::isfinite(std::abs(kron))) err = std::numeric_limits<double>::infinity();
    return {kron, std::max(err, 50.0 * std::numeric_limits<double>::epsilon() * std::abs(kron))};
}

template <class T>
struct Interval {
    double a, b;
    T value;
    double error;
    bool operator<(const Interval& o) const { return error < o.error; }
};

}  // namespace detail

/// Globally adaptive 21-point Gauss-Kronrod on [a, b]. T may be real or complex.
template <class F>
auto integrate(F&& f, double a, double b, const Options& opt = {})
    -> Result<std::decay_t<decltype(f(a))>> {
    using T = std::decay_t<decltype(f(a))>;
    Result<T> out;
    if (a == b) return out;
    std::vector<detail::Interval<T>> heap;
    auto [v0, e0] = detail::gk21<T>(f, a, b);
    out.evaluations = 21;
    heap.push_back({a, b, v0, e0});
    T total = v0;
    double err = e0;
    while (err > std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) {
        if (static_cast<int>(heap.size()) >= opt.max_intervals || !std::isfinite(err)) {
            out.converged = false;
            break;
        }
        std::pop_heap(heap.begin(), heap.end());
        const auto worst = heap.back();
        heap.pop_back();
        const double m = 0.5 * (worst.a + worst.b);
        if (!(m > worst.a && m < worst.b)) {
            out.converged = false;
            heap.push_back(worst);
            std::push_heap(heap.begin(), heap.end());
            break;
        }
        auto [vl, el] = detail::gk21<T>(f, worst.a, m);
        auto [vr, er] = detail::gk21<T>(f, m, worst.b);
        out.evaluations += 42;
        heap.push_back({worst.a, m, vl, el});
        std::push_heap(heap.begin(), heap.end());
        heap.push_back({m, worst.b, vr, er});
        std::push_heap(heap.begin(), heap.end());
        // Recompute rather than update incrementally to avoid drift.
        total = T{};
        err = 0;
        for (const auto& iv : heap) {
            total += iv.value;
            err += iv.error;
        }
    }
    out.value = total;
    out.abs_error = err;
    if (!out.converged && opt.throw_on_failure) throw QuadratureFailure("adaptive quadrature did not converge", err);
    return out;
}

/// Sum of adaptive integrals over consecutive breakpoints.
template <class F>
auto integrate_pieces(F&& f, const std::vector<double>& points, const Options& opt = {})
    -> Result<std::decay_t<decltype(f(0.0))>> {
    using T = std::decay_t<decltype(f(0.0))>;
    Result<T> out;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        if (!(points[i + 1] > points[i])) continue;
        auto r = integrate(f, points[i], points[i + 1], opt);
        out.value += r.value;
        out.abs_error += r.abs_error;
        out.evaluations += r.evaluations;
        out.converged = out.converged && r.converged;
    }
    return out;
}

namespace detail {
template <class T>
Result<T> finish(Result<T>& r, const Options& opt) {
    if (!r.converged && opt.throw_on_failure)
        throw QuadratureFailure("semi-infinite quadrature did not converge", r.abs_error);
    return r;
}
}  // namespace detail

/// Integral over [a, inf) for integrands that eventually decay. Panels of
/// geometrically growing width (starting at `scale`) are added until
/// `quiet_panels` consecutive panels are negligible.
template <class F>
auto integrate_to_infinity(F&& f, double a, double scale, const Options& opt = {}, int quiet_panels = 2,
                           int max_panels = 80) -> Result<std::decay_t<decltype(f(a))>> {
    using T = std::decay_t<decltype(f(a))>;
    Result<T> out;
    double lo = a;
    double width = scale;
    int quiet = 0;
    Options inner = opt;
    inner.throw_on_failure = false;
    for (int k = 0; k < max_panels; ++k) {
        const double hi = lo + width;
        auto r = integrate(f, lo, hi, inner);
        out.value += r.value;
        out.abs_error += r.abs_error;
        out.evaluations += r.evaluations;
        out.converged = out.converged && r.converged;
        const double tol = std::max(opt.abs_tol, opt.rel_tol * std::abs(out.value));
        if (std::abs(r.value) + r.abs_error <= tol) {
            if (++quiet >= quiet_panels) return detail::finish(out, opt);
        } else {
            quiet = 0;
        }
        lo = hi;
        width *= 2.0;
        if (!std::isfinite(lo)) break;
    }
    out.converged = false;
    return detail::finish(out, opt);
}

}  // namespace mmmeta::quad
