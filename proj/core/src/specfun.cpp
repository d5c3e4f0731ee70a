#include "mmmeta/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <boost/math/special_functions/beta.hpp>

#include "mmmeta/errors.hpp"
#include "mmmeta/quadrature.hpp"

namespace mmmeta::specfun {
namespace {

bool is_nonpositive_integer(double v) { return v <= 0 && v == std::floor(v); }

struct SeriesSum {
    cplx value;
    double max_term;
    bool converged;
    int terms;
};

// Plain hypergeometric series sum_k (a)_k (b)_k / ((c)_k k!) z^k.
SeriesSum series_2f1(cplx a, double b, double c, double z, const SeriesControl& ctl) {
    cplx term = 1.0;
    cplx sum = 1.0;
    double max_term = 1.0;
    int small = 0;
    for (int k = 0; k < ctl.max_terms; ++k) {
        term *= (a + double(k)) * (b + k) / ((c + k) * (k + 1.0)) * z;
        sum += term;
        max_term = std::max(max_term, std::abs(term));
        if (!std::isfinite(max_term) || !std::isfinite(std::abs(sum))) return {sum, max_term, false, k + 1};
        if (term == 0.0) return {sum, max_term, true, k + 1};
        if (std::abs(term) <= ctl.rel_tol * 0.1 * std::abs(sum)) {
            if (++small >= 2) return {sum, max_term, true, k + 1};
        } else {
            small = 0;
        }
    }
    return {sum, max_term, false, ctl.max_terms};
}

// Terminating series when a or b is a nonpositive integer.
cplx polynomial_2f1(cplx a, double b, double c, double z, int degree) {
    cplx term = 1.0;
    cplx sum = 1.0;
    for (int k = 0; k < degree; ++k) {
        term *= (a + double(k)) * (b + k) / ((c + k) * (k + 1.0)) * z;
        sum += term;
    }
    return sum;
}

// 1 + b * int_0^1 t^(b-1) [(1 - z t)^(-a) - 1] dt, valid for c = b + 1, b > -1.
// t = s^(1/(1+b)) makes the integrand bounded at the origin.
cplx integral_2f1(cplx a, double b, double z, const SeriesControl& ctl) {
    const double p = 1.0 / (1.0 + b);
    auto g = [&](double s) -> cplx {
        if (s <= 0) return 0.0;
        const double t = std::pow(s, p);
        const double L = std::log1p(-z * t);
        const cplx bracket = expm1(-a * L);
        return b * p * std::pow(s, p * b - 1.0) * bracket;
    };
    quad::Options opt;
    opt.rel_tol = std::max(ctl.rel_tol, 1e-13);
    opt.abs_tol = 1e-15;
    opt.max_intervals = 40000;
    opt.throw_on_failure = false;
    auto r = quad::integrate(g, 0.0, 1.0, opt);
    if (!r.converged && r.abs_error > 1e-9 * std::abs(1.0 + r.value))
        throw NonConvergence("gauss_2f1: integral representation did not converge");
    return 1.0 + r.value;
}

double log_sum_exp(double x, double y) {
    if (x == -std::numeric_limits<double>::infinity()) return y;
    if (y == -std::numeric_limits<double>::infinity()) return x;
    const double m = std::max(x, y);
    return m + std::log1p(std::exp(-std::abs(x - y)));
}

// log of 1F1(a; b; z) for a, b > 0 and z >= 0, where every term is positive.
double log_kummer_positive(double a, double b, double z, const SeriesControl& ctl) {
    double log_term = 0.0;
    double log_sum = 0.0;
    double log_peak = 0.0;
    int past_peak = 0;
    for (int k = 0;; ++k) {
        log_term += std::log((a + k) * z / ((b + k) * (k + 1.0)));
        log_sum = log_sum_exp(log_sum, log_term);
        if (log_term >= log_peak) {
            log_peak = log_term;
            past_peak = 0;
        } else if (++past_peak > ctl.max_terms) {
            throw NonConvergence("kummer_1f1: series did not converge");
        }
        if (log_term < log_sum + std::log(ctl.rel_tol * 0.01) && k > z) return log_sum;
    }
}

}  // namespace

cplx expm1(cplx z) {
    if (std::abs(z) < 1e-5) return z * (1.0 + z * (0.5 + z / 6.0));
    if (z.imag() == 0.0) return std::expm1(z.real());
    // exp(x + iy) - 1 = expm1(x) cos y + (cos y - 1) + i e^x sin y
    const double x = z.real(), y = z.imag();
    const double s = std::sin(0.5 * y);
    return {std::expm1(x) * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y)};
}

cplx gauss_2f1(cplx a, double b, double c, double z, const SeriesControl& ctl) {
    if (is_nonpositive_integer(c)) throw std::invalid_argument("gauss_2f1: c is a nonpositive integer");
    if (!(z < 1.0)) throw std::invalid_argument("gauss_2f1: requires z < 1");
    if (a == 0.0 || b == 0.0 || z == 0.0) return 1.0;
    if (a.imag() == 0.0 && is_nonpositive_integer(a.real()))
        return polynomial_2f1(a, b, c, z, static_cast<int>(-a.real()));
    if (is_nonpositive_integer(b)) return polynomial_2f1(a, b, c, z, static_cast<int>(-b));

    const bool euler_ok = std::abs(c - (b + 1.0)) < 1e-15 && b > -1.0;
    const double eps = std::numeric_limits<double>::epsilon();
    if (z >= -0.5) {
        const SeriesSum s = series_2f1(a, b, c, z, ctl);
        if (s.converged && s.max_term * eps * 16 <= ctl.rel_tol * std::abs(s.value)) return s.value;
    } else {
        const double w = z / (z - 1.0);
        const double cb = c - b;
        const cplx pre = std::exp(-a * std::log1p(-z));
        if (is_nonpositive_integer(cb)) return pre * polynomial_2f1(a, cb, c, w, static_cast<int>(-cb));
        const SeriesSum s = series_2f1(a, cb, c, w, ctl);
        if (s.converged && s.max_term * eps * 16 <= ctl.rel_tol * std::abs(s.value)) return pre * s.value;
    }
    if (euler_ok) return integral_2f1(a, b, z, ctl);
    throw NonConvergence("gauss_2f1: series failed and no integral representation applies");
}

double gauss_2f1(double a, double b, double c, double z, const SeriesControl& ctl) {
    return gauss_2f1(cplx(a, 0.0), b, c, z, ctl).real();
}

// Term-by-term summation; throws once cancellation has eaten the requested precision.
static double kummer_plain(double a, double b, double z, const SeriesControl& ctl) {
    double term = 1.0, sum = 1.0, max_term = 1.0;
    int small = 0;
    for (int k = 0; k < ctl.max_terms + static_cast<int>(2 * std::abs(z)); ++k) {
        term *= (a + k) * z / ((b + k) * (k + 1.0));
        sum += term;
        max_term = std::max(max_term, std::abs(term));
        if (std::abs(term) <= ctl.rel_tol * 0.1 * std::abs(sum)) {
            if (++small >= 2) {
                if (max_term * 1e-16 * 16 > ctl.rel_tol * std::abs(sum))
                    throw NonConvergence("kummer_1f1: cancellation destroyed the series");
                return sum;
            }
        } else {
            small = 0;
        }
    }
    throw NonConvergence("kummer_1f1: series did not converge");
}

double kummer_1f1(double a, double b, double z, const SeriesControl& ctl) {
    if (is_nonpositive_integer(b)) throw std::invalid_argument("kummer_1f1: b is a nonpositive integer");
    if (z == 0.0 || a == 0.0) return 1.0;
    if (is_nonpositive_integer(a)) {
        double term = 1.0, sum = 1.0;
        for (int k = 0; k < static_cast<int>(-a); ++k) {
            term *= (a + k) * z / ((b + k) * (k + 1.0));
            sum += term;
        }
        return sum;
    }
    if (z < 0) {
        // 1F1(a; b; z) = e^z 1F1(b - a; b; -z); the transformed series changes
        // sign at most ceil(a - b) times, so it is summed directly.
        const double a2 = b - a;
        if (a2 == 0.0) return std::exp(z);
        if (a2 > 0 && b > 0) return std::exp(z + log_kummer_positive(a2, b, -z, ctl));
        if (is_nonpositive_integer(a2)) return std::exp(z) * kummer_1f1(a2, b, -z, ctl);
        if (b > 0) return std::exp(z) * kummer_plain(a2, b, -z, ctl);
    } else if (a > 0 && b > 0) {
        return std::exp(log_kummer_positive(a, b, z, ctl));
    }
    return kummer_plain(a, b, z, ctl);
}

double upper_gamma_ratio(int m, double x) {
    if (m < 1) throw std::invalid_argument("upper_gamma_ratio: m must be >= 1");
    if (x < 0) throw std::invalid_argument("upper_gamma_ratio: x must be nonnegative");
    if (x == 0) return 1.0;
    if (m == 1) return std::exp(-x);
    // e^{-x} sum_{k<m} x^k/k!, summed in log space so large x and m stay finite.
    const double lx = std::log(x);
    double lse = 0.0;  // k = 0 term
    double log_term = 0.0;
    for (int k = 1; k < m; ++k) {
        log_term += lx - std::log(double(k));
        lse = log_sum_exp(lse, log_term);
    }
    return std::min(1.0, std::exp(lse - x));
}

double reg_inc_beta(double x, double a, double b) {
    if (!(a > 0 && b > 0)) throw std::invalid_argument("reg_inc_beta: shapes must be positive");
    if (!(x >= 0 && x <= 1)) throw std::invalid_argument("reg_inc_beta: x must lie in [0,1]");
    if (x == 0) return 0.0;
    if (x == 1) return 1.0;
    return boost::math::ibeta(a, b, x);
}

double erf(double x) { return std::erf(x); }

cplx pochhammer(cplx a, int k) {
    if (k < 0) throw std::invalid_argument("pochhammer: k must be nonnegative");
    cplx prod = 1.0;
    double log_mag = 0.0;
    for (int i = 0; i < k; ++i) {
        const cplx f = a + double(i);
        if (f == 0.0) return 0.0;
        log_mag += std::log(std::abs(f));
        if (log_mag > 709.0) throw std::overflow_error("pochhammer: magnitude overflows at k=" + std::to_string(k));
        prod *= f;
    }
    return prod;
}

}  // namespace mmmeta::specfun
