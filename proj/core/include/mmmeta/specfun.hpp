#pragma once

#include <complex>

namespace mmmeta::specfun {

using cplx = std::complex<double>;

struct SeriesControl {
    int max_terms = 512;
    double rel_tol = 1e-12;
};

/// 2F1(a, b; c; z) for complex a and real b, c, z with z <= 0 (also 0 <= z < 1/2).
/// Direct series near the origin, Pfaff-transformed series for z < -1/2, and for
/// the c = b + 1 family an Euler-type integral once the series is too slow or
/// loses precision to cancellation (large |a|).
cplx gauss_2f1(cplx a, double b, double c, double z, const SeriesControl& ctl = {});
double gauss_2f1(double a, double b, double c, double z, const SeriesControl& ctl = {});

/// Kummer 1F1(a; b; z). Negative z goes through Kummer's transformation.
/// The term budget counts terms past the largest one, so large |z| is fine.
double kummer_1f1(double a, double b, double z, const SeriesControl& ctl = {});

/// Gamma(m, x) / Gamma(m) for integer m >= 1, by the finite Poisson sum.
double upper_gamma_ratio(int m, double x);

/// Regularized incomplete beta I_x(a, b).
double reg_inc_beta(double x, double a, double b);

double erf(double x);

/// Rising factorial a (a+1) ... (a+k-1). Throws std::overflow_error when the
/// magnitude leaves double range.
cplx pochhammer(cplx a, int k);

/// exp(z) - 1 without cancellation for small |z|.
cplx expm1(cplx z);

}  // namespace mmmeta::specfun
