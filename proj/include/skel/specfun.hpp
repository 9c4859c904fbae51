#pragma once

namespace skel::specfun {

/// ln Gamma(x) for x > 0 (Lanczos, g = 7). Throws DomainError for x <= 0.
double log_gamma(double x);

/// Modified Bessel function of the second kind, order zero. Throws DomainError for x <= 0.
double bessel_k0(double x);

/// Modified Bessel function of the first kind, order zero (power series, intended for |x| <= 2).
double bessel_i0_series(double x);

}  // namespace skel::specfun
