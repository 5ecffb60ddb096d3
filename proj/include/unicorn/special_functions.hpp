#ifndef UNICORN_SPECIAL_FUNCTIONS_HPP
#define UNICORN_SPECIAL_FUNCTIONS_HPP

namespace unicorn {

/// ln Gamma(x) for x > 0, Lanczos approximation (g = 7, 9 coefficients).
/// Absolute error below 1e-12 on [1e-3, 1e3].
double log_gamma(double x);

/// Digamma psi(x) for x > 0, asymptotic series with recurrence shift.
double digamma(double x);

/// Trigamma psi'(x) for x > 0.
double trigamma(double x);

} // namespace unicorn

#endif
