#include "unicorn/special_functions.hpp"
#include "unicorn/errors.hpp"

#include <cmath>

namespace unicorn {

namespace {

// Lanczos g = 7, n = 9 (Godfrey coefficients).
constexpr double kLanczosG = 7.0;
constexpr double kLanczosCoeff[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

constexpr double kHalfLogTwoPi = 0.91893853320467274178; // ln(2*pi)/2

} // namespace

double log_gamma(double x) {
    if (!(x > 0.0))
        throw domain_error("log_gamma: argument must be positive");
    if (x < 0.5) {
        // Reflection keeps the series argument away from 0.
        return std::log(M_PI / std::sin(M_PI * x)) - log_gamma(1.0 - x);
    }
    const double z = x - 1.0;
    double series = kLanczosCoeff[0];
    for (int i = 1; i < 9; ++i)
        series += kLanczosCoeff[i] / (z + i);
    const double t = z + kLanczosG + 0.5;
    return kHalfLogTwoPi + (z + 0.5) * std::log(t) - t + std::log(series);
}

double digamma(double x) {
    if (!(x > 0.0))
        throw domain_error("digamma: argument must be positive");
    double result = 0.0;
    // Shift up until the asymptotic expansion is accurate.
    while (x < 12.0) {
        result -= 1.0 / x;
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    // psi(x) ~ ln x - 1/(2x) - sum B_{2n}/(2n x^{2n})
    result += std::log(x) - 0.5 * inv -
              inv2 * (1.0 / 12.0 -
                      inv2 * (1.0 / 120.0 -
                              inv2 * (1.0 / 252.0 -
                                      inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0)))));
    return result;
}

double trigamma(double x) {
    if (!(x > 0.0))
        throw domain_error("trigamma: argument must be positive");
    double result = 0.0;
    while (x < 12.0) {
        result += 1.0 / (x * x);
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    result += inv * (1.0 + 0.5 * inv +
                     inv2 * (1.0 / 6.0 -
                             inv2 * (1.0 / 30.0 -
                                     inv2 * (1.0 / 42.0 - inv2 * (1.0 / 30.0)))));
    return result;
}

} // namespace unicorn
