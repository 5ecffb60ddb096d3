#ifndef UNICORN_NAKAGAMI_HPP
#define UNICORN_NAKAGAMI_HPP

#include "unicorn/rng.hpp"

#include <cstddef>
#include <vector>

namespace unicorn {

/// Shape m and scale Omega (= E[R^2]) of the envelope distribution.
struct NakagamiParams {
    double m;
    double omega;

    NakagamiParams(double shape, double scale);
};

enum class Regime { PreRayleigh, Rayleigh, PostRayleigh };

/// Scattering regime of a shape value: m < 1 pre-Rayleigh, m = 1 Rayleigh
/// (within 1e-9), m > 1 post-Rayleigh.
Regime regime_of(double m);

namespace nakagami {

/// Density of the envelope amplitude at r >= 0.
double pdf(double r, const NakagamiParams& params);

/// Log-density at r > 0:
///   -lnGamma(m) + m ln m - m ln Omega + ln 2 + (2m-1) ln r - (m/Omega) r^2
double log_pdf(double r, const NakagamiParams& params);

/// d/dr log-density at r > 0: (2m-1)/r - (2m/Omega) r.
double analytic_score(double r, const NakagamiParams& params);

/// One draw: R = sqrt(X), X ~ Gamma(shape = m, scale = Omega/m).
double sample_one(const NakagamiParams& params, Rng& rng);

/// i.i.d. draws from the envelope distribution.
std::vector<double> sample(const NakagamiParams& params, std::size_t count, Rng& rng);

} // namespace nakagami

/// Gamma(shape, scale = 1) variate, Marsaglia-Tsang squeeze method with the
/// shape < 1 boost X = X_{shape+1} * U^{1/shape}.
double sample_gamma(double shape, Rng& rng);

} // namespace unicorn

#endif
