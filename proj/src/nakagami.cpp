#include "unicorn/nakagami.hpp"
#include "unicorn/errors.hpp"
#include "unicorn/special_functions.hpp"

#include <cmath>

namespace unicorn {

NakagamiParams::NakagamiParams(double shape, double scale) : m(shape), omega(scale) {
    if (!(m > 0.0))
        throw domain_error("NakagamiParams: m must be positive");
    if (!(omega > 0.0))
        throw domain_error("NakagamiParams: omega must be positive");
}

Regime regime_of(double m) {
    if (!(m > 0.0))
        throw domain_error("regime_of: m must be positive");
    if (std::abs(m - 1.0) <= 1e-9)
        return Regime::Rayleigh;
    return m < 1.0 ? Regime::PreRayleigh : Regime::PostRayleigh;
}

namespace nakagami {

double pdf(double r, const NakagamiParams& params) {
    if (r < 0.0)
        throw domain_error("nakagami::pdf: r must be nonnegative");
    if (r == 0.0)
        return 0.0;
    return std::exp(log_pdf(r, params));
}

double log_pdf(double r, const NakagamiParams& params) {
    if (!(r > 0.0))
        throw domain_error("nakagami::log_pdf: r must be positive");
    const double m = params.m;
    const double omega = params.omega;
    return -log_gamma(m) + m * std::log(m) - m * std::log(omega) + std::log(2.0) +
           (2.0 * m - 1.0) * std::log(r) - (m / omega) * r * r;
}

double analytic_score(double r, const NakagamiParams& params) {
    if (!(r > 0.0))
        throw domain_error("nakagami::analytic_score: r must be positive");
    return (2.0 * params.m - 1.0) / r - (2.0 * params.m / params.omega) * r;
}

double sample_one(const NakagamiParams& params, Rng& rng) {
    const double x = sample_gamma(params.m, rng) * (params.omega / params.m);
    return std::sqrt(x);
}

std::vector<double> sample(const NakagamiParams& params, std::size_t count, Rng& rng) {
    if (count == 0)
        throw domain_error("nakagami::sample: count must be positive");
    std::vector<double> out(count);
    for (auto& r : out)
        r = sample_one(params, rng);
    return out;
}

} // namespace nakagami

double sample_gamma(double shape, Rng& rng) {
    if (!(shape > 0.0))
        throw domain_error("sample_gamma: shape must be positive");
    if (shape < 1.0) {
        const double boost = std::pow(rng.uniform(), 1.0 / shape);
        return sample_gamma(shape + 1.0, rng) * boost;
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = rng.normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2)
            return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v)))
            return d * v;
    }
}

} // namespace unicorn
