#ifndef UNICORN_ESTIMATOR_HPP
#define UNICORN_ESTIMATOR_HPP

#include "unicorn/filters.hpp"
#include "unicorn/image.hpp"

namespace unicorn {

/// How the second moment Omega is estimated for the pointwise inversion.
struct OmegaMode {
    enum class Kind { Global, Local, Fixed };
    Kind kind = Kind::Global;
    int window = 11;    // Local only
    double value = 1.0; // Fixed only

    static OmegaMode global() { return {Kind::Global, 0, 0.0}; }
    static OmegaMode local(int k) { return {Kind::Local, k, 0.0}; }
    static OmegaMode fixed(double v) { return {Kind::Fixed, 0, v}; }
};

struct FilterSpec {
    enum class Kind { None, Median, Average };
    Kind kind = Kind::Median;
    int k = 3;

    static FilterSpec none() { return {Kind::None, 0}; }
    static FilterSpec median(int k) { return {Kind::Median, k}; }
    static FilterSpec average(int k) { return {Kind::Average, k}; }
};

struct UnicornConfig {
    OmegaMode omega_mode = OmegaMode::global();
    FilterSpec filter = FilterSpec::median(3);
    double denominator_epsilon = 1e-3; // relative to 2/r
    double m_min = 0.01;
    double m_max = 10.0;
};

/// Closed-form pointwise shape estimate from one (amplitude, score) pair:
///   m = (1/r + score) / (2/r - 2 r / omega_hat)
/// Throws singular_pixel_error when |1 - r^2/omega_hat| <= epsilon, where
/// the denominator is numerically useless.
double pointwise_m(double r, double score, double omega_hat,
                   double denominator_epsilon = 1e-3);

/// Per-pixel Omega estimate: global mean of r^2, local k x k window mean of
/// r^2 (reflect-padded), or a fixed constant.
ImageXd estimate_omega(const EnvelopeImage& image, const OmegaMode& mode);

/// Configured low-pass filter over valid values.
ParamMap lowpass(const ParamMap& map, const FilterSpec& filter);

/// Full map: pointwise inversion with r clamped at 1e-6 * sqrt(global
/// mean r^2), values clamped to [m_min, m_max], low-pass filtered, and
/// singular pixels imputed from the filtered neighborhood.
ParamMap unicorn_map(const EnvelopeImage& image, const ScoreImage& scores,
                     const UnicornConfig& config);

} // namespace unicorn

#endif
