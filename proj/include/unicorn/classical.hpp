#ifndef UNICORN_CLASSICAL_HPP
#define UNICORN_CLASSICAL_HPP

#include "unicorn/filters.hpp"
#include "unicorn/image.hpp"

#include <span>
#include <vector>

namespace unicorn {

/// Estimates are clamped to this range; tails are kept (at the bound) and
/// the pixel stays valid.
constexpr double kShapeClampMin = 0.01;
constexpr double kShapeClampMax = 10.0;

struct WindowSpec {
    int size;
    int stride = 1;
    Padding padding = Padding::Reflect;

    WindowSpec(int window_size, int window_stride = 1, Padding pad = Padding::Reflect);
};

enum class WindowEstimator { Moment, Ml };

/// Inverse-normalized-variance estimate from one window:
///   m = mean(r^2)^2 / mean((r^2 - mean(r^2))^2)
/// with the biased (1/N) central moment. Throws degenerate_window_error
/// when the window variance vanishes.
double moment_estimate_window(std::span<const double> samples);

/// Maximum-likelihood shape for one window: gamma-shape ML on r^2 with
/// Omega profiled at mean(r^2). Greenwood-Durand start, Newton refinement
/// of ln m - psi(m) = ln(mean r^2) - mean(ln r^2) to relative 1e-10.
double ml_estimate_window(std::span<const double> samples);

/// Full-resolution map from a sliding window. Stride > 1 evaluates on the
/// strided grid and fills the rest by bilinear interpolation. Degenerate
/// windows produce invalid pixels.
ParamMap sliding_window_map(const EnvelopeImage& image, const WindowSpec& window,
                            WindowEstimator estimator);

/// Window-modulated compounding: pixelwise mean of stride-1 moment maps at
/// each window size; a pixel is valid iff valid in every constituent map.
ParamMap wmc_map(const EnvelopeImage& image, const std::vector<int>& sizes);

} // namespace unicorn

#endif
