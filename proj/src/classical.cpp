#include "unicorn/classical.hpp"
#include "unicorn/errors.hpp"
#include "unicorn/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace unicorn {

WindowSpec::WindowSpec(int window_size, int window_stride, Padding pad)
    : size(window_size), stride(window_stride), padding(pad) {
    if (size < 1 || size % 2 == 0)
        throw config_error("WindowSpec: size must be odd and positive");
    if (stride < 1 || stride > size)
        throw config_error("WindowSpec: stride must be in [1, size]");
}

double moment_estimate_window(std::span<const double> samples) {
    if (samples.size() < 2)
        throw config_error("moment_estimate_window: need at least 2 samples");
    double mean_sq = 0.0;
    for (double r : samples)
        mean_sq += r * r;
    mean_sq /= static_cast<double>(samples.size());
    double central = 0.0;
    for (double r : samples) {
        const double d = r * r - mean_sq;
        central += d * d;
    }
    central /= static_cast<double>(samples.size());
    if (!(central > 0.0))
        throw degenerate_window_error("moment_estimate_window: zero variance window");
    return mean_sq * mean_sq / central;
}

double ml_estimate_window(std::span<const double> samples) {
    if (samples.size() < 2)
        throw config_error("ml_estimate_window: need at least 2 samples");
    double mean_sq = 0.0;
    for (double r : samples)
        mean_sq += r * r;
    mean_sq /= static_cast<double>(samples.size());
    if (!(mean_sq > 0.0))
        throw degenerate_window_error("ml_estimate_window: all-zero window");
    const double r_min = 1e-6 * std::sqrt(mean_sq);
    double mean_log_sq = 0.0;
    for (double r : samples) {
        const double rc = std::max(r, r_min);
        mean_log_sq += 2.0 * std::log(rc);
    }
    mean_log_sq /= static_cast<double>(samples.size());
    const double delta = std::log(mean_sq) - mean_log_sq;
    if (!(delta > 0.0))
        throw degenerate_window_error("ml_estimate_window: numerically constant window");
    // Greenwood-Durand start for the gamma shape.
    double m = (3.0 - delta + std::sqrt((delta - 3.0) * (delta - 3.0) + 24.0 * delta)) /
               (12.0 * delta);
    for (int iter = 0; iter < 20; ++iter) {
        const double f = std::log(m) - digamma(m) - delta;
        const double fprime = 1.0 / m - trigamma(m);
        const double step = f / fprime;
        double next = m - step;
        if (next <= 0.0)
            next = 0.5 * m;
        const bool done = std::abs(next - m) <= 1e-10 * m;
        m = next;
        if (done)
            break;
    }
    return m;
}

namespace {

std::optional<double> estimate_or_invalid(std::span<const double> samples,
                                          WindowEstimator estimator) {
    try {
        const double m = estimator == WindowEstimator::Moment
                             ? moment_estimate_window(samples)
                             : ml_estimate_window(samples);
        return std::clamp(m, kShapeClampMin, kShapeClampMax);
    } catch (const degenerate_window_error&) {
        return std::nullopt;
    }
}

std::vector<Eigen::Index> strided_positions(Eigen::Index n, int stride) {
    std::vector<Eigen::Index> positions;
    for (Eigen::Index p = 0; p < n; p += stride)
        positions.push_back(p);
    return positions;
}

} // namespace

ParamMap sliding_window_map(const EnvelopeImage& image, const WindowSpec& window,
                            WindowEstimator estimator) {
    const Eigen::Index h = image.rows(), w = image.cols();
    if (window.size > std::min(h, w))
        throw config_error("sliding_window_map: window larger than image");
    const int half = window.size / 2;
    const auto ys = strided_positions(h, window.stride);
    const auto xs = strided_positions(w, window.stride);

    // Estimates on the strided node grid.
    ImageXd node_values(static_cast<Eigen::Index>(ys.size()),
                        static_cast<Eigen::Index>(xs.size()));
    MaskXb node_valid(node_values.rows(), node_values.cols());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t iy = 0; iy < static_cast<std::ptrdiff_t>(ys.size()); ++iy) {
        std::vector<double> samples(static_cast<std::size_t>(window.size) * window.size);
        for (std::size_t ix = 0; ix < xs.size(); ++ix) {
            std::size_t n = 0;
            for (int dy = -half; dy <= half; ++dy)
                for (int dx = -half; dx <= half; ++dx)
                    samples[n++] = image(pad_index(ys[iy] + dy, h, window.padding),
                                         pad_index(xs[ix] + dx, w, window.padding));
            const auto m = estimate_or_invalid(samples, estimator);
            node_valid(iy, static_cast<Eigen::Index>(ix)) = m.has_value();
            node_values(iy, static_cast<Eigen::Index>(ix)) = m.value_or(0.0);
        }
    }

    ParamMap out(h, w);
    if (window.stride == 1) {
        out.values = node_values;
        out.valid = node_valid;
        return out;
    }

    // Bilinear fill between nodes; a pixel is valid only if every
    // contributing node is.
    // Pixels beyond the last node clamp to it (constant extension).
    for (Eigen::Index y = 0; y < h; ++y) {
        const std::size_t y0 = std::min<std::size_t>(
            static_cast<std::size_t>(y) / window.stride, ys.size() - 1);
        const std::size_t yb = std::min(y0 + 1, ys.size() - 1);
        const double ty = ys[yb] == ys[y0]
                              ? 0.0
                              : static_cast<double>(y - ys[y0]) / (ys[yb] - ys[y0]);
        for (Eigen::Index x = 0; x < w; ++x) {
            const std::size_t x0 = std::min<std::size_t>(
                static_cast<std::size_t>(x) / window.stride, xs.size() - 1);
            const std::size_t xb = std::min(x0 + 1, xs.size() - 1);
            const double tx = xs[xb] == xs[x0]
                                  ? 0.0
                                  : static_cast<double>(x - xs[x0]) / (xs[xb] - xs[x0]);
            const bool ok = node_valid(y0, x0) && node_valid(y0, xb) &&
                            node_valid(yb, x0) && node_valid(yb, xb);
            out.valid(y, x) = ok;
            if (!ok) {
                out.values(y, x) = 0.0;
                continue;
            }
            const double top = (1.0 - tx) * node_values(y0, x0) + tx * node_values(y0, xb);
            const double bot = (1.0 - tx) * node_values(yb, x0) + tx * node_values(yb, xb);
            out.values(y, x) = (1.0 - ty) * top + ty * bot;
        }
    }
    return out;
}

ParamMap wmc_map(const EnvelopeImage& image, const std::vector<int>& sizes) {
    if (sizes.empty())
        throw config_error("wmc_map: need at least one window size");
    const Eigen::Index h = image.rows(), w = image.cols();
    ImageXd acc = ImageXd::Zero(h, w);
    MaskXb valid = MaskXb::Constant(h, w, true);
    for (int size : sizes) {
        const ParamMap map = sliding_window_map(image, WindowSpec(size, 1),
                                                WindowEstimator::Moment);
        acc += map.values;
        valid = valid && map.valid;
    }
    ParamMap out(h, w);
    out.values = acc / static_cast<double>(sizes.size());
    out.valid = valid;
    return out;
}

} // namespace unicorn
