#include "unicorn/estimator.hpp"
#include "unicorn/errors.hpp"

#include <algorithm>
#include <cmath>

namespace unicorn {

double pointwise_m(double r, double score, double omega_hat,
                   double denominator_epsilon) {
    if (!(r > 0.0))
        throw domain_error("pointwise_m: r must be positive");
    if (!(omega_hat > 0.0))
        throw domain_error("pointwise_m: omega_hat must be positive");
    if (!(denominator_epsilon > 0.0))
        throw domain_error("pointwise_m: denominator_epsilon must be positive");
    // Denominator 2/r - 2r/omega vanishes exactly at r^2 = omega.
    if (std::abs(1.0 - r * r / omega_hat) <= denominator_epsilon)
        throw singular_pixel_error("pointwise_m: r too close to sqrt(omega_hat)");
    return (1.0 / r + score) / (2.0 / r - 2.0 * r / omega_hat);
}

ImageXd estimate_omega(const EnvelopeImage& image, const OmegaMode& mode) {
    if (image.size() == 0)
        throw config_error("estimate_omega: empty image");
    switch (mode.kind) {
    case OmegaMode::Kind::Fixed:
        if (!(mode.value > 0.0))
            throw config_error("estimate_omega: fixed omega must be positive");
        return ImageXd::Constant(image.rows(), image.cols(), mode.value);
    case OmegaMode::Kind::Global: {
        const double omega = image.square().mean();
        if (!(omega > 0.0))
            throw degenerate_window_error("estimate_omega: all-zero image");
        return ImageXd::Constant(image.rows(), image.cols(), omega);
    }
    case OmegaMode::Kind::Local: {
        const ImageXd local = box_mean(image.square(), mode.window);
        if (!(local.maxCoeff() > 0.0))
            throw degenerate_window_error("estimate_omega: all-zero image");
        return local;
    }
    }
    throw config_error("estimate_omega: unknown mode");
}

ParamMap lowpass(const ParamMap& map, const FilterSpec& filter) {
    switch (filter.kind) {
    case FilterSpec::Kind::None:
        return map;
    case FilterSpec::Kind::Median:
        return median_filter(map, filter.k);
    case FilterSpec::Kind::Average:
        return average_filter(map, filter.k);
    }
    throw config_error("lowpass: unknown filter kind");
}

ParamMap unicorn_map(const EnvelopeImage& image, const ScoreImage& scores,
                     const UnicornConfig& config) {
    if (image.rows() != scores.rows() || image.cols() != scores.cols())
        throw config_error("unicorn_map: image and score shapes differ");
    const Eigen::Index h = image.rows(), w = image.cols();
    const ImageXd omega = estimate_omega(image, config.omega_mode);
    const double global_omega = image.square().mean();
    const double r_min = 1e-6 * std::sqrt(global_omega);

    ParamMap raw(h, w);
    for (Eigen::Index y = 0; y < h; ++y) {
        for (Eigen::Index x = 0; x < w; ++x) {
            const double r = std::max(image(y, x), r_min);
            try {
                const double m = pointwise_m(r, scores(y, x), omega(y, x),
                                             config.denominator_epsilon);
                raw.values(y, x) = std::clamp(m, config.m_min, config.m_max);
            } catch (const singular_pixel_error&) {
                raw.values(y, x) = 0.0;
                raw.valid(y, x) = false;
            }
        }
    }
    // Filter first, then fill singular pixels from the filtered neighborhood.
    return impute_invalid(lowpass(raw, config.filter));
}

} // namespace unicorn
