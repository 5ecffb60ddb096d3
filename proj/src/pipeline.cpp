#include "unicorn/pipeline.hpp"
#include "unicorn/errors.hpp"
#include "unicorn/nakagami.hpp"

#include <algorithm>
#include <cmath>

namespace unicorn {

GroundTruthMap normalize_to_m(const ImageXd& intensities) {
    if ((intensities < 0.0).any() || (intensities > 1.0).any())
        throw domain_error("normalize_to_m: intensities must lie in [0, 1]");
    return 0.5 + 1.5 * intensities;
}

ImageXd m_to_intensity(const GroundTruthMap& truth) {
    if ((truth < 0.5).any() || (truth > 2.0).any())
        throw domain_error("m_to_intensity: shape values must lie in [0.5, 2]");
    return (truth - 0.5) / 1.5;
}

EnvelopeImage synthesize_measurement(const GroundTruthMap& truth, double omega, Rng& rng) {
    if ((truth < 0.5).any() || (truth > 2.0).any())
        throw domain_error("synthesize_measurement: truth values must lie in [0.5, 2]");
    if (!(omega > 0.0))
        throw domain_error("synthesize_measurement: omega must be positive");
    EnvelopeImage out(truth.rows(), truth.cols());
    for (Eigen::Index y = 0; y < truth.rows(); ++y)
        for (Eigen::Index x = 0; x < truth.cols(); ++x)
            out(y, x) = nakagami::sample_one(NakagamiParams(truth(y, x), omega), rng);
    return out;
}

Dataset split_dataset(std::vector<std::pair<GroundTruthMap, EnvelopeImage>> items,
                      double train_fraction, std::uint64_t seed) {
    if (items.size() < 2)
        throw config_error("split_dataset: need at least 2 items");
    if (!(train_fraction > 0.0) || !(train_fraction < 1.0))
        throw config_error("split_dataset: fraction must lie in (0, 1)");
    const std::size_t n_train = static_cast<std::size_t>(
        std::ceil(train_fraction * static_cast<double>(items.size())));
    if (n_train == 0 || n_train == items.size())
        throw config_error("split_dataset: fraction yields an empty split");

    Rng rng(seed);
    for (std::size_t i = items.size(); i > 1; --i)
        std::swap(items[i - 1], items[rng.next_u64() % i]);

    Dataset dataset;
    dataset.split_seed = seed;
    dataset.train.assign(std::make_move_iterator(items.begin()),
                         std::make_move_iterator(items.begin() + static_cast<std::ptrdiff_t>(n_train)));
    dataset.test.assign(std::make_move_iterator(items.begin() + static_cast<std::ptrdiff_t>(n_train)),
                        std::make_move_iterator(items.end()));
    return dataset;
}

ImageXd generate_ramp(int height, int width, Rng& rng) {
    const bool horizontal = rng.uniform() < 0.5;
    const bool flipped = rng.uniform() < 0.5;
    ImageXd out(height, width);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            const double t = horizontal ? static_cast<double>(x) / (width - 1)
                                        : static_cast<double>(y) / (height - 1);
            out(y, x) = flipped ? 1.0 - t : t;
        }
    return out;
}

ImageXd generate_disk(int height, int width, Rng& rng) {
    const double background = 0.2 + 0.3 * rng.uniform();
    const double foreground = rng.uniform() < 0.5 ? background - 0.2 : background + 0.4;
    const double cy = height * (0.3 + 0.4 * rng.uniform());
    const double cx = width * (0.3 + 0.4 * rng.uniform());
    const double radius = 0.15 * std::min(height, width) * (1.0 + rng.uniform());
    ImageXd out = ImageXd::Constant(height, width, background);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            if (std::hypot(y - cy, x - cx) <= radius)
                out(y, x) = std::clamp(foreground, 0.0, 1.0);
    return out;
}

ImageXd generate_checkerboard(int height, int width, Rng& rng) {
    const int cell = 4 + static_cast<int>(rng.uniform() * 8);
    const double lo = 0.1 + 0.2 * rng.uniform();
    const double hi = 0.6 + 0.3 * rng.uniform();
    ImageXd out(height, width);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            out(y, x) = ((y / cell + x / cell) % 2 == 0) ? lo : hi;
    return out;
}

ImageXd generate_strokes(int height, int width, Rng& rng) {
    ImageXd out = ImageXd::Constant(height, width, 0.05);
    const int n_strokes = 2 + static_cast<int>(rng.uniform() * 3);
    for (int s = 0; s < n_strokes; ++s) {
        double y = rng.uniform() * height;
        double x = rng.uniform() * width;
        double angle = rng.uniform() * 2.0 * M_PI;
        const double value = 0.6 + 0.4 * rng.uniform();
        const int steps = static_cast<int>(1.5 * std::max(height, width));
        for (int t = 0; t < steps; ++t) {
            angle += 0.3 * (rng.uniform() - 0.5);
            y += std::sin(angle);
            x += std::cos(angle);
            const int iy = static_cast<int>(std::round(y));
            const int ix = static_cast<int>(std::round(x));
            if (iy < 0 || iy >= height || ix < 0 || ix >= width)
                break;
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    const int yy = iy + dy, xx = ix + dx;
                    if (yy >= 0 && yy < height && xx >= 0 && xx < width)
                        out(yy, xx) = value;
                }
        }
    }
    return out;
}

ImageXd generate_intensity(Generator kind, int height, int width, std::size_t index,
                           Rng& rng) {
    if (height < 2 || width < 2)
        throw config_error("generate_intensity: image too small");
    switch (kind) {
    case Generator::Ramp:
        return generate_ramp(height, width, rng);
    case Generator::Disk:
        return generate_disk(height, width, rng);
    case Generator::Checkerboard:
        return generate_checkerboard(height, width, rng);
    case Generator::Strokes:
        return generate_strokes(height, width, rng);
    case Generator::Mixed:
        switch (index % 4) {
        case 0:
            return generate_ramp(height, width, rng);
        case 1:
            return generate_disk(height, width, rng);
        case 2:
            return generate_checkerboard(height, width, rng);
        default:
            return generate_strokes(height, width, rng);
        }
    }
    throw config_error("generate_intensity: unknown generator");
}

std::pair<GroundTruthMap, MaskXb> disk_phantom(int height, int width, double background_m,
                                               double disk_m, double radius_fraction) {
    if (!(radius_fraction > 0.0) || !(radius_fraction < 0.5))
        throw config_error("disk_phantom: radius_fraction must lie in (0, 0.5)");
    GroundTruthMap truth = GroundTruthMap::Constant(height, width, background_m);
    MaskXb roi = MaskXb::Constant(height, width, false);
    const double cy = (height - 1) / 2.0;
    const double cx = (width - 1) / 2.0;
    const double radius = radius_fraction * std::min(height, width);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            if (std::hypot(y - cy, x - cx) <= radius) {
                truth(y, x) = disk_m;
                roi(y, x) = true;
            }
    return {std::move(truth), std::move(roi)};
}

} // namespace unicorn
