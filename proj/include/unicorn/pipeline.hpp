#ifndef UNICORN_PIPELINE_HPP
#define UNICORN_PIPELINE_HPP

#include "unicorn/image.hpp"
#include "unicorn/rng.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace unicorn {

/// Ground-truth shape map; values live in [0.5, 2.0].
using GroundTruthMap = ImageXd;

/// Affine intensity-to-shape mapping: m = 0.5 + 1.5 * intensity.
GroundTruthMap normalize_to_m(const ImageXd& intensities);

/// Inverse of normalize_to_m.
ImageXd m_to_intensity(const GroundTruthMap& truth);

/// Per-pixel independent envelope draw with shape = truth pixel and the
/// given scale.
EnvelopeImage synthesize_measurement(const GroundTruthMap& truth, double omega, Rng& rng);

struct Dataset {
    std::vector<std::pair<GroundTruthMap, EnvelopeImage>> train;
    std::vector<std::pair<GroundTruthMap, EnvelopeImage>> test;
    std::uint64_t split_seed = 0;
};

/// Seeded uniform shuffle; first ceil(fraction * N) items go to train.
Dataset split_dataset(std::vector<std::pair<GroundTruthMap, EnvelopeImage>> items,
                      double train_fraction, std::uint64_t seed);

// --- procedural intensity generators (values in [0, 1]) ----------------

ImageXd generate_ramp(int height, int width, Rng& rng);
ImageXd generate_disk(int height, int width, Rng& rng);
ImageXd generate_checkerboard(int height, int width, Rng& rng);
ImageXd generate_strokes(int height, int width, Rng& rng);

enum class Generator { Ramp, Disk, Checkerboard, Strokes, Mixed };

/// One intensity image from the named family; Mixed cycles through all
/// four by index.
ImageXd generate_intensity(Generator kind, int height, int width, std::size_t index,
                           Rng& rng);

/// Disk phantom with explicit shape values: background m, disk m, plus the
/// disk mask (the analysis ROI).
std::pair<GroundTruthMap, MaskXb> disk_phantom(int height, int width, double background_m,
                                               double disk_m, double radius_fraction);

} // namespace unicorn

#endif
