#ifndef UNICORN_FILTERS_HPP
#define UNICORN_FILTERS_HPP

#include "unicorn/image.hpp"

namespace unicorn {

enum class Padding { Reflect, Replicate };

/// Fold an out-of-range index back into [0, n). Reflect duplicates the edge
/// sample (..., 1, 0 | 0, 1, ...), replicate clamps.
Eigen::Index pad_index(Eigen::Index i, Eigen::Index n, Padding padding);

/// Window mean of a plain grid, k x k reflect-padded, k odd.
ImageXd box_mean(const ImageXd& image, int k);

/// Per-pixel median of valid values in the reflect-padded k x k window.
/// A pixel with zero valid neighbors stays invalid.
ParamMap median_filter(const ParamMap& map, int k);

/// Per-pixel mean of valid values in the reflect-padded k x k window.
ParamMap average_filter(const ParamMap& map, int k);

/// Replace every invalid pixel by the median of valid values in a growing
/// window around it; leaves the map untouched when no pixel is valid.
ParamMap impute_invalid(const ParamMap& map);

} // namespace unicorn

#endif
