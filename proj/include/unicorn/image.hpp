#ifndef UNICORN_IMAGE_HPP
#define UNICORN_IMAGE_HPP

#include <Eigen/Dense>

namespace unicorn {

/// Row-major dense grids; rows are image rows, matching the file formats.
using ImageXd = Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MaskXb = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Envelope measurement grid (all entries >= 0).
using EnvelopeImage = ImageXd;

/// Per-pixel score image, same shape as the envelope it was computed from.
using ScoreImage = ImageXd;

/// Estimated (or ground-truth) Nakagami shape map with a validity mask.
struct ParamMap {
    ImageXd values;
    MaskXb valid;

    ParamMap() = default;
    ParamMap(Eigen::Index height, Eigen::Index width)
        : values(ImageXd::Zero(height, width)),
          valid(MaskXb::Constant(height, width, true)) {}
    explicit ParamMap(ImageXd v)
        : values(std::move(v)),
          valid(MaskXb::Constant(values.rows(), values.cols(), true)) {}

    Eigen::Index rows() const { return values.rows(); }
    Eigen::Index cols() const { return values.cols(); }

    double valid_fraction() const {
        return valid.size() == 0
                   ? 0.0
                   : static_cast<double>(valid.count()) / static_cast<double>(valid.size());
    }
};

} // namespace unicorn

#endif
