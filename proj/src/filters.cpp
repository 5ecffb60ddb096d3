#include "unicorn/filters.hpp"
#include "unicorn/errors.hpp"

#include <algorithm>
#include <vector>

namespace unicorn {

Eigen::Index pad_index(Eigen::Index i, Eigen::Index n, Padding padding) {
    if (i >= 0 && i < n)
        return i;
    if (padding == Padding::Replicate)
        return std::clamp<Eigen::Index>(i, 0, n - 1);
    // Reflect with edge duplication; fold until inside (handles any overhang).
    const Eigen::Index period = 2 * n;
    i %= period;
    if (i < 0)
        i += period;
    return i < n ? i : period - 1 - i;
}

namespace {

void check_kernel(const ParamMap& map, int k) {
    if (k < 1 || k % 2 == 0)
        throw config_error("filter kernel size must be odd and positive");
    if (k > std::min(map.rows(), map.cols()))
        throw config_error("filter kernel larger than image");
}

double median_of(std::vector<double>& values) {
    const auto mid = values.begin() + values.size() / 2;
    std::nth_element(values.begin(), mid, values.end());
    if (values.size() % 2 == 1)
        return *mid;
    const double hi = *mid;
    const double lo = *std::max_element(values.begin(), mid);
    return 0.5 * (lo + hi);
}

} // namespace

ImageXd box_mean(const ImageXd& image, int k) {
    if (k < 1 || k % 2 == 0)
        throw config_error("box_mean: kernel size must be odd and positive");
    const Eigen::Index h = image.rows(), w = image.cols();
    const int half = k / 2;
    ImageXd out(h, w);
    for (Eigen::Index y = 0; y < h; ++y) {
        for (Eigen::Index x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int dy = -half; dy <= half; ++dy)
                for (int dx = -half; dx <= half; ++dx)
                    acc += image(pad_index(y + dy, h, Padding::Reflect),
                                 pad_index(x + dx, w, Padding::Reflect));
            out(y, x) = acc / (static_cast<double>(k) * k);
        }
    }
    return out;
}

ParamMap median_filter(const ParamMap& map, int k) {
    check_kernel(map, k);
    const Eigen::Index h = map.rows(), w = map.cols();
    const int half = k / 2;
    ParamMap out(h, w);
    std::vector<double> window;
    window.reserve(static_cast<std::size_t>(k) * k);
    for (Eigen::Index y = 0; y < h; ++y) {
        for (Eigen::Index x = 0; x < w; ++x) {
            window.clear();
            for (int dy = -half; dy <= half; ++dy)
                for (int dx = -half; dx <= half; ++dx) {
                    const Eigen::Index yy = pad_index(y + dy, h, Padding::Reflect);
                    const Eigen::Index xx = pad_index(x + dx, w, Padding::Reflect);
                    if (map.valid(yy, xx))
                        window.push_back(map.values(yy, xx));
                }
            if (window.empty()) {
                out.values(y, x) = map.values(y, x);
                out.valid(y, x) = false;
            } else {
                out.values(y, x) = median_of(window);
            }
        }
    }
    return out;
}

ParamMap average_filter(const ParamMap& map, int k) {
    check_kernel(map, k);
    const Eigen::Index h = map.rows(), w = map.cols();
    const int half = k / 2;
    ParamMap out(h, w);
    for (Eigen::Index y = 0; y < h; ++y) {
        for (Eigen::Index x = 0; x < w; ++x) {
            double acc = 0.0;
            int count = 0;
            for (int dy = -half; dy <= half; ++dy)
                for (int dx = -half; dx <= half; ++dx) {
                    const Eigen::Index yy = pad_index(y + dy, h, Padding::Reflect);
                    const Eigen::Index xx = pad_index(x + dx, w, Padding::Reflect);
                    if (map.valid(yy, xx)) {
                        acc += map.values(yy, xx);
                        ++count;
                    }
                }
            if (count == 0) {
                out.values(y, x) = map.values(y, x);
                out.valid(y, x) = false;
            } else {
                out.values(y, x) = acc / count;
            }
        }
    }
    return out;
}

ParamMap impute_invalid(const ParamMap& map) {
    if (map.valid.all() || !map.valid.any())
        return map;
    const Eigen::Index h = map.rows(), w = map.cols();
    ParamMap out = map;
    std::vector<double> window;
    for (Eigen::Index y = 0; y < h; ++y) {
        for (Eigen::Index x = 0; x < w; ++x) {
            if (map.valid(y, x))
                continue;
            const int max_half = static_cast<int>(std::max(h, w));
            for (int half = 1; half <= max_half; ++half) {
                window.clear();
                for (Eigen::Index yy = std::max<Eigen::Index>(0, y - half);
                     yy <= std::min(h - 1, y + half); ++yy)
                    for (Eigen::Index xx = std::max<Eigen::Index>(0, x - half);
                         xx <= std::min(w - 1, x + half); ++xx)
                        if (map.valid(yy, xx))
                            window.push_back(map.values(yy, xx));
                if (!window.empty()) {
                    out.values(y, x) = median_of(window);
                    out.valid(y, x) = true;
                    break;
                }
            }
        }
    }
    return out;
}

} // namespace unicorn
