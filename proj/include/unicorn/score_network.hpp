#ifndef UNICORN_SCORE_NETWORK_HPP
#define UNICORN_SCORE_NETWORK_HPP

#include "unicorn/image.hpp"
#include "unicorn/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace unicorn {

/// Channel-major dense tensor, index (c, y, x).
struct Tensor {
    int c = 0, h = 0, w = 0;
    std::vector<double> v;

    Tensor() = default;
    Tensor(int channels, int height, int width)
        : c(channels), h(height), w(width),
          v(static_cast<std::size_t>(channels) * height * width, 0.0) {}

    double& at(int ch, int y, int x) {
        return v[(static_cast<std::size_t>(ch) * h + y) * w + x];
    }
    double at(int ch, int y, int x) const {
        return v[(static_cast<std::size_t>(ch) * h + y) * w + x];
    }
    std::size_t size() const { return v.size(); }
};

/// Encoder-decoder layout: `levels` resolution levels, channel count
/// doubling per level from `base_channels`, two k x k convolutions per
/// level, SiLU activations, 2x average pooling down, nearest-neighbor up,
/// skip concatenation, 1x1 output head.
struct Topology {
    int levels = 2;
    int base_channels = 16;
    int kernel = 3;
    int in_channels = 1;

    int channels_at(int level) const { return base_channels << level; }
    int spatial_divisor() const { return 1 << (levels - 1); }
};

/// Forward tape consumed by ScoreNetwork::backward.
struct NetworkCache {
    std::vector<Tensor> conv_in;     // input of each conv, in application order
    std::vector<Tensor> conv_preact; // pre-activation conv output (head unused)
};

class ScoreNetwork {
  public:
    explicit ScoreNetwork(const Topology& topology);
    ~ScoreNetwork();
    ScoreNetwork(const ScoreNetwork&);
    ScoreNetwork& operator=(const ScoreNetwork&);
    ScoreNetwork(ScoreNetwork&&) noexcept;
    ScoreNetwork& operator=(ScoreNetwork&&) noexcept;

    const Topology& topology() const { return topo_; }
    std::size_t parameter_count() const { return params_.size(); }
    std::vector<double>& parameters() { return params_; }
    const std::vector<double>& parameters() const { return params_; }

    /// He-uniform weights, zero biases, zero-initialized output head.
    void init_weights(Rng& rng);

    /// Score image for an envelope image. Inputs whose sides are not
    /// divisible by 2^(levels-1) are reflect-padded and the output cropped.
    ScoreImage forward(const EnvelopeImage& image) const;

    /// Forward pass recording the tape needed by backward().
    Tensor forward_cached(const Tensor& input, NetworkCache& cache) const;

    /// Reverse-mode pass. Accumulates d(loss)/d(theta) into grad_params
    /// (which must be parameter_count() long) and optionally returns
    /// d(loss)/d(input).
    void backward(const NetworkCache& cache, const Tensor& grad_output,
                  std::vector<double>& grad_params, Tensor* grad_input = nullptr) const;

  private:
    struct ConvLayer {
        int in_c, out_c, k;
        std::size_t weight_offset, bias_offset;
    };

    Tensor apply_conv(const ConvLayer& conv, const Tensor& in) const;

    Topology topo_;
    std::vector<ConvLayer> convs_; // encoder pairs, decoder pairs, head
    std::vector<double> params_;
};

/// Checkpoint I/O (magic "NKSN"). Round-trips topology and parameters
/// bit-exactly; rejects truncation, trailing bytes and version mismatches.
void save_network(const ScoreNetwork& net, const std::string& path);
ScoreNetwork load_network(const std::string& path);

} // namespace unicorn

#endif
