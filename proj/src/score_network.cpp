#include "unicorn/score_network.hpp"
#include "unicorn/errors.hpp"
#include "unicorn/tensor_ops.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

namespace unicorn {

namespace tensor_ops {

Tensor conv2d(const Tensor& in, const double* weights, const double* bias, int out_c,
              int k) {
    const int half = k / 2;
    Tensor out(out_c, in.h, in.w);
    for (int co = 0; co < out_c; ++co) {
        for (int y = 0; y < in.h; ++y) {
            for (int x = 0; x < in.w; ++x) {
                double acc = bias[co];
                for (int ci = 0; ci < in.c; ++ci) {
                    const double* wrow =
                        weights + ((static_cast<std::size_t>(co) * in.c + ci) * k) * k;
                    for (int dy = -half; dy <= half; ++dy) {
                        const int yy = y + dy;
                        if (yy < 0 || yy >= in.h)
                            continue;
                        for (int dx = -half; dx <= half; ++dx) {
                            const int xx = x + dx;
                            if (xx < 0 || xx >= in.w)
                                continue;
                            acc += wrow[(dy + half) * k + (dx + half)] * in.at(ci, yy, xx);
                        }
                    }
                }
                out.at(co, y, x) = acc;
            }
        }
    }
    return out;
}

void conv2d_backward(const Tensor& in, const double* weights, int out_c, int k,
                     const Tensor& grad_out, double* grad_weights, double* grad_bias,
                     Tensor* grad_in) {
    const int half = k / 2;
    if (grad_in)
        *grad_in = Tensor(in.c, in.h, in.w);
    for (int co = 0; co < out_c; ++co) {
        double gb = 0.0;
        for (int y = 0; y < in.h; ++y)
            for (int x = 0; x < in.w; ++x)
                gb += grad_out.at(co, y, x);
        grad_bias[co] += gb;
        for (int ci = 0; ci < in.c; ++ci) {
            const std::size_t base = (static_cast<std::size_t>(co) * in.c + ci) * k * k;
            for (int dy = -half; dy <= half; ++dy) {
                for (int dx = -half; dx <= half; ++dx) {
                    double gw = 0.0;
                    for (int y = 0; y < in.h; ++y) {
                        const int yy = y + dy;
                        if (yy < 0 || yy >= in.h)
                            continue;
                        for (int x = 0; x < in.w; ++x) {
                            const int xx = x + dx;
                            if (xx < 0 || xx >= in.w)
                                continue;
                            const double g = grad_out.at(co, y, x);
                            gw += g * in.at(ci, yy, xx);
                            if (grad_in)
                                grad_in->at(ci, yy, xx) +=
                                    g * weights[base + (dy + half) * k + (dx + half)];
                        }
                    }
                    grad_weights[base + (dy + half) * k + (dx + half)] += gw;
                }
            }
        }
    }
}

void silu_inplace(Tensor& t) {
    for (auto& z : t.v) {
        const double s = 1.0 / (1.0 + std::exp(-z));
        z = z * s;
    }
}

Tensor silu_backward(const Tensor& preact, const Tensor& grad_out) {
    Tensor g = grad_out;
    for (std::size_t i = 0; i < g.v.size(); ++i) {
        const double z = preact.v[i];
        const double s = 1.0 / (1.0 + std::exp(-z));
        g.v[i] *= s * (1.0 + z * (1.0 - s));
    }
    return g;
}

Tensor avgpool2(const Tensor& in) {
    Tensor out(in.c, in.h / 2, in.w / 2);
    for (int c = 0; c < in.c; ++c)
        for (int y = 0; y < out.h; ++y)
            for (int x = 0; x < out.w; ++x)
                out.at(c, y, x) = 0.25 * (in.at(c, 2 * y, 2 * x) + in.at(c, 2 * y, 2 * x + 1) +
                                          in.at(c, 2 * y + 1, 2 * x) +
                                          in.at(c, 2 * y + 1, 2 * x + 1));
    return out;
}

Tensor avgpool2_backward(const Tensor& grad_out) {
    Tensor g(grad_out.c, grad_out.h * 2, grad_out.w * 2);
    for (int c = 0; c < grad_out.c; ++c)
        for (int y = 0; y < grad_out.h; ++y)
            for (int x = 0; x < grad_out.w; ++x) {
                const double q = 0.25 * grad_out.at(c, y, x);
                g.at(c, 2 * y, 2 * x) = q;
                g.at(c, 2 * y, 2 * x + 1) = q;
                g.at(c, 2 * y + 1, 2 * x) = q;
                g.at(c, 2 * y + 1, 2 * x + 1) = q;
            }
    return g;
}

Tensor upsample2(const Tensor& in) {
    Tensor out(in.c, in.h * 2, in.w * 2);
    for (int c = 0; c < in.c; ++c)
        for (int y = 0; y < out.h; ++y)
            for (int x = 0; x < out.w; ++x)
                out.at(c, y, x) = in.at(c, y / 2, x / 2);
    return out;
}

Tensor upsample2_backward(const Tensor& grad_out) {
    Tensor g(grad_out.c, grad_out.h / 2, grad_out.w / 2);
    for (int c = 0; c < grad_out.c; ++c)
        for (int y = 0; y < grad_out.h; ++y)
            for (int x = 0; x < grad_out.w; ++x)
                g.at(c, y / 2, x / 2) += grad_out.at(c, y, x);
    return g;
}

Tensor concat_channels(const Tensor& a, const Tensor& b) {
    Tensor out(a.c + b.c, a.h, a.w);
    std::copy(a.v.begin(), a.v.end(), out.v.begin());
    std::copy(b.v.begin(), b.v.end(), out.v.begin() + static_cast<std::ptrdiff_t>(a.v.size()));
    return out;
}

void split_channels(const Tensor& grad, int first_c, Tensor& ga, Tensor& gb) {
    ga = Tensor(first_c, grad.h, grad.w);
    gb = Tensor(grad.c - first_c, grad.h, grad.w);
    std::copy(grad.v.begin(), grad.v.begin() + static_cast<std::ptrdiff_t>(ga.v.size()),
              ga.v.begin());
    std::copy(grad.v.begin() + static_cast<std::ptrdiff_t>(ga.v.size()), grad.v.end(),
              gb.v.begin());
}

Tensor reflect_pad_br(const Tensor& in, int target_h, int target_w) {
    Tensor out(in.c, target_h, target_w);
    for (int c = 0; c < in.c; ++c)
        for (int y = 0; y < target_h; ++y) {
            const int yy = y < in.h ? y : 2 * in.h - 1 - y;
            for (int x = 0; x < target_w; ++x) {
                const int xx = x < in.w ? x : 2 * in.w - 1 - x;
                out.at(c, y, x) = in.at(c, yy, xx);
            }
        }
    return out;
}

Tensor reflect_pad_br_backward(const Tensor& grad_padded, int orig_h, int orig_w) {
    Tensor g(grad_padded.c, orig_h, orig_w);
    for (int c = 0; c < grad_padded.c; ++c)
        for (int y = 0; y < grad_padded.h; ++y) {
            const int yy = y < orig_h ? y : 2 * orig_h - 1 - y;
            for (int x = 0; x < grad_padded.w; ++x) {
                const int xx = x < orig_w ? x : 2 * orig_w - 1 - x;
                g.at(c, yy, xx) += grad_padded.at(c, y, x);
            }
        }
    return g;
}

} // namespace tensor_ops

using namespace tensor_ops;

ScoreNetwork::ScoreNetwork(const Topology& topology) : topo_(topology) {
    if (topo_.levels < 1 || topo_.base_channels < 1 || topo_.in_channels < 1)
        throw config_error("ScoreNetwork: topology counts must be positive");
    if (topo_.kernel < 1 || topo_.kernel % 2 == 0)
        throw config_error("ScoreNetwork: kernel size must be odd");

    std::size_t offset = 0;
    auto add_conv = [&](int in_c, int out_c, int k) {
        ConvLayer layer{in_c, out_c, k, offset,
                        offset + static_cast<std::size_t>(out_c) * in_c * k * k};
        offset = layer.bias_offset + out_c;
        convs_.push_back(layer);
    };
    for (int l = 0; l < topo_.levels; ++l) {
        const int in_c = l == 0 ? topo_.in_channels : topo_.channels_at(l - 1);
        add_conv(in_c, topo_.channels_at(l), topo_.kernel);
        add_conv(topo_.channels_at(l), topo_.channels_at(l), topo_.kernel);
    }
    for (int l = topo_.levels - 2; l >= 0; --l) {
        add_conv(topo_.channels_at(l + 1) + topo_.channels_at(l), topo_.channels_at(l),
                 topo_.kernel);
        add_conv(topo_.channels_at(l), topo_.channels_at(l), topo_.kernel);
    }
    add_conv(topo_.channels_at(0), 1, 1); // output head
    params_.assign(offset, 0.0);
}

ScoreNetwork::~ScoreNetwork() = default;
ScoreNetwork::ScoreNetwork(const ScoreNetwork&) = default;
ScoreNetwork& ScoreNetwork::operator=(const ScoreNetwork&) = default;
ScoreNetwork::ScoreNetwork(ScoreNetwork&&) noexcept = default;
ScoreNetwork& ScoreNetwork::operator=(ScoreNetwork&&) noexcept = default;

void ScoreNetwork::init_weights(Rng& rng) {
    for (std::size_t i = 0; i + 1 < convs_.size(); ++i) {
        const ConvLayer& conv = convs_[i];
        const double fan_in = static_cast<double>(conv.in_c) * conv.k * conv.k;
        const double limit = std::sqrt(6.0 / fan_in);
        const std::size_t n_weights =
            static_cast<std::size_t>(conv.out_c) * conv.in_c * conv.k * conv.k;
        for (std::size_t j = 0; j < n_weights; ++j)
            params_[conv.weight_offset + j] = limit * (2.0 * rng.uniform() - 1.0);
        for (int j = 0; j < conv.out_c; ++j)
            params_[conv.bias_offset + j] = 0.0;
    }
    // Head stays zero: the initial score estimate is identically zero.
    const ConvLayer& head = convs_.back();
    const std::size_t n = params_.size() - head.weight_offset;
    std::fill_n(params_.begin() + static_cast<std::ptrdiff_t>(head.weight_offset), n, 0.0);
}

Tensor ScoreNetwork::apply_conv(const ConvLayer& conv, const Tensor& in) const {
    return conv2d(in, params_.data() + conv.weight_offset, params_.data() + conv.bias_offset,
                  conv.out_c, conv.k);
}

Tensor ScoreNetwork::forward_cached(const Tensor& input, NetworkCache& cache) const {
    const int divisor = topo_.spatial_divisor();
    if (input.c != topo_.in_channels)
        throw config_error("ScoreNetwork: wrong input channel count");
    if (input.h % divisor != 0 || input.w % divisor != 0)
        throw config_error("ScoreNetwork: input not divisible by 2^(levels-1)");
    if (input.h < divisor || input.w < divisor)
        throw config_error("ScoreNetwork: input too small for topology");

    cache.conv_in.clear();
    cache.conv_preact.clear();
    std::size_t ci = 0;
    auto conv_silu = [&](Tensor x) {
        cache.conv_in.push_back(x);
        Tensor z = apply_conv(convs_[ci], x);
        cache.conv_preact.push_back(z);
        ++ci;
        silu_inplace(z);
        return z;
    };

    std::vector<Tensor> skips;
    Tensor x = input;
    for (int l = 0; l < topo_.levels; ++l) {
        x = conv_silu(std::move(x));
        x = conv_silu(std::move(x));
        if (l < topo_.levels - 1) {
            skips.push_back(x);
            x = avgpool2(x);
        }
    }
    for (int l = topo_.levels - 2; l >= 0; --l) {
        x = concat_channels(upsample2(x), skips[static_cast<std::size_t>(l)]);
        x = conv_silu(std::move(x));
        x = conv_silu(std::move(x));
    }
    cache.conv_in.push_back(x);
    Tensor out = apply_conv(convs_[ci], x);
    cache.conv_preact.emplace_back(); // head has no activation
    return out;
}

void ScoreNetwork::backward(const NetworkCache& cache, const Tensor& grad_output,
                            std::vector<double>& grad_params, Tensor* grad_input) const {
    if (grad_params.size() != params_.size())
        throw config_error("ScoreNetwork::backward: gradient buffer size mismatch");
    std::size_t ci = convs_.size() - 1;
    Tensor g = grad_output;

    auto conv_back = [&](Tensor grad_out_local) {
        const ConvLayer& conv = convs_[ci];
        Tensor gin;
        conv2d_backward(cache.conv_in[ci], params_.data() + conv.weight_offset, conv.out_c,
                        conv.k, grad_out_local, grad_params.data() + conv.weight_offset,
                        grad_params.data() + conv.bias_offset, &gin);
        --ci;
        return gin;
    };
    auto silu_conv_back = [&](Tensor grad_out_local) {
        return conv_back(silu_backward(cache.conv_preact[ci], grad_out_local));
    };

    g = conv_back(std::move(g)); // head

    std::vector<Tensor> skip_grad(static_cast<std::size_t>(std::max(topo_.levels - 1, 0)));
    for (int l = 0; l <= topo_.levels - 2; ++l) {
        g = silu_conv_back(std::move(g));
        g = silu_conv_back(std::move(g));
        Tensor g_up, g_skip;
        split_channels(g, topo_.channels_at(l + 1), g_up, g_skip);
        skip_grad[static_cast<std::size_t>(l)] = std::move(g_skip);
        g = upsample2_backward(g_up);
    }
    for (int l = topo_.levels - 1; l >= 0; --l) {
        if (l < topo_.levels - 1) {
            g = avgpool2_backward(g);
            const Tensor& sg = skip_grad[static_cast<std::size_t>(l)];
            for (std::size_t i = 0; i < g.v.size(); ++i)
                g.v[i] += sg.v[i];
        }
        g = silu_conv_back(std::move(g));
        g = silu_conv_back(std::move(g));
    }
    if (grad_input)
        *grad_input = std::move(g);
}

ScoreImage ScoreNetwork::forward(const EnvelopeImage& image) const {
    const int h = static_cast<int>(image.rows());
    const int w = static_cast<int>(image.cols());
    const int divisor = topo_.spatial_divisor();
    const int padded_h = (h + divisor - 1) / divisor * divisor;
    const int padded_w = (w + divisor - 1) / divisor * divisor;
    if (padded_h >= 2 * h + 1 || padded_w >= 2 * w + 1)
        throw config_error("ScoreNetwork::forward: image too small to pad");

    Tensor in(1, h, w);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            in.at(0, y, x) = image(y, x);
    if (padded_h != h || padded_w != w)
        in = reflect_pad_br(in, padded_h, padded_w);

    NetworkCache cache;
    const Tensor out = forward_cached(in, cache);

    ScoreImage score(h, w);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            score(y, x) = out.at(0, y, x);
    return score;
}

namespace {

void put_u32(std::string& buf, std::uint32_t v) {
    for (int i = 0; i < 4; ++i)
        buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& buf, std::uint64_t v) {
    for (int i = 0; i < 8; ++i)
        buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

class Reader {
  public:
    Reader(const std::string& data, const std::string& what) : data_(data), what_(what) {}

    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data_[pos_++])) << (8 * i);
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_++])) << (8 * i);
        return v;
    }
    double f64() {
        const std::uint64_t bits = u64();
        double v;
        std::memcpy(&v, &bits, 8);
        return v;
    }
    void expect_magic(const char* magic) {
        need(4);
        if (std::memcmp(data_.data() + pos_, magic, 4) != 0)
            throw format_error(what_ + ": bad magic");
        pos_ += 4;
    }
    void expect_end() const {
        if (pos_ != data_.size())
            throw format_error(what_ + ": trailing bytes after payload");
    }

  private:
    void need(std::size_t n) const {
        if (pos_ + n > data_.size())
            throw format_error(what_ + ": truncated file");
    }
    const std::string& data_;
    std::string what_;
    std::size_t pos_ = 0;
};

std::string read_file(const std::string& path, const std::string& what) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw format_error(what + ": cannot open " + path);
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return data;
}

constexpr std::uint32_t kCheckpointVersion = 1;

} // namespace

void save_network(const ScoreNetwork& net, const std::string& path) {
    std::string buf;
    buf.append("NKSN", 4);
    put_u32(buf, kCheckpointVersion);
    const Topology& topo = net.topology();
    put_u32(buf, static_cast<std::uint32_t>(topo.levels));
    put_u32(buf, static_cast<std::uint32_t>(topo.base_channels));
    put_u32(buf, static_cast<std::uint32_t>(topo.kernel));
    put_u32(buf, static_cast<std::uint32_t>(topo.in_channels));
    put_u64(buf, net.parameter_count());
    for (double p : net.parameters()) {
        std::uint64_t bits;
        std::memcpy(&bits, &p, 8);
        put_u64(buf, bits);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !out.write(buf.data(), static_cast<std::streamsize>(buf.size())))
        throw format_error("save_network: cannot write " + path);
}

ScoreNetwork load_network(const std::string& path) {
    const std::string data = read_file(path, "load_network");
    Reader reader(data, "load_network");
    reader.expect_magic("NKSN");
    const std::uint32_t version = reader.u32();
    if (version != kCheckpointVersion)
        throw format_error("load_network: version " + std::to_string(version) +
                           " unsupported, expected " + std::to_string(kCheckpointVersion));
    Topology topo;
    topo.levels = static_cast<int>(reader.u32());
    topo.base_channels = static_cast<int>(reader.u32());
    topo.kernel = static_cast<int>(reader.u32());
    topo.in_channels = static_cast<int>(reader.u32());
    if (topo.levels < 1 || topo.levels > 16 || topo.base_channels < 1 ||
        topo.base_channels > 4096 || topo.kernel < 1 || topo.kernel > 31 ||
        topo.kernel % 2 == 0 || topo.in_channels < 1 || topo.in_channels > 64)
        throw format_error("load_network: invalid topology descriptor");
    const std::uint64_t count = reader.u64();
    // Cross-check the descriptor arithmetically (in floating point, so a
    // forged header cannot overflow or force a huge allocation) before any
    // network is constructed.
    const double k2 = static_cast<double>(topo.kernel) * topo.kernel;
    double expected = 0.0;
    const auto conv = [&](double in_c, double out_c, double kk) {
        expected += out_c * in_c * kk + out_c;
    };
    for (int l = 0; l < topo.levels; ++l) {
        const double c = static_cast<double>(topo.channels_at(l));
        conv(l == 0 ? topo.in_channels : topo.channels_at(l - 1), c, k2);
        conv(c, c, k2);
    }
    for (int l = topo.levels - 2; l >= 0; --l) {
        const double c = static_cast<double>(topo.channels_at(l));
        conv(static_cast<double>(topo.channels_at(l + 1)) + c, c, k2);
        conv(c, c, k2);
    }
    conv(static_cast<double>(topo.channels_at(0)), 1.0, 1.0); // output head
    if (expected > 1e9 || static_cast<double>(count) != expected)
        throw format_error("load_network: parameter count does not match topology");
    if (data.size() != 32 + 8 * static_cast<std::size_t>(count))
        throw format_error("load_network: payload size does not match header");
    ScoreNetwork net(topo);
    if (count != net.parameter_count())
        throw format_error("load_network: parameter count does not match topology");
    for (auto& p : net.parameters())
        p = reader.f64();
    reader.expect_end();
    return net;
}

} // namespace unicorn
