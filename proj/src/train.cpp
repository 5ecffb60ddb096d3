#include "unicorn/train.hpp"
#include "unicorn/errors.hpp"
#include "unicorn/tensor_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace unicorn {

AnnealingSchedule::AnnealingSchedule(double min_sigma, double max_sigma, long steps)
    : sigma_min(min_sigma), sigma_max(max_sigma), total_steps(steps) {
    if (!(sigma_min > 0.0) || !(sigma_min <= sigma_max))
        throw config_error("AnnealingSchedule: need 0 < sigma_min <= sigma_max");
    if (total_steps < 1)
        throw config_error("AnnealingSchedule: total_steps must be positive");
}

double AnnealingSchedule::delta_at(long step) const {
    const long t = std::clamp(step, 0L, total_steps);
    return sigma_max + (sigma_min - sigma_max) * static_cast<double>(t) /
                           static_cast<double>(total_steps);
}

void adamw_step(std::vector<double>& parameters, const std::vector<double>& gradient,
                AdamWState& state, const TrainConfig& config) {
    if (parameters.size() != gradient.size() ||
        parameters.size() != state.first_moment.size())
        throw config_error("adamw_step: size mismatch");
    state.step += 1;
    const double bias1 = 1.0 - std::pow(config.beta1, static_cast<double>(state.step));
    const double bias2 = 1.0 - std::pow(config.beta2, static_cast<double>(state.step));
    for (std::size_t i = 0; i < parameters.size(); ++i) {
        const double g = gradient[i];
        state.first_moment[i] = config.beta1 * state.first_moment[i] + (1.0 - config.beta1) * g;
        state.second_moment[i] =
            config.beta2 * state.second_moment[i] + (1.0 - config.beta2) * g * g;
        const double m_hat = state.first_moment[i] / bias1;
        const double v_hat = state.second_moment[i] / bias2;
        parameters[i] -= config.learning_rate *
                         (m_hat / (std::sqrt(v_hat) + config.adam_eps) +
                          config.weight_decay * parameters[i]);
    }
}

namespace {

Tensor image_to_tensor(const ImageXd& image) {
    Tensor t(1, static_cast<int>(image.rows()), static_cast<int>(image.cols()));
    for (int y = 0; y < t.h; ++y)
        for (int x = 0; x < t.w; ++x)
            t.at(0, y, x) = image(y, x);
    return t;
}

} // namespace

LossAndGrad ardae_loss_with_noise(const ScoreNetwork& net,
                                  const std::vector<EnvelopeImage>& batch,
                                  const std::vector<ImageXd>& noise,
                                  const std::vector<double>& sigma, bool want_grad) {
    if (batch.empty())
        throw config_error("ardae_loss: empty batch");
    if (noise.size() != batch.size() || sigma.size() != batch.size())
        throw config_error("ardae_loss: noise draws do not match batch");

    const int divisor = net.topology().spatial_divisor();
    std::size_t total_elements = 0;
    for (const auto& image : batch)
        total_elements += static_cast<std::size_t>(image.size());

    const std::size_t n = batch.size();
    std::vector<double> losses(n, 0.0);
    std::vector<std::vector<double>> grads(
        n, std::vector<double>(want_grad ? net.parameter_count() : 0, 0.0));

#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
        const ImageXd& image = batch[static_cast<std::size_t>(i)];
        const ImageXd& u = noise[static_cast<std::size_t>(i)];
        const double s = sigma[static_cast<std::size_t>(i)];
        const int h = static_cast<int>(image.rows());
        const int w = static_cast<int>(image.cols());
        const int padded_h = (h + divisor - 1) / divisor * divisor;
        const int padded_w = (w + divisor - 1) / divisor * divisor;

        Tensor in = image_to_tensor(image + s * u);
        const bool padded = padded_h != h || padded_w != w;
        if (padded)
            in = tensor_ops::reflect_pad_br(in, padded_h, padded_w);

        NetworkCache cache;
        const Tensor out = net.forward_cached(in, cache);

        // residual = u + sigma * s_theta(R + sigma u), on the cropped region
        double local_loss = 0.0;
        Tensor grad_out(1, padded_h, padded_w);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                const double resid = u(y, x) + s * out.at(0, y, x);
                local_loss += resid * resid;
                grad_out.at(0, y, x) =
                    2.0 * s * resid / static_cast<double>(total_elements);
            }
        losses[static_cast<std::size_t>(i)] = local_loss;
        if (want_grad)
            net.backward(cache, grad_out, grads[static_cast<std::size_t>(i)]);
    }

    LossAndGrad result;
    result.loss = std::accumulate(losses.begin(), losses.end(), 0.0) /
                  static_cast<double>(total_elements);
    if (want_grad) {
        result.grad.assign(net.parameter_count(), 0.0);
        for (const auto& g : grads)
            for (std::size_t j = 0; j < g.size(); ++j)
                result.grad[j] += g[j];
    }
    if (!std::isfinite(result.loss))
        throw divergence_error("ardae_loss: non-finite loss");
    return result;
}

LossAndGrad ardae_loss(const ScoreNetwork& net, const std::vector<EnvelopeImage>& batch,
                       double delta, Rng& rng) {
    if (!(delta > 0.0))
        throw config_error("ardae_loss: delta must be positive");
    std::vector<ImageXd> noise;
    std::vector<double> sigma;
    noise.reserve(batch.size());
    sigma.reserve(batch.size());
    for (const auto& image : batch) {
        sigma.push_back(std::abs(delta * rng.normal()));
        ImageXd u(image.rows(), image.cols());
        for (Eigen::Index y = 0; y < u.rows(); ++y)
            for (Eigen::Index x = 0; x < u.cols(); ++x)
                u(y, x) = rng.normal();
        noise.push_back(std::move(u));
    }
    return ardae_loss_with_noise(net, batch, noise, sigma);
}

std::vector<double> train(ScoreNetwork& net, const std::vector<EnvelopeImage>& dataset,
                          const TrainConfig& config, const AnnealingSchedule& schedule,
                          Rng& rng) {
    if (dataset.empty())
        throw config_error("train: empty dataset");
    if (config.batch_size < 1 || config.epochs < 1 || !(config.learning_rate > 0.0))
        throw config_error("train: invalid config");

    AdamWState state(net.parameter_count());
    std::vector<double> history;
    std::vector<std::size_t> order(dataset.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> last_good = net.parameters();
    long step = 0;

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        // Fisher-Yates shuffle driven by the explicit stream.
        for (std::size_t i = order.size(); i > 1; --i) {
            const std::size_t j = rng.next_u64() % i;
            std::swap(order[i - 1], order[j]);
        }
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::size_t end =
                std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
            std::vector<EnvelopeImage> batch;
            batch.reserve(end - start);
            for (std::size_t i = start; i < end; ++i)
                batch.push_back(dataset[order[i]]);
            const double delta = schedule.delta_at(step);
            LossAndGrad lg;
            try {
                lg = ardae_loss(net, batch, delta, rng);
            } catch (const divergence_error&) {
                net.parameters() = last_good;
                throw divergence_error("train: diverged at step " + std::to_string(step));
            }
            last_good = net.parameters();
            adamw_step(net.parameters(), lg.grad, state, config);
            history.push_back(lg.loss);
            ++step;
        }
    }
    return history;
}

} // namespace unicorn
