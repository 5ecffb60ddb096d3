#ifndef UNICORN_TRAIN_HPP
#define UNICORN_TRAIN_HPP

#include "unicorn/image.hpp"
#include "unicorn/rng.hpp"
#include "unicorn/score_network.hpp"

#include <cstdint>
#include <vector>

namespace unicorn {

/// Linear per-step decay of the perturbation scale delta, from sigma_max
/// down to sigma_min over total_steps.
struct AnnealingSchedule {
    double sigma_min;
    double sigma_max;
    long total_steps;

    AnnealingSchedule(double min_sigma, double max_sigma, long steps);

    double delta_at(long step) const;
};

struct TrainConfig {
    int batch_size = 32;
    double learning_rate = 2e-4;
    int epochs = 100;
    double weight_decay = 0.01;
    std::uint64_t seed = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_eps = 1e-8;
};

/// Decoupled-weight-decay Adam.
struct AdamWState {
    long step = 0;
    std::vector<double> first_moment;
    std::vector<double> second_moment;

    explicit AdamWState(std::size_t n)
        : first_moment(n, 0.0), second_moment(n, 0.0) {}
};

void adamw_step(std::vector<double>& parameters, const std::vector<double>& gradient,
                AdamWState& state, const TrainConfig& config);

struct LossAndGrad {
    double loss;
    std::vector<double> grad;
};

/// Denoising score-matching loss over a batch:
///   mean over elements of (u + sigma * s(R + sigma * u))^2
/// with u standard normal per pixel and sigma = |z|, z ~ N(0, delta^2),
/// per image. Returns the loss and its parameter gradient.
LossAndGrad ardae_loss(const ScoreNetwork& net, const std::vector<EnvelopeImage>& batch,
                       double delta, Rng& rng);

/// Deterministic variant with caller-supplied noise (finite-difference
/// gradient checks share the draws across evaluations).
LossAndGrad ardae_loss_with_noise(const ScoreNetwork& net,
                                  const std::vector<EnvelopeImage>& batch,
                                  const std::vector<ImageXd>& noise,
                                  const std::vector<double>& sigma,
                                  bool want_grad = true);

/// Full AdamW training loop; mutates the network in place and returns the
/// per-step loss history. On a non-finite loss the parameters are rolled
/// back to the last finite step and divergence_error is thrown.
std::vector<double> train(ScoreNetwork& net, const std::vector<EnvelopeImage>& dataset,
                          const TrainConfig& config, const AnnealingSchedule& schedule,
                          Rng& rng);

} // namespace unicorn

#endif
