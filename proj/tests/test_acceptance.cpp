// Acceptance suite: one printed PASS/FAIL line per criterion.
//
// Each criterion is self-contained and checks the toolkit end to end
// against an independent oracle (quadrature, finite differences, grid
// search, Monte Carlo) or a published-protocol analog, with its runtime
// printed alongside the verdict.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "unicorn/classical.hpp"
#include "unicorn/errors.hpp"
#include "unicorn/estimator.hpp"
#include "unicorn/metrics.hpp"
#include "unicorn/nakagami.hpp"
#include "unicorn/pipeline.hpp"
#include "unicorn/raster_io.hpp"
#include "unicorn/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

using namespace unicorn;
namespace fs = std::filesystem;

namespace {

struct Stopwatch {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    }
};

void report(int criterion, bool pass, double seconds, const char* summary) {
    std::printf("[acceptance] criterion %2d: %s  (%.1f s)  %s\n", criterion,
                pass ? "PASS" : "FAIL", seconds, summary);
    std::fflush(stdout);
}

double rel_err(double a, double b) {
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-6});
}

// Fourth-order five-point central difference of a scalar function of one
// network parameter; higher order than the reverse-mode check demands so
// stencil truncation never dominates the comparison.
template <typename F>
double fd_gradient(F&& eval, double& param, double h) {
    const double saved = param;
    param = saved + h;
    const double f1 = eval();
    param = saved - h;
    const double f2 = eval();
    param = saved + 2.0 * h;
    const double f3 = eval();
    param = saved - 2.0 * h;
    const double f4 = eval();
    param = saved;
    return (8.0 * (f1 - f2) - (f3 - f4)) / (12.0 * h);
}

std::vector<EnvelopeImage> nakagami_fields(int count, int h, int w, double m,
                                           double omega, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<EnvelopeImage> out;
    out.reserve(count);
    const NakagamiParams params(m, omega);
    for (int i = 0; i < count; ++i) {
        EnvelopeImage im(h, w);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                im(y, x) = nakagami::sample_one(params, rng);
        out.push_back(std::move(im));
    }
    return out;
}

std::string read_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::string((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
}

void write_bytes(const fs::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

} // namespace

TEST_CASE("criterion 1: closed-form inversion is exact off the singular locus") {
    Stopwatch clock;
    Rng rng(171);
    int checked = 0;
    double worst = 0.0;
    while (checked < 1000) {
        const double m = 0.3 + 2.7 * rng.uniform();
        const double omega = 0.5 + 1.5 * rng.uniform();
        const NakagamiParams params(m, omega);
        const double r = nakagami::sample_one(params, rng);
        if (std::abs(1.0 - r * r / omega) <= 0.05)
            continue; // criterion samples r off the singular locus
        const double score = nakagami::analytic_score(r, params);
        const double m_hat = pointwise_m(r, score, omega);
        worst = std::max(worst, std::abs(m_hat - m));
        ++checked;
    }
    const double elapsed = clock.seconds();
    const bool pass = worst < 1e-9 && elapsed < 1.0;
    CHECK(worst < 1e-9);
    CHECK(elapsed < 1.0);
    report(1, pass, elapsed,
           "pointwise inversion of the analytic score recovers m within 1e-9 "
           "(1000 random parameter draws)");
}

TEST_CASE("criterion 2: moment estimator recovers m on 1e6-sample windows") {
    Stopwatch clock;
    bool pass = true;
    for (const double m : {0.6, 1.0, 1.6}) {
        std::vector<double> estimates;
        for (int seed = 0; seed < 20; ++seed) {
            Rng rng(9000 + 100 * seed + static_cast<int>(10 * m));
            const std::vector<double> window =
                nakagami::sample(NakagamiParams(m, 1.0), 1000000, rng);
            estimates.push_back(moment_estimate_window(window));
        }
        std::nth_element(estimates.begin(), estimates.begin() + 10, estimates.end());
        const double median = estimates[10];
        CHECK(std::abs(median - m) < 0.01);
        pass = pass && std::abs(median - m) < 0.01;
    }
    const double elapsed = clock.seconds();
    CHECK(elapsed < 10.0);
    pass = pass && elapsed < 10.0;
    report(2, pass, elapsed,
           "Monte Carlo windows of N=1e6 at m in {0.6, 1.0, 1.6} recover m "
           "within 0.01 (median of 20 seeds)");
}

TEST_CASE("criterion 3: ML window estimate matches a dense likelihood grid") {
    Stopwatch clock;
    Rng rng(333);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const double m = 0.3 + 2.7 * rng.uniform();
        const double omega = 0.5 + 1.5 * rng.uniform();
        const std::vector<double> window =
            nakagami::sample(NakagamiParams(m, omega), 1000, rng);

        // Independent oracle: profile log-likelihood on sufficient statistics
        //   LL(m) = N (ln 2 - lnGamma(m) + m ln(m / Omega-hat))
        //           + (2m - 1) sum(ln r) - m N,  Omega-hat = mean(r^2),
        // maximized by brute force on a coarse-then-fine grid over [0.05, 10].
        const double n = static_cast<double>(window.size());
        double sum_log = 0.0, sum_sq = 0.0;
        for (const double r : window) {
            sum_log += std::log(r);
            sum_sq += r * r;
        }
        const double omega_hat = sum_sq / n;
        const auto profile_ll = [&](double shape) {
            return n * (std::log(2.0) - std::lgamma(shape) +
                        shape * std::log(shape / omega_hat)) +
                   (2.0 * shape - 1.0) * sum_log - shape * n;
        };
        const auto grid_argmax = [&](double lo, double hi, double step) {
            double best_m = lo, best_ll = profile_ll(lo);
            for (double shape = lo + step; shape <= hi; shape += step)
                if (const double ll = profile_ll(shape); ll > best_ll) {
                    best_ll = ll;
                    best_m = shape;
                }
            return best_m;
        };
        const double coarse = grid_argmax(0.05, 10.0, 0.005);
        const double oracle = grid_argmax(std::max(0.05, coarse - 0.01),
                                          std::min(10.0, coarse + 0.01), 1e-5);

        const double ml = ml_estimate_window(window);
        worst = std::max(worst, std::abs(ml - oracle));
    }
    const double elapsed = clock.seconds();
    const bool pass = worst < 1e-3 && elapsed < 30.0;
    CHECK(worst < 1e-3);
    CHECK(elapsed < 30.0);
    report(3, pass, elapsed,
           "ml_estimate_window matches dense profile-likelihood grid search "
           "within 1e-3 on 100 random 1e3-sample windows");
}

TEST_CASE("criterion 4: reverse-mode loss gradients match finite differences") {
    Stopwatch clock;
    Topology topo;
    topo.levels = 2;
    topo.base_channels = 2;
    ScoreNetwork net(topo);
    REQUIRE(net.parameter_count() <= 500);
    Rng rng(44);
    net.init_weights(rng);
    // The output head starts at zero; nudge it so its gradients are exercised.
    for (double& p : net.parameters())
        if (p == 0.0)
            p = 0.05 * rng.normal();

    const std::vector<EnvelopeImage> batch = nakagami_fields(2, 8, 8, 1.0, 1.0, 45);
    std::vector<ImageXd> noise;
    for (int i = 0; i < 2; ++i) {
        ImageXd u(8, 8);
        for (int y = 0; y < 8; ++y)
            for (int x = 0; x < 8; ++x)
                u(y, x) = rng.normal();
        noise.push_back(std::move(u));
    }
    const std::vector<double> sigma = {0.12, 0.08};

    const std::vector<double> grad =
        ardae_loss_with_noise(net, batch, noise, sigma, true).grad;
    const auto loss_only = [&] {
        return ardae_loss_with_noise(net, batch, noise, sigma, false).loss;
    };
    double worst = 0.0;
    for (std::size_t i = 0; i < net.parameter_count(); i += 3) {
        const double fd = fd_gradient(loss_only, net.parameters()[i], 5e-4);
        worst = std::max(worst, rel_err(grad[i], fd));
    }
    const double elapsed = clock.seconds();
    const bool pass = worst < 1e-5 && elapsed < 60.0;
    CHECK(worst < 1e-5);
    CHECK(elapsed < 60.0);
    report(4, pass, elapsed,
           "loss gradient vs central finite differences, shared noise, "
           "relative error < 1e-5 on a <=500-parameter network");
}

TEST_CASE("criterion 5: zero network pins the loss at the noise floor") {
    Stopwatch clock;
    Topology topo;
    topo.base_channels = 4;
    ScoreNetwork net(topo); // freshly constructed: all parameters zero
    const std::vector<EnvelopeImage> images = nakagami_fields(64, 32, 32, 1.0, 1.0, 55);
    Rng rng(56);
    const double loss = ardae_loss(net, images, 0.1, rng).loss;
    const double elapsed = clock.seconds();
    const bool pass = std::abs(loss - 1.0) <= 0.05;
    CHECK(loss == doctest::Approx(1.0).epsilon(0.05));
    report(5, pass, elapsed,
           "with s identically zero the per-element loss over 64 images is "
           "1.0 +/- 0.05");
}

TEST_CASE("criterion 6: trained score approximates the analytic score") {
    Stopwatch clock;
    // 512 i.i.d. 32x32 fields at m = 1, Omega = 1.
    Rng data_rng(1000);
    std::vector<EnvelopeImage> images;
    for (int i = 0; i < 512; ++i) {
        EnvelopeImage im(32, 32);
        for (int y = 0; y < 32; ++y)
            for (int x = 0; x < 32; ++x)
                im(y, x) = nakagami::sample_one(NakagamiParams(1.0, 1.0), data_rng);
        images.push_back(std::move(im));
    }
    Topology topo;
    topo.levels = 1;
    topo.base_channels = 16;
    ScoreNetwork net(topo);
    Rng rng(2000);
    net.init_weights(rng);

    // Annealed sigma 0.1 -> 0.01 across both phases; the second phase drops
    // the learning rate so the low-sigma (low gradient signal-to-noise)
    // steps refine instead of randomizing the fit.
    const int e1 = 20, e2 = 15, batch = 8;
    const long steps_per_epoch = (512 + batch - 1) / batch;
    const double sigma_mid =
        0.1 + (0.01 - 0.1) * static_cast<double>(e1) / (e1 + e2);
    {
        TrainConfig config;
        config.batch_size = batch;
        config.epochs = e1;
        config.learning_rate = 3e-3;
        config.weight_decay = 0.0;
        AnnealingSchedule schedule(sigma_mid, 0.1, steps_per_epoch * e1);
        train(net, images, config, schedule, rng);
    }
    {
        TrainConfig config;
        config.batch_size = batch;
        config.epochs = e2;
        config.learning_rate = 1e-4;
        config.weight_decay = 0.0;
        AnnealingSchedule schedule(0.01, sigma_mid, steps_per_epoch * e2);
        train(net, images, config, schedule, rng);
    }

    // Held-out fields from the same distribution.
    std::vector<double> errors;
    for (int i = 0; i < 8; ++i) {
        EnvelopeImage im(32, 32);
        for (int y = 0; y < 32; ++y)
            for (int x = 0; x < 32; ++x)
                im(y, x) = nakagami::sample_one(NakagamiParams(1.0, 1.0), data_rng);
        const ScoreImage scores = net.forward(im);
        for (int y = 0; y < 32; ++y)
            for (int x = 0; x < 32; ++x) {
                const double r = im(y, x);
                if (r < 0.3 || r > 1.5)
                    continue;
                errors.push_back(std::abs(
                    scores(y, x) - nakagami::analytic_score(r, NakagamiParams(1.0, 1.0))));
            }
    }
    REQUIRE(!errors.empty());
    std::nth_element(errors.begin(), errors.begin() + errors.size() / 2, errors.end());
    const double median = errors[errors.size() / 2];
    const double elapsed = clock.seconds();
    const bool pass = median < 0.15;
    CHECK(median < 0.15);
    report(6, pass, elapsed,
           "held-out median |s(r) - analytic score| < 0.15 after training on "
           "512 i.i.d. m=1 fields");
}

TEST_CASE("criterion 7: window-free map beats the best single-window baseline") {
    Stopwatch clock;
    // 64-image procedural dataset (alternating ramps and disks), Omega = 1.
    Rng rng(7);
    std::vector<std::pair<GroundTruthMap, EnvelopeImage>> items;
    for (int i = 0; i < 64; ++i) {
        const ImageXd intensity =
            i % 2 == 0 ? generate_ramp(64, 64, rng) : generate_disk(64, 64, rng);
        GroundTruthMap truth = normalize_to_m(intensity);
        Rng measurement_rng = rng.split();
        items.emplace_back(std::move(truth),
                           synthesize_measurement(truth, 1.0, measurement_rng));
    }
    Dataset dataset = split_dataset(std::move(items), 0.8, 7);

    // Train on 32x32 tiles of the training measurements: 4x the image count
    // means 4x the optimizer steps per epoch at the same cost per step.
    std::vector<EnvelopeImage> tiles;
    for (const auto& [truth, measurement] : dataset.train)
        for (int ty = 0; ty < 2; ++ty)
            for (int tx = 0; tx < 2; ++tx)
                tiles.push_back(measurement.block(32 * ty, 32 * tx, 32, 32));

    Topology topo;
    topo.base_channels = 8;
    ScoreNetwork net(topo);
    Rng train_rng(8);
    net.init_weights(train_rng);
    const int batch = 8;
    const long steps_per_epoch =
        (static_cast<long>(tiles.size()) + batch - 1) / batch;
    {
        // Main phase at constant sigma: keeps the gradient signal-to-noise
        // high while the conditional structure is being learned.
        TrainConfig config;
        config.batch_size = batch;
        config.epochs = 120;
        config.learning_rate = 3e-3;
        config.weight_decay = 0.0;
        AnnealingSchedule schedule(0.1, 0.1, steps_per_epoch * 120);
        train(net, tiles, config, schedule, train_rng);
    }
    {
        // Short anneal to small sigma at a small learning rate.
        TrainConfig config;
        config.batch_size = batch;
        config.epochs = 30;
        config.learning_rate = 1e-4;
        config.weight_decay = 0.0;
        AnnealingSchedule schedule(0.01, 0.1, steps_per_epoch * 30);
        train(net, tiles, config, schedule, train_rng);
    }

    const auto average_psnr = [&](auto&& estimate) {
        double acc = 0.0;
        for (const auto& [truth, measurement] : dataset.test)
            acc += psnr(estimate(measurement), truth, 1.5);
        return acc / static_cast<double>(dataset.test.size());
    };
    double best_moment = -1e300, worst_moment = 1e300;
    for (const int window : {9, 11, 13}) {
        const double p = average_psnr([&](const EnvelopeImage& m) {
            return sliding_window_map(m, WindowSpec(window), WindowEstimator::Moment);
        });
        best_moment = std::max(best_moment, p);
        worst_moment = std::min(worst_moment, p);
    }
    const double wmc = average_psnr(
        [](const EnvelopeImage& m) { return wmc_map(m, {9, 11, 13}); });
    UnicornConfig config;
    config.filter = FilterSpec::median(5);
    config.denominator_epsilon = 0.05;
    const double unicorn = average_psnr([&](const EnvelopeImage& m) {
        return unicorn_map(m, net.forward(m), config);
    });

    const double elapsed = clock.seconds();
    const bool pass = unicorn >= best_moment + 0.5 && wmc >= worst_moment + 0.5 &&
                      elapsed < 900.0;
    std::printf("[acceptance]   criterion 7 detail: moment best %.2f / worst %.2f dB, "
                "wmc %.2f dB, score-based map %.2f dB\n",
                best_moment, worst_moment, wmc, unicorn);
    CHECK(unicorn >= best_moment + 0.5);
    CHECK(wmc >= worst_moment + 0.5);
    CHECK(elapsed < 900.0);
    report(7, pass, elapsed,
           "test-set PSNR: score-based map > best moment window + 0.5 dB and "
           "WMC > worst moment window + 0.5 dB");
}

TEST_CASE("criterion 8: ROI of a pre-Rayleigh lesion is sharpest window-free") {
    Stopwatch clock;
    // Disk phantom: lesion at m = 0.6 inside background at m = 1.2, Omega 1.
    //
    // Protocol notes. Conventional maps use the best single window from the
    // simulation study (13) — moment at stride 1, ML at stride = half the
    // window (ML is run strided for cost in the reference protocol), WMC
    // compounding {9, 11, 13}. The score network trains on balanced tiles of
    // the two tissue classes: first homogeneous tiles (learning the
    // class-conditional scores), then a mix that includes straight-edge
    // two-class tiles (a net that never saw a boundary blurs the lesion rim
    // by its whole receptive field). ROI means are averaged over independent
    // speckle realizations of the same phantom; single-realization window
    // means fluctuate by ~0.05 and would make this comparison a coin flip.
    Rng rng(11);
    std::vector<EnvelopeImage> constant_tiles, mixed_tiles;
    for (int i = 0; i < 96; ++i) {
        GroundTruthMap t = GroundTruthMap::Constant(32, 32, i % 2 == 0 ? 0.6 : 1.2);
        constant_tiles.push_back(synthesize_measurement(t, 1.0, rng));
    }
    for (int i = 0; i < 96; ++i) {
        GroundTruthMap t(32, 32);
        if (i % 3 == 0) {
            t.setConstant(0.6);
        } else if (i % 3 == 1) {
            t.setConstant(1.2);
        } else {
            const bool horizontal = rng.uniform() < 0.5;
            const bool flipped = rng.uniform() < 0.5;
            const int cut = 8 + static_cast<int>(rng.uniform() * 16.0);
            for (int y = 0; y < 32; ++y)
                for (int x = 0; x < 32; ++x)
                    t(y, x) = (((horizontal ? y : x) < cut) != flipped) ? 0.6 : 1.2;
        }
        mixed_tiles.push_back(synthesize_measurement(t, 1.0, rng));
    }

    Topology topo;
    topo.base_channels = 8;
    ScoreNetwork net(topo);
    Rng train_rng(12);
    net.init_weights(train_rng);
    const int batch = 4;
    const auto phase = [&](const std::vector<EnvelopeImage>& data, int epochs,
                           double lr, double sigma_lo, double sigma_hi) {
        const long steps =
            (static_cast<long>(data.size()) + batch - 1) / batch * epochs;
        TrainConfig config;
        config.batch_size = batch;
        config.epochs = epochs;
        config.learning_rate = lr;
        config.weight_decay = 0.0;
        AnnealingSchedule schedule(sigma_lo, sigma_hi, steps);
        train(net, data, config, schedule, train_rng);
    };
    // Staged learning-rate decay: the 3e-3 phase plateaus at its own
    // gradient-noise floor well above the achievable conditioning error.
    phase(constant_tiles, 120, 3e-3, 0.1, 0.1);
    phase(constant_tiles, 120, 1e-3, 0.1, 0.1);
    phase(mixed_tiles, 480, 1e-3, 0.1, 0.1);
    phase(mixed_tiles, 60, 1e-4, 0.01, 0.1);

    const auto [truth, roi] = disk_phantom(64, 64, 1.2, 0.6, 0.17);
    const int realizations = 20;
    double mean_moment = 0.0, mean_ml = 0.0, mean_wmc = 0.0, mean_unicorn = 0.0;
    for (int rep = 0; rep < realizations; ++rep) {
        const EnvelopeImage measurement = synthesize_measurement(truth, 1.0, rng);
        const auto roi_mean = [&](const ParamMap& map) {
            return roi_stats(map, roi).mean;
        };
        mean_moment += roi_mean(
            sliding_window_map(measurement, WindowSpec(13), WindowEstimator::Moment));
        mean_ml += roi_mean(
            sliding_window_map(measurement, WindowSpec(13, 6), WindowEstimator::Ml));
        mean_wmc += roi_mean(wmc_map(measurement, {9, 11, 13}));
        UnicornConfig config;
        config.filter = FilterSpec::median(3);
        config.denominator_epsilon = 0.05;
        mean_unicorn += roi_mean(unicorn_map(measurement, net.forward(measurement), config));
    }
    mean_moment /= realizations;
    mean_ml /= realizations;
    mean_wmc /= realizations;
    mean_unicorn /= realizations;

    std::printf("[acceptance]   criterion 8 detail: ROI means (true 0.6): moment "
                "%.3f, ml %.3f, wmc %.3f, score-based %.3f\n",
                mean_moment, mean_ml, mean_wmc, mean_unicorn);
    const double bias_unicorn = std::abs(mean_unicorn - 0.6);
    const bool all_pre_rayleigh =
        mean_moment < 1.0 && mean_ml < 1.0 && mean_wmc < 1.0 && mean_unicorn < 1.0;
    const bool closest = bias_unicorn < std::abs(mean_moment - 0.6) &&
                         bias_unicorn < std::abs(mean_ml - 0.6) &&
                         bias_unicorn < std::abs(mean_wmc - 0.6);
    const double elapsed = clock.seconds();
    const bool pass = all_pre_rayleigh && closest;
    CHECK(all_pre_rayleigh);
    CHECK(closest);
    report(8, pass, elapsed,
           "every method's lesion-ROI mean is pre-Rayleigh (< 1) and the "
           "window-free map is closest to the true 0.6");
}

TEST_CASE("criterion 9: repeated pipeline runs produce byte-identical artifacts") {
    Stopwatch clock;
    const char* cli = std::getenv("NAKAGAMI_CLI");
    REQUIRE(cli != nullptr);

    const fs::path base = fs::temp_directory_path() / "nakagami_acceptance_determinism";
    fs::remove_all(base);
    const auto run_pipeline = [&](const fs::path& out) {
        const auto run = [&](const std::string& args) {
            const std::string command =
                std::string(cli) + " " + args + " > /dev/null 2>&1";
            const int status = std::system(command.c_str());
            REQUIRE(status == 0);
        };
        const std::string dir = out.string();
        run("simulate --generator disk --width 24 --height 24 --count 3 "
            "--omega 1.0 --seed 5 --out " + dir + "/sim");
        run("train --data " + dir + "/sim --epochs 2 --batch 2 --levels 1 "
            "--channels 4 --seed 3 --out " + dir + "/model");
        run("estimate --in " + dir + "/sim/meas_0000.nkrf --method unicorn "
            "--checkpoint " + dir + "/model/model.nksn --filter median:3 "
            "--omega global --out " + dir + "/est_unicorn");
        run("estimate --in " + dir + "/sim/meas_0000.nkrf --method moment "
            "--window 9 --out " + dir + "/est_moment");
        run("evaluate --estimate " + dir + "/est_unicorn/estimate.nkrf "
            "--estimate " + dir + "/est_moment/estimate.nkrf --truth " + dir +
            "/sim/truth_0000.nkrf --data-range 1.5 --out " + dir + "/eval");
    };
    run_pipeline(base / "run1");
    run_pipeline(base / "run2");

    // Compare every NKRF/NKSN/CSV artifact byte for byte. (Manifests carry
    // wall-clock timings and are exempt by design.)
    int compared = 0;
    bool identical = true;
    for (const auto& entry : fs::recursive_directory_iterator(base / "run1")) {
        if (!entry.is_regular_file())
            continue;
        const std::string ext = entry.path().extension().string();
        if (ext != ".nkrf" && ext != ".nksn" && ext != ".csv")
            continue;
        const fs::path twin =
            base / "run2" / fs::relative(entry.path(), base / "run1");
        REQUIRE(fs::exists(twin));
        identical = identical && read_bytes(entry.path()) == read_bytes(twin);
        ++compared;
    }
    const double elapsed = clock.seconds();
    const bool pass = identical && compared >= 8;
    CHECK(identical);
    CHECK(compared >= 8);
    report(9, pass, elapsed,
           "simulate/train/estimate/evaluate re-run with equal seeds: all "
           "raster, checkpoint and CSV artifacts byte-identical");
    fs::remove_all(base);
}

TEST_CASE("criterion 10: corrupted container files are rejected, never crash") {
    Stopwatch clock;
    const fs::path dir = fs::temp_directory_path() / "nakagami_acceptance_fuzz";
    fs::create_directories(dir);
    const fs::path scratch = dir / "case.bin";

    // Pristine base artifacts for each container format.
    std::vector<std::pair<std::string, std::string>> bases; // (format, bytes)
    {
        Rng rng(1010);
        Raster raster;
        raster.data = ImageXd(6, 5);
        MaskXb mask(6, 5);
        for (int y = 0; y < 6; ++y)
            for (int x = 0; x < 5; ++x) {
                raster.data(y, x) = rng.normal();
                mask(y, x) = rng.uniform() < 0.8;
            }
        raster.mask = mask;
        write_raster(raster, scratch.string());
        bases.emplace_back("nkrf", read_bytes(scratch));

        Topology topo;
        topo.levels = 1;
        topo.base_channels = 2;
        ScoreNetwork net(topo);
        net.init_weights(rng);
        save_network(net, scratch.string());
        bases.emplace_back("nksn", read_bytes(scratch));

        ImageXd intensity(6, 5);
        for (int y = 0; y < 6; ++y)
            for (int x = 0; x < 5; ++x)
                intensity(y, x) = rng.uniform();
        write_pgm(intensity, scratch.string(), 255, true);
        bases.emplace_back("pgm5", read_bytes(scratch));
        // maxval 9 keeps every ascii sample a single digit, so any
        // truncation that removes >= 2 bytes removes at least one token.
        write_pgm(intensity, scratch.string(), 9, false);
        bases.emplace_back("pgm2", read_bytes(scratch));
    }

    const auto read_as = [&](const std::string& format) {
        if (format == "nkrf")
            read_raster(scratch.string());
        else if (format == "nksn")
            load_network(scratch.string());
        else
            read_pgm(scratch.string());
    };
    Rng rng(2020);
    long total = 0, rejected = 0, mutation_failures = 0, flip_failures = 0;
    for (const auto& [format, bytes] : bases) {
        // Mutations that must be rejected with format_error: truncation,
        // trailing garbage, and magic/version corruption.
        for (int i = 0; i < 1800; ++i) {
            std::string mutant = bytes;
            const int kind = static_cast<int>(rng.uniform() * 3.0);
            if (kind == 0) {
                const std::size_t keep =
                    1 + static_cast<std::size_t>(rng.uniform() *
                                                 static_cast<double>(bytes.size() - 2));
                mutant.resize(keep);
            } else if (kind == 1) {
                const int extra = 1 + static_cast<int>(rng.uniform() * 16.0);
                for (int j = 0; j < extra; ++j)
                    mutant.push_back(static_cast<char>(33 + rng.uniform() * 94.0));
            } else {
                // Corrupt the magic (all formats) or the version field
                // (binary containers store it right after the magic).
                const std::size_t pos =
                    format == "pgm5" || format == "pgm2"
                        ? static_cast<std::size_t>(rng.uniform() * 2.0)
                        : static_cast<std::size_t>(rng.uniform() * 8.0);
                char replacement = static_cast<char>(rng.uniform() * 256.0);
                while (replacement == mutant[pos])
                    replacement = static_cast<char>(rng.uniform() * 256.0);
                mutant[pos] = replacement;
            }
            write_bytes(scratch, mutant);
            ++total;
            try {
                read_as(format);
                ++mutation_failures; // corrupted input silently accepted
            } catch (const format_error&) {
                ++rejected;
            } catch (...) {
                ++mutation_failures; // wrong error class
            }
        }
        // Random single-byte flips anywhere: must either parse or raise
        // format_error; any other outcome (crash, other exception) fails.
        for (int i = 0; i < 800; ++i) {
            std::string mutant = bytes;
            const std::size_t pos =
                static_cast<std::size_t>(rng.uniform() * static_cast<double>(bytes.size()));
            char replacement = static_cast<char>(rng.uniform() * 256.0);
            while (replacement == mutant[pos])
                replacement = static_cast<char>(rng.uniform() * 256.0);
            mutant[pos] = replacement;
            write_bytes(scratch, mutant);
            ++total;
            try {
                read_as(format);
            } catch (const format_error&) {
            } catch (...) {
                ++flip_failures;
            }
        }
    }
    const double elapsed = clock.seconds();
    const bool pass =
        total >= 10000 && mutation_failures == 0 && flip_failures == 0;
    CHECK(total >= 10000);
    CHECK(mutation_failures == 0);
    CHECK(flip_failures == 0);
    std::printf("[acceptance]   criterion 10 detail: %ld cases, %ld structured "
                "corruptions rejected with format_error\n",
                total, rejected);
    report(10, pass, elapsed,
           "fuzzed NKRF/NKSN/PGM inputs: structured corruption always raises "
           "format_error; byte flips never crash");
    fs::remove_all(dir);
}
