// Command-line front end for Nakagami parametric imaging experiments.
//
// Subcommands: simulate, train, estimate, evaluate, benchmark.
// Exit codes: 0 success, 2 configuration error, 3 I/O error,
// 4 numerical divergence.

#include "unicorn/classical.hpp"
#include "unicorn/errors.hpp"
#include "unicorn/estimator.hpp"
#include "unicorn/metrics.hpp"
#include "unicorn/nakagami.hpp"
#include "unicorn/pipeline.hpp"
#include "unicorn/raster_io.hpp"
#include "unicorn/score_network.hpp"
#include "unicorn/train.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace unicorn;

namespace {

constexpr const char* kToolVersion = "1.0.0";

std::uint64_t fnv1a_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw format_error("cannot hash " + path.string());
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char c;
    while (in.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

void ensure_out_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir))
        throw format_error("cannot create output directory " + dir.string());
}

void write_manifest(const fs::path& dir, const json& config,
                    const std::vector<fs::path>& artifacts, double seconds) {
    json manifest;
    manifest["tool_version"] = kToolVersion;
    manifest["config"] = config;
    manifest["elapsed_seconds"] = seconds;
    json hashes = json::object();
    for (const auto& artifact : artifacts)
        hashes[artifact.filename().string()] = fnv1a_file(artifact);
    manifest["artifact_hashes"] = hashes;
    std::ofstream out(dir / "manifest.json", std::ios::trunc);
    if (!out)
        throw format_error("cannot write manifest in " + dir.string());
    out << manifest.dump(2) << "\n";
}

// Fills CLI option defaults from the JSON config section; explicit flags win.
void apply_config_section(CLI::App* cmd, const json& config, const std::string& section) {
    if (!config.contains(section))
        return;
    const json& sec = config.at(section);
    if (!sec.is_object())
        throw config_error("config section '" + section + "' must be an object");
    for (const auto& [key, value] : sec.items()) {
        CLI::Option* opt = cmd->get_option_no_throw("--" + key);
        if (!opt)
            throw config_error("config field '" + section + "." + key + "' is unknown");
        if (opt->count() > 0)
            continue; // command line overrides config file
        std::string text = value.is_string() ? value.get<std::string>() : value.dump();
        opt->add_result(text);
        opt->run_callback();
    }
}

json load_config(const std::string& path) {
    if (path.empty())
        return json::object();
    std::ifstream in(path);
    if (!in)
        throw format_error("cannot open config file " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw config_error(std::string("config parse error: ") + e.what());
    }
}

Generator parse_generator(const std::string& name) {
    if (name == "ramp")
        return Generator::Ramp;
    if (name == "disk")
        return Generator::Disk;
    if (name == "checker")
        return Generator::Checkerboard;
    if (name == "strokes")
        return Generator::Strokes;
    if (name == "mixed")
        return Generator::Mixed;
    throw config_error("unknown generator '" + name + "'");
}

FilterSpec parse_filter(const std::string& text) {
    if (text == "none")
        return FilterSpec::none();
    const auto colon = text.find(':');
    if (colon != std::string::npos) {
        const std::string kind = text.substr(0, colon);
        const int k = std::stoi(text.substr(colon + 1));
        if (kind == "median")
            return FilterSpec::median(k);
        if (kind == "average")
            return FilterSpec::average(k);
    }
    throw config_error("bad --filter '" + text + "' (median:k|average:k|none)");
}

OmegaMode parse_omega(const std::string& text) {
    if (text == "global")
        return OmegaMode::global();
    const auto colon = text.find(':');
    if (colon != std::string::npos) {
        const std::string kind = text.substr(0, colon);
        if (kind == "local")
            return OmegaMode::local(std::stoi(text.substr(colon + 1)));
        if (kind == "fixed")
            return OmegaMode::fixed(std::stod(text.substr(colon + 1)));
    }
    throw config_error("bad --omega '" + text + "' (global|local:k|fixed:v)");
}

std::vector<int> parse_sizes(const std::string& text) {
    std::vector<int> sizes;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ','))
        if (!token.empty())
            sizes.push_back(std::stoi(token));
    if (sizes.empty())
        throw config_error("bad --sizes '" + text + "'");
    return sizes;
}

std::vector<fs::path> sorted_files(const fs::path& dir, const std::string& prefix) {
    std::vector<fs::path> files;
    if (!fs::is_directory(dir))
        throw format_error("not a directory: " + dir.string());
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        if (name.rfind(prefix, 0) == 0 && name.size() > 5 &&
            name.substr(name.size() - 5) == ".nkrf")
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty())
        throw format_error("no " + prefix + "*.nkrf files in " + dir.string());
    return files;
}

struct MethodRun {
    std::string method = "moment";
    int window = 11;
    int stride = 1;
    std::string sizes = "9,11,13";
    std::string filter = "median:3";
    std::string omega = "global";
    double epsilon = 1e-3;
    std::string checkpoint;
};

ParamMap run_estimate(const EnvelopeImage& meas, const MethodRun& run,
                      const ScoreNetwork* net) {
    if (run.method == "moment" || run.method == "ml") {
        const WindowSpec spec(run.window, run.stride);
        return sliding_window_map(meas, spec,
                                  run.method == "moment" ? WindowEstimator::Moment
                                                         : WindowEstimator::Ml);
    }
    if (run.method == "wmc")
        return wmc_map(meas, parse_sizes(run.sizes));
    if (run.method == "unicorn") {
        if (!net)
            throw config_error("method 'unicorn' requires --checkpoint");
        UnicornConfig cfg;
        cfg.filter = parse_filter(run.filter);
        cfg.omega_mode = parse_omega(run.omega);
        cfg.denominator_epsilon = run.epsilon;
        return unicorn_map(meas, net->forward(meas), cfg);
    }
    throw config_error("unknown method '" + run.method + "'");
}

std::string window_label(const MethodRun& run) {
    if (run.method == "wmc")
        return run.sizes;
    if (run.method == "unicorn" || run.method == "measurement")
        return "-";
    return std::to_string(run.window);
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
    std::string generator = "mixed";
    int width = 64, height = 64;
    int count = 1;
    double omega = 1.0;
    std::uint64_t seed = 0;
    std::string out = "out";
};

int cmd_simulate(const SimulateArgs& args, const json& config_snapshot) {
    const auto start = std::chrono::steady_clock::now();
    ensure_out_dir(args.out);
    if (args.count < 1)
        throw config_error("simulate: --count must be positive");
    const Generator kind = parse_generator(args.generator);
    Rng rng(args.seed);
    std::vector<fs::path> artifacts;
    for (int i = 0; i < args.count; ++i) {
        const ImageXd intensity = generate_intensity(kind, args.height, args.width,
                                                     static_cast<std::size_t>(i), rng);
        const GroundTruthMap truth = normalize_to_m(intensity);
        Rng meas_rng = rng.split();
        const EnvelopeImage meas = synthesize_measurement(truth, args.omega, meas_rng);
        char suffix[16];
        std::snprintf(suffix, sizeof(suffix), "%04d.nkrf", i);
        const fs::path truth_path = fs::path(args.out) / (std::string("truth_") + suffix);
        const fs::path meas_path = fs::path(args.out) / (std::string("meas_") + suffix);
        write_raster(Raster{truth, std::nullopt}, truth_path.string());
        write_raster(Raster{meas, std::nullopt}, meas_path.string());
        artifacts.push_back(truth_path);
        artifacts.push_back(meas_path);
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(args.out, config_snapshot, artifacts, seconds);
    return 0;
}

// ------------------------------------------------------------------- train

struct TrainArgs {
    std::string data;
    int epochs = 100;
    int batch = 32;
    double lr = 2e-4; // AdamW
    double weight_decay = 0.01;
    std::uint64_t seed = 0;
    double sigma_min = 0.01, sigma_max = 0.1;
    int levels = 2, channels = 16, kernel = 3;
    std::string out = "out";
};

int cmd_train(const TrainArgs& args, const json& config_snapshot) {
    const auto start = std::chrono::steady_clock::now();
    ensure_out_dir(args.out);
    std::vector<EnvelopeImage> images;
    for (const auto& path : sorted_files(args.data, "meas_"))
        images.push_back(read_raster(path.string()).data);

    Topology topo;
    topo.levels = args.levels;
    topo.base_channels = args.channels;
    topo.kernel = args.kernel;
    ScoreNetwork net(topo);
    Rng rng(args.seed);
    net.init_weights(rng);

    TrainConfig config;
    config.batch_size = args.batch;
    config.learning_rate = args.lr;
    config.epochs = args.epochs;
    config.weight_decay = args.weight_decay;
    config.seed = args.seed;
    const long batches_per_epoch =
        static_cast<long>((images.size() + args.batch - 1) / args.batch);
    const AnnealingSchedule schedule(args.sigma_min, args.sigma_max,
                                     std::max(1L, batches_per_epoch * args.epochs));

    const fs::path model_path = fs::path(args.out) / "model.nksn";
    std::vector<double> history;
    try {
        history = train(net, images, config, schedule, rng);
    } catch (const divergence_error& e) {
        // Parameters were rolled back to the last finite step.
        save_network(net, model_path.string());
        std::cerr << "error: " << e.what() << " (last-good checkpoint retained)\n";
        return 4;
    }
    save_network(net, model_path.string());

    const fs::path loss_path = fs::path(args.out) / "loss.csv";
    {
        std::string body = "step,loss\n";
        for (std::size_t i = 0; i < history.size(); ++i)
            body += std::to_string(i) + "," + format_double(history[i]) + "\n";
        std::ofstream out(loss_path, std::ios::binary | std::ios::trunc);
        if (!out.write(body.data(), static_cast<std::streamsize>(body.size())))
            throw format_error("cannot write " + loss_path.string());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(args.out, config_snapshot, {model_path, loss_path}, seconds);
    return 0;
}

// ---------------------------------------------------------------- estimate

struct EstimateArgs {
    std::string in;
    MethodRun run;
    std::string out = "out";
};

int cmd_estimate(const EstimateArgs& args, const json& config_snapshot) {
    const auto start = std::chrono::steady_clock::now();
    ensure_out_dir(args.out);
    const EnvelopeImage meas = read_raster(args.in).data;
    std::optional<ScoreNetwork> net;
    if (args.run.method == "unicorn") {
        if (args.run.checkpoint.empty())
            throw config_error("estimate: method 'unicorn' requires --checkpoint");
        net = load_network(args.run.checkpoint);
    }
    const ParamMap map = run_estimate(meas, args.run, net ? &*net : nullptr);
    const fs::path est_path = fs::path(args.out) / "estimate.nkrf";
    write_param_map(map, est_path.string());
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(args.out, config_snapshot, {est_path}, seconds);
    return 0;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateArgs {
    std::vector<std::string> estimates;
    std::string truth;
    std::string roi;
    double data_range = 1.5;
    int bins = 50;
    std::string out = "out";
};

int cmd_evaluate(const EvaluateArgs& args, const json& config_snapshot) {
    const auto start = std::chrono::steady_clock::now();
    ensure_out_dir(args.out);
    const ImageXd truth = read_raster(args.truth).data;
    std::vector<MetricReport> reports;
    std::vector<RoiStats> stats;
    std::optional<MaskXb> roi;
    if (!args.roi.empty()) {
        const Raster mask_raster = read_raster(args.roi);
        if (!mask_raster.mask)
            throw config_error("evaluate: --roi raster carries no mask channel");
        roi = *mask_raster.mask;
    }
    for (const auto& est_path : args.estimates) {
        const ParamMap est = read_param_map(est_path);
        MetricReport report;
        report.method = fs::path(est_path).stem().string();
        report.window = "-";
        report.rmse = rmse(est, truth);
        report.psnr_db = psnr(est, truth, args.data_range, &report.psnr_infinite);
        report.valid_fraction = est.valid_fraction();
        reports.push_back(report);
        if (roi) {
            RoiStats s = roi_stats(est, *roi, args.bins);
            s.method = report.method;
            stats.push_back(s);
        }
    }
    const fs::path metrics_path = fs::path(args.out) / "metrics.csv";
    emit_csv(reports, metrics_path.string());
    std::vector<fs::path> artifacts{metrics_path};
    if (!stats.empty()) {
        const fs::path roi_path = fs::path(args.out) / "roi_stats.csv";
        emit_csv(stats, roi_path.string());
        artifacts.push_back(roi_path);
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(args.out, config_snapshot, artifacts, seconds);
    return 0;
}

// --------------------------------------------------------------- benchmark

struct BenchmarkArgs {
    std::string generator = "mixed";
    int width = 64, height = 64;
    int count = 64;
    double omega = 1.0;
    std::uint64_t seed = 7;
    double train_fraction = 0.8;
    std::string windows = "9,11,13";
    std::string wmc_sizes = "9,11,13";
    int ml_window = 11;
    std::string filter = "median:3";
    int epochs = 60;
    int batch = 16;
    double lr = 1e-3;
    double sigma_min = 0.01, sigma_max = 0.1;
    int levels = 2, channels = 16, kernel = 3;
    std::string out = "out";
};

int cmd_benchmark(const BenchmarkArgs& args, const json& config_snapshot) {
    const auto start = std::chrono::steady_clock::now();
    ensure_out_dir(args.out);

    // Dataset
    Rng rng(args.seed);
    const Generator kind = parse_generator(args.generator);
    std::vector<std::pair<GroundTruthMap, EnvelopeImage>> items;
    for (int i = 0; i < args.count; ++i) {
        const ImageXd intensity = generate_intensity(kind, args.height, args.width,
                                                     static_cast<std::size_t>(i), rng);
        const GroundTruthMap truth = normalize_to_m(intensity);
        Rng meas_rng = rng.split();
        items.emplace_back(truth, synthesize_measurement(truth, args.omega, meas_rng));
    }
    Dataset dataset = split_dataset(std::move(items), args.train_fraction, args.seed);

    // Score model on the training measurements
    std::vector<EnvelopeImage> train_images;
    for (const auto& [truth, meas] : dataset.train)
        train_images.push_back(meas);
    Topology topo;
    topo.levels = args.levels;
    topo.base_channels = args.channels;
    topo.kernel = args.kernel;
    ScoreNetwork net(topo);
    Rng train_rng(args.seed + 1);
    net.init_weights(train_rng);
    TrainConfig tc;
    tc.batch_size = args.batch;
    tc.learning_rate = args.lr;
    tc.epochs = args.epochs;
    tc.seed = args.seed + 1;
    const long total_steps = std::max<long>(
        1, static_cast<long>((train_images.size() + args.batch - 1) / args.batch) *
               args.epochs);
    const AnnealingSchedule schedule(args.sigma_min, args.sigma_max, total_steps);
    train(net, train_images, tc, schedule, train_rng);
    const fs::path model_path = fs::path(args.out) / "model.nksn";
    save_network(net, model_path.string());

    // Method table on the held-out split
    std::vector<MethodRun> runs;
    runs.push_back({"measurement"});
    for (int ws : parse_sizes(args.windows))
        runs.push_back({"moment", ws});
    {
        MethodRun ml{"ml", args.ml_window};
        ml.stride = std::max(1, args.ml_window / 2);
        runs.push_back(ml);
    }
    {
        MethodRun wmc{"wmc"};
        wmc.sizes = args.wmc_sizes;
        runs.push_back(wmc);
    }
    {
        MethodRun uni{"unicorn"};
        uni.filter = args.filter;
        runs.push_back(uni);
    }

    std::vector<MetricReport> reports;
    for (const auto& run : runs) {
        double sum_psnr = 0.0, sum_rmse = 0.0, sum_valid = 0.0;
        for (const auto& [truth, meas] : dataset.test) {
            ParamMap map = run.method == "measurement" ? ParamMap(meas)
                                                       : run_estimate(meas, run, &net);
            sum_rmse += rmse(map, truth);
            sum_psnr += psnr(map, truth);
            sum_valid += map.valid_fraction();
        }
        const double n = static_cast<double>(dataset.test.size());
        MetricReport report;
        report.method = run.method;
        report.window = window_label(run);
        report.psnr_db = sum_psnr / n;
        report.rmse = sum_rmse / n;
        report.valid_fraction = sum_valid / n;
        reports.push_back(report);
    }
    const fs::path table_path = fs::path(args.out) / "benchmark.csv";
    emit_csv(reports, table_path.string());
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_manifest(args.out, config_snapshot, {model_path, table_path}, seconds);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nakagami parametric imaging toolkit"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file; flags override");

    SimulateArgs sim;
    CLI::App* simulate = app.add_subcommand("simulate", "Generate truth/measurement pairs");
    simulate->add_option("--generator", sim.generator, "ramp|disk|checker|strokes|mixed");
    simulate->add_option("--width", sim.width);
    simulate->add_option("--height", sim.height);
    simulate->add_option("--count", sim.count);
    simulate->add_option("--omega", sim.omega);
    simulate->add_option("--seed", sim.seed);
    simulate->add_option("--out", sim.out);

    TrainArgs tr;
    CLI::App* train_cmd = app.add_subcommand("train", "Train the score network");
    train_cmd->add_option("--data", tr.data)->required();
    train_cmd->add_option("--epochs", tr.epochs);
    train_cmd->add_option("--batch", tr.batch);
    train_cmd->add_option("--lr", tr.lr);
    train_cmd->add_option("--weight-decay", tr.weight_decay);
    train_cmd->add_option("--seed", tr.seed);
    train_cmd->add_option("--sigma-min", tr.sigma_min);
    train_cmd->add_option("--sigma-max", tr.sigma_max);
    train_cmd->add_option("--levels", tr.levels);
    train_cmd->add_option("--channels", tr.channels);
    train_cmd->add_option("--kernel", tr.kernel);
    train_cmd->add_option("--out", tr.out);

    EstimateArgs est;
    CLI::App* estimate = app.add_subcommand("estimate", "Estimate a shape map");
    estimate->add_option("--in", est.in)->required();
    estimate->add_option("--method", est.run.method, "moment|ml|wmc|unicorn");
    estimate->add_option("--window", est.run.window);
    estimate->add_option("--stride", est.run.stride);
    estimate->add_option("--sizes", est.run.sizes);
    estimate->add_option("--filter", est.run.filter, "median:k|average:k|none");
    estimate->add_option("--omega", est.run.omega, "global|local:k|fixed:v");
    estimate->add_option("--epsilon", est.run.epsilon);
    estimate->add_option("--checkpoint", est.run.checkpoint);
    estimate->add_option("--out", est.out);

    EvaluateArgs ev;
    CLI::App* evaluate = app.add_subcommand("evaluate", "Score estimates against truth");
    evaluate->add_option("--estimate", ev.estimates)->required();
    evaluate->add_option("--truth", ev.truth)->required();
    evaluate->add_option("--roi", ev.roi);
    evaluate->add_option("--data-range", ev.data_range);
    evaluate->add_option("--bins", ev.bins);
    evaluate->add_option("--out", ev.out);

    BenchmarkArgs bench;
    CLI::App* benchmark = app.add_subcommand("benchmark", "Full pipeline method table");
    benchmark->add_option("--generator", bench.generator);
    benchmark->add_option("--width", bench.width);
    benchmark->add_option("--height", bench.height);
    benchmark->add_option("--count", bench.count);
    benchmark->add_option("--omega", bench.omega);
    benchmark->add_option("--seed", bench.seed);
    benchmark->add_option("--train-fraction", bench.train_fraction);
    benchmark->add_option("--windows", bench.windows);
    benchmark->add_option("--wmc-sizes", bench.wmc_sizes);
    benchmark->add_option("--ml-window", bench.ml_window);
    benchmark->add_option("--filter", bench.filter);
    benchmark->add_option("--epochs", bench.epochs);
    benchmark->add_option("--batch", bench.batch);
    benchmark->add_option("--lr", bench.lr);
    benchmark->add_option("--sigma-min", bench.sigma_min);
    benchmark->add_option("--sigma-max", bench.sigma_max);
    benchmark->add_option("--levels", bench.levels);
    benchmark->add_option("--channels", bench.channels);
    benchmark->add_option("--kernel", bench.kernel);
    benchmark->add_option("--out", bench.out);

    try {
        app.parse(argc, argv);
        const json config = load_config(config_path);
        json snapshot;
        snapshot["config_file"] = config_path;
        if (simulate->parsed()) {
            apply_config_section(simulate, config, "simulate");
            snapshot["simulate"] = {{"generator", sim.generator}, {"width", sim.width},
                                    {"height", sim.height},       {"count", sim.count},
                                    {"omega", sim.omega},         {"seed", sim.seed}};
            return cmd_simulate(sim, snapshot);
        }
        if (train_cmd->parsed()) {
            apply_config_section(train_cmd, config, "train");
            snapshot["train"] = {{"data", tr.data},
                                 {"epochs", tr.epochs},
                                 {"batch", tr.batch},
                                 {"lr", tr.lr},
                                 {"weight_decay", tr.weight_decay},
                                 {"seed", tr.seed},
                                 {"sigma_min", tr.sigma_min},
                                 {"sigma_max", tr.sigma_max},
                                 {"levels", tr.levels},
                                 {"channels", tr.channels},
                                 {"kernel", tr.kernel}};
            return cmd_train(tr, snapshot);
        }
        if (estimate->parsed()) {
            apply_config_section(estimate, config, "estimate");
            snapshot["estimate"] = {{"in", est.in},
                                    {"method", est.run.method},
                                    {"window", est.run.window},
                                    {"stride", est.run.stride},
                                    {"sizes", est.run.sizes},
                                    {"filter", est.run.filter},
                                    {"omega", est.run.omega},
                                    {"epsilon", est.run.epsilon},
                                    {"checkpoint", est.run.checkpoint}};
            return cmd_estimate(est, snapshot);
        }
        if (evaluate->parsed()) {
            apply_config_section(evaluate, config, "evaluate");
            snapshot["evaluate"] = {{"estimates", ev.estimates},
                                    {"truth", ev.truth},
                                    {"roi", ev.roi},
                                    {"data_range", ev.data_range},
                                    {"bins", ev.bins}};
            return cmd_evaluate(ev, snapshot);
        }
        apply_config_section(benchmark, config, "benchmark");
        snapshot["benchmark"] = {{"generator", bench.generator},
                                 {"width", bench.width},
                                 {"height", bench.height},
                                 {"count", bench.count},
                                 {"omega", bench.omega},
                                 {"seed", bench.seed},
                                 {"train_fraction", bench.train_fraction},
                                 {"windows", bench.windows},
                                 {"wmc_sizes", bench.wmc_sizes},
                                 {"ml_window", bench.ml_window},
                                 {"filter", bench.filter},
                                 {"epochs", bench.epochs},
                                 {"batch", bench.batch},
                                 {"lr", bench.lr},
                                 {"sigma_min", bench.sigma_min},
                                 {"sigma_max", bench.sigma_max},
                                 {"levels", bench.levels},
                                 {"channels", bench.channels},
                                 {"kernel", bench.kernel}};
        return cmd_benchmark(bench, snapshot);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const divergence_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const format_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
