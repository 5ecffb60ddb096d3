#include "unicorn/metrics.hpp"
#include "unicorn/errors.hpp"
#include "unicorn/nakagami.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace unicorn {

double rmse(const ParamMap& estimate, const ImageXd& truth) {
    if (estimate.rows() != truth.rows() || estimate.cols() != truth.cols())
        throw config_error("rmse: shape mismatch");
    double acc = 0.0;
    std::size_t count = 0;
    for (Eigen::Index y = 0; y < truth.rows(); ++y)
        for (Eigen::Index x = 0; x < truth.cols(); ++x)
            if (estimate.valid(y, x)) {
                const double d = estimate.values(y, x) - truth(y, x);
                acc += d * d;
                ++count;
            }
    if (count == 0)
        throw evaluation_error("rmse: no valid pixels");
    return std::sqrt(acc / static_cast<double>(count));
}

double psnr(const ParamMap& estimate, const ImageXd& truth, double data_range,
            bool* infinite) {
    if (!(data_range > 0.0))
        throw config_error("psnr: data_range must be positive");
    const double err = rmse(estimate, truth);
    if (err == 0.0) {
        if (infinite)
            *infinite = true;
        return std::numeric_limits<double>::infinity();
    }
    if (infinite)
        *infinite = false;
    return 20.0 * std::log10(data_range / err);
}

RoiStats roi_stats(const ParamMap& map, const MaskXb& roi, int bins, double range_min,
                   double range_max) {
    if (map.rows() != roi.rows() || map.cols() != roi.cols())
        throw config_error("roi_stats: shape mismatch");
    if (bins < 1 || !(range_max > range_min))
        throw config_error("roi_stats: invalid histogram spec");

    RoiStats stats;
    stats.bin_edges.resize(static_cast<std::size_t>(bins) + 1);
    for (int i = 0; i <= bins; ++i)
        stats.bin_edges[static_cast<std::size_t>(i)] =
            range_min + (range_max - range_min) * i / bins;
    stats.bin_counts.assign(static_cast<std::size_t>(bins), 0);

    double sum = 0.0, sum_sq = 0.0;
    std::size_t pre = 0, ray = 0, post = 0;
    for (Eigen::Index y = 0; y < map.rows(); ++y)
        for (Eigen::Index x = 0; x < map.cols(); ++x) {
            if (!roi(y, x) || !map.valid(y, x))
                continue;
            const double v = map.values(y, x);
            sum += v;
            sum_sq += v * v;
            ++stats.count;
            int bin = static_cast<int>((v - range_min) / (range_max - range_min) * bins);
            bin = std::clamp(bin, 0, bins - 1); // out-of-range into edge bins
            ++stats.bin_counts[static_cast<std::size_t>(bin)];
            switch (regime_of(std::max(v, 1e-300))) {
            case Regime::PreRayleigh:
                ++pre;
                break;
            case Regime::Rayleigh:
                ++ray;
                break;
            case Regime::PostRayleigh:
                ++post;
                break;
            }
        }
    if (stats.count < 2)
        throw evaluation_error("roi_stats: fewer than 2 valid ROI pixels");
    const double n = static_cast<double>(stats.count);
    stats.mean = sum / n;
    stats.std_dev = std::sqrt(std::max(0.0, sum_sq / n - stats.mean * stats.mean));
    stats.pre_rayleigh_fraction = static_cast<double>(pre) / n;
    stats.rayleigh_fraction = static_cast<double>(ray) / n;
    stats.post_rayleigh_fraction = static_cast<double>(post) / n;
    return stats;
}

std::string format_double(double v) {
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

void write_lines(const std::string& path, const std::string& body, const char* what) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !out.write(body.data(), static_cast<std::streamsize>(body.size())))
        throw format_error(std::string(what) + ": cannot write " + path);
}

} // namespace

void emit_csv(std::vector<MetricReport> reports, const std::string& path) {
    if (reports.empty())
        throw config_error("emit_csv: no reports");
    std::sort(reports.begin(), reports.end(), [](const auto& a, const auto& b) {
        return a.method != b.method ? a.method < b.method : a.window < b.window;
    });
    std::string body = "method,window,psnr_db,rmse,valid_fraction\n";
    for (const auto& r : reports) {
        body += r.method + "," + r.window + ",";
        body += r.psnr_infinite ? "inf" : format_double(r.psnr_db);
        body += "," + format_double(r.rmse) + "," + format_double(r.valid_fraction) + "\n";
    }
    write_lines(path, body, "emit_csv");
}

void emit_csv(std::vector<RoiStats> stats, const std::string& path) {
    if (stats.empty())
        throw config_error("emit_csv: no stats");
    std::sort(stats.begin(), stats.end(),
              [](const auto& a, const auto& b) { return a.method < b.method; });
    std::string body =
        "method,count,mean,std,pre_rayleigh,rayleigh,post_rayleigh,histogram\n";
    for (const auto& s : stats) {
        body += s.method + "," + std::to_string(s.count) + "," + format_double(s.mean) +
                "," + format_double(s.std_dev) + "," +
                format_double(s.pre_rayleigh_fraction) + "," +
                format_double(s.rayleigh_fraction) + "," +
                format_double(s.post_rayleigh_fraction) + ",";
        for (std::size_t i = 0; i < s.bin_counts.size(); ++i) {
            if (i)
                body += ";";
            body += std::to_string(s.bin_counts[i]);
        }
        body += "\n";
    }
    write_lines(path, body, "emit_csv");
}

} // namespace unicorn
