#ifndef UNICORN_METRICS_HPP
#define UNICORN_METRICS_HPP

#include "unicorn/image.hpp"

#include <string>
#include <vector>

namespace unicorn {

struct MetricReport {
    std::string method;
    std::string window; // free-text window spec ("11", "9,11,13", "-")
    double psnr_db = 0.0;
    double rmse = 0.0;
    double valid_fraction = 0.0;
    bool psnr_infinite = false;
};

struct RoiStats {
    std::string method;
    std::size_t count = 0;
    double mean = 0.0;
    double std_dev = 0.0; // population (1/N)
    std::vector<double> bin_edges;
    std::vector<std::size_t> bin_counts;
    double pre_rayleigh_fraction = 0.0;
    double rayleigh_fraction = 0.0;
    double post_rayleigh_fraction = 0.0;
};

/// Root mean squared difference over mutually valid pixels.
double rmse(const ParamMap& estimate, const ImageXd& truth);

/// 20 log10(data_range / rmse); data_range defaults to the ground-truth
/// span 2.0 - 0.5. Infinite (rmse == 0) is reported via the flag.
double psnr(const ParamMap& estimate, const ImageXd& truth, double data_range = 1.5,
            bool* infinite = nullptr);

/// Mean, population std, histogram and regime fractions over valid ROI
/// pixels. Out-of-range values are counted in the clamped edge bins.
RoiStats roi_stats(const ParamMap& map, const MaskXb& roi, int bins = 50,
                   double range_min = 0.0, double range_max = 3.0);

/// Deterministic CSV (header + one row per entry, ordered by method then
/// window, full-precision decimals).
void emit_csv(std::vector<MetricReport> reports, const std::string& path);
void emit_csv(std::vector<RoiStats> stats, const std::string& path);

/// Full-precision decimal rendering used by every CSV writer.
std::string format_double(double v);

} // namespace unicorn

#endif
