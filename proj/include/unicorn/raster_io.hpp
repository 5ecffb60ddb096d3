#ifndef UNICORN_RASTER_IO_HPP
#define UNICORN_RASTER_IO_HPP

#include "unicorn/image.hpp"

#include <optional>
#include <string>

namespace unicorn {

/// NKRF raster: float64 grid, optional packed-bit validity/ROI mask.
struct Raster {
    ImageXd data;
    std::optional<MaskXb> mask;
};

void write_raster(const Raster& raster, const std::string& path);
Raster read_raster(const std::string& path);

void write_param_map(const ParamMap& map, const std::string& path);
ParamMap read_param_map(const std::string& path);

/// PGM (P2 ascii / P5 binary, maxval <= 65535) read as intensities in
/// [0, 1]; write quantizes with the given maxval.
ImageXd read_pgm(const std::string& path);
void write_pgm(const ImageXd& intensities, const std::string& path, int maxval = 255,
               bool binary = true);

} // namespace unicorn

#endif
