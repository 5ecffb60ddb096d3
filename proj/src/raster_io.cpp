#include "unicorn/raster_io.hpp"
#include "unicorn/errors.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace unicorn {

namespace {

constexpr std::uint32_t kRasterVersion = 1;

std::string read_file(const std::string& path, const char* what) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw format_error(std::string(what) + ": cannot open " + path);
    return std::string((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, const std::string& data, const char* what) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !out.write(data.data(), static_cast<std::streamsize>(data.size())))
        throw format_error(std::string(what) + ": cannot write " + path);
}

void put_u32(std::string& buf, std::uint32_t v) {
    for (int i = 0; i < 4; ++i)
        buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

class Cursor {
  public:
    Cursor(const std::string& data, const char* what) : data_(data), what_(what) {}

    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data_[pos_++])) << (8 * i);
        return v;
    }
    double f64() {
        need(8);
        std::uint64_t bits = 0;
        for (int i = 0; i < 8; ++i)
            bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_++]))
                    << (8 * i);
        double v;
        std::memcpy(&v, &bits, 8);
        return v;
    }
    unsigned char byte() {
        need(1);
        return static_cast<unsigned char>(data_[pos_++]);
    }
    void expect_magic(const char* magic) {
        need(4);
        if (std::memcmp(data_.data() + pos_, magic, 4) != 0)
            throw format_error(std::string(what_) + ": bad magic");
        pos_ += 4;
    }
    void expect_end() const {
        if (pos_ != data_.size())
            throw format_error(std::string(what_) + ": trailing bytes after payload");
    }

  private:
    void need(std::size_t n) const {
        if (pos_ + n > data_.size())
            throw format_error(std::string(what_) + ": truncated file");
    }
    const std::string& data_;
    const char* what_;
    std::size_t pos_ = 0;
};

} // namespace

void write_raster(const Raster& raster, const std::string& path) {
    const Eigen::Index h = raster.data.rows(), w = raster.data.cols();
    if (h < 1 || w < 1)
        throw config_error("write_raster: empty raster");
    if (raster.mask && (raster.mask->rows() != h || raster.mask->cols() != w))
        throw config_error("write_raster: mask shape mismatch");

    std::string buf;
    buf.append("NKRF", 4);
    put_u32(buf, kRasterVersion);
    put_u32(buf, static_cast<std::uint32_t>(h));
    put_u32(buf, static_cast<std::uint32_t>(w));
    put_u32(buf, raster.mask ? 1u : 0u);
    for (Eigen::Index y = 0; y < h; ++y)
        for (Eigen::Index x = 0; x < w; ++x) {
            std::uint64_t bits;
            const double v = raster.data(y, x);
            std::memcpy(&bits, &v, 8);
            for (int i = 0; i < 8; ++i)
                buf.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
        }
    if (raster.mask) {
        unsigned char acc = 0;
        int nbits = 0;
        for (Eigen::Index y = 0; y < h; ++y)
            for (Eigen::Index x = 0; x < w; ++x) {
                if ((*raster.mask)(y, x))
                    acc |= static_cast<unsigned char>(1u << nbits);
                if (++nbits == 8) {
                    buf.push_back(static_cast<char>(acc));
                    acc = 0;
                    nbits = 0;
                }
            }
        if (nbits > 0)
            buf.push_back(static_cast<char>(acc));
    }
    write_file(path, buf, "write_raster");
}

Raster read_raster(const std::string& path) {
    const std::string data = read_file(path, "read_raster");
    Cursor cur(data, "read_raster");
    cur.expect_magic("NKRF");
    const std::uint32_t version = cur.u32();
    if (version != kRasterVersion)
        throw format_error("read_raster: version " + std::to_string(version) +
                           " unsupported, expected " + std::to_string(kRasterVersion));
    const std::uint32_t h = cur.u32();
    const std::uint32_t w = cur.u32();
    const std::uint32_t flags = cur.u32();
    if (h == 0 || w == 0 || h > (1u << 20) || w > (1u << 20))
        throw format_error("read_raster: invalid dimensions");
    if (flags > 1)
        throw format_error("read_raster: unknown flags");

    Raster raster;
    raster.data.resize(h, w);
    for (std::uint32_t y = 0; y < h; ++y)
        for (std::uint32_t x = 0; x < w; ++x)
            raster.data(y, x) = cur.f64();
    if (flags & 1u) {
        MaskXb mask(h, w);
        unsigned char acc = 0;
        int nbits = 0;
        for (std::uint32_t y = 0; y < h; ++y)
            for (std::uint32_t x = 0; x < w; ++x) {
                if (nbits == 0) {
                    acc = cur.byte();
                    nbits = 8;
                }
                mask(y, x) = (acc & 1u) != 0;
                acc >>= 1;
                --nbits;
            }
        raster.mask = std::move(mask);
    }
    cur.expect_end();
    return raster;
}

void write_param_map(const ParamMap& map, const std::string& path) {
    write_raster(Raster{map.values, map.valid}, path);
}

ParamMap read_param_map(const std::string& path) {
    Raster raster = read_raster(path);
    ParamMap map;
    map.values = std::move(raster.data);
    map.valid = raster.mask ? std::move(*raster.mask)
                            : MaskXb::Constant(map.values.rows(), map.values.cols(), true);
    return map;
}

namespace {

// Netpbm token reader: whitespace-separated, '#' comments to end of line.
class PgmTokens {
  public:
    PgmTokens(const std::string& data, std::size_t start) : data_(data), pos_(start) {}

    long next() {
        skip_space_and_comments();
        if (pos_ >= data_.size() || !std::isdigit(static_cast<unsigned char>(data_[pos_])))
            throw format_error("read_pgm: expected integer token");
        long v = 0;
        while (pos_ < data_.size() && std::isdigit(static_cast<unsigned char>(data_[pos_]))) {
            v = v * 10 + (data_[pos_] - '0');
            if (v > 1000000000L)
                throw format_error("read_pgm: integer token out of range");
            ++pos_;
        }
        return v;
    }
    void skip_single_whitespace() {
        if (pos_ >= data_.size() || !std::isspace(static_cast<unsigned char>(data_[pos_])))
            throw format_error("read_pgm: missing whitespace after header");
        ++pos_;
    }
    std::size_t position() const { return pos_; }
    void expect_end() {
        // Comments are a header construct; after the payload only
        // whitespace may remain.
        while (pos_ < data_.size() &&
               std::isspace(static_cast<unsigned char>(data_[pos_])))
            ++pos_;
        if (pos_ != data_.size())
            throw format_error("read_pgm: trailing bytes after payload");
    }

  private:
    void skip_space_and_comments() {
        while (pos_ < data_.size()) {
            if (std::isspace(static_cast<unsigned char>(data_[pos_]))) {
                ++pos_;
            } else if (data_[pos_] == '#') {
                while (pos_ < data_.size() && data_[pos_] != '\n')
                    ++pos_;
            } else {
                break;
            }
        }
    }
    const std::string& data_;
    std::size_t pos_;
};

} // namespace

ImageXd read_pgm(const std::string& path) {
    const std::string data = read_file(path, "read_pgm");
    if (data.size() < 2)
        throw format_error("read_pgm: truncated file");
    if (data[0] != 'P' || (data[1] != '2' && data[1] != '5')) {
        if (data[0] == 'P')
            throw format_error("read_pgm: unsupported Netpbm variant P" +
                               std::string(1, data[1]) + " (only P2/P5 grayscale)");
        throw format_error("read_pgm: bad magic");
    }
    const bool binary = data[1] == '5';
    PgmTokens tokens(data, 2);
    const long w = tokens.next();
    const long h = tokens.next();
    const long maxval = tokens.next();
    if (w < 1 || h < 1 || maxval < 1 || maxval > 65535)
        throw format_error("read_pgm: invalid header values");

    ImageXd out(h, w);
    if (binary) {
        tokens.skip_single_whitespace();
        const std::size_t bytes_per = maxval > 255 ? 2 : 1;
        const std::size_t need = static_cast<std::size_t>(h) * w * bytes_per;
        if (tokens.position() + need > data.size())
            throw format_error("read_pgm: truncated payload");
        if (tokens.position() + need < data.size())
            throw format_error("read_pgm: trailing bytes after payload");
        std::size_t p = tokens.position();
        for (long y = 0; y < h; ++y)
            for (long x = 0; x < w; ++x) {
                long v = static_cast<unsigned char>(data[p++]);
                if (bytes_per == 2)
                    v = (v << 8) | static_cast<unsigned char>(data[p++]); // big-endian
                if (v > maxval)
                    throw format_error("read_pgm: sample exceeds maxval");
                out(y, x) = static_cast<double>(v) / static_cast<double>(maxval);
            }
    } else {
        for (long y = 0; y < h; ++y)
            for (long x = 0; x < w; ++x) {
                const long v = tokens.next();
                if (v > maxval)
                    throw format_error("read_pgm: sample exceeds maxval");
                out(y, x) = static_cast<double>(v) / static_cast<double>(maxval);
            }
        tokens.expect_end();
    }
    return out;
}

void write_pgm(const ImageXd& intensities, const std::string& path, int maxval,
               bool binary) {
    if (intensities.size() == 0)
        throw config_error("write_pgm: empty image");
    if (maxval < 1 || maxval > 65535)
        throw config_error("write_pgm: maxval must lie in [1, 65535]");
    if ((intensities < 0.0).any() || (intensities > 1.0).any())
        throw domain_error("write_pgm: intensities must lie in [0, 1]");

    std::ostringstream header;
    header << (binary ? "P5" : "P2") << "\n"
           << intensities.cols() << " " << intensities.rows() << "\n"
           << maxval << "\n";
    std::string buf = header.str();
    for (Eigen::Index y = 0; y < intensities.rows(); ++y) {
        for (Eigen::Index x = 0; x < intensities.cols(); ++x) {
            const long v = std::lround(intensities(y, x) * maxval);
            if (binary) {
                if (maxval > 255)
                    buf.push_back(static_cast<char>((v >> 8) & 0xff));
                buf.push_back(static_cast<char>(v & 0xff));
            } else {
                buf += std::to_string(v);
                buf.push_back(x + 1 == intensities.cols() ? '\n' : ' ');
            }
        }
    }
    write_file(path, buf, "write_pgm");
}

} // namespace unicorn
