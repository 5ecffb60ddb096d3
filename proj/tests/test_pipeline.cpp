#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "unicorn/classical.hpp"
#include "unicorn/errors.hpp"
#include "unicorn/pipeline.hpp"
#include "unicorn/raster_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <string>

using namespace unicorn;

namespace {

void write_bytes(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

std::string read_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

} // namespace

TEST_CASE("normalize_to_m endpoints and inverse") {
    ImageXd intensities(1, 4);
    intensities << 0.0, 0.5, 1.0, 0.25;
    const GroundTruthMap truth = normalize_to_m(intensities);
    CHECK(truth(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(truth(0, 1) == doctest::Approx(1.25).epsilon(1e-15));
    CHECK(truth(0, 2) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(truth(0, 3) == doctest::Approx(0.875).epsilon(1e-15));
    const ImageXd back = m_to_intensity(truth);
    CHECK((back - intensities).abs().maxCoeff() < 1e-15);

    ImageXd bad(1, 1);
    bad << 1.5;
    CHECK_THROWS_AS(normalize_to_m(bad), domain_error);
    bad << -0.1;
    CHECK_THROWS_AS(normalize_to_m(bad), domain_error);
    ImageXd bad_m(1, 1);
    bad_m << 2.5;
    CHECK_THROWS_AS(m_to_intensity(bad_m), domain_error);
}

TEST_CASE("synthesize_measurement: second moment and moment re-estimate") {
    const GroundTruthMap truth = GroundTruthMap::Constant(512, 512, 1.25);
    Rng rng(9);
    const EnvelopeImage image = synthesize_measurement(truth, 1.0, rng);
    CHECK((image > 0.0).all());
    CHECK(image.square().mean() == doctest::Approx(1.0).epsilon(0.02));
    std::vector<double> flat(image.data(), image.data() + image.size());
    CHECK(moment_estimate_window(flat) == doctest::Approx(1.25).epsilon(0.02 / 1.25));
}

TEST_CASE("synthesize_measurement: deterministic per seed, independent per pixel") {
    const GroundTruthMap truth = GroundTruthMap::Constant(128, 128, 1.0);
    Rng a(33), b(33);
    const EnvelopeImage first = synthesize_measurement(truth, 1.0, a);
    const EnvelopeImage second = synthesize_measurement(truth, 1.0, b);
    CHECK((first == second).all());

    // Horizontally adjacent pixels are uncorrelated.
    const auto left = first.block(0, 0, 128, 127);
    const auto right = first.block(0, 1, 128, 127);
    const double ml = left.mean(), mr = right.mean();
    const double cov = ((left - ml) * (right - mr)).mean();
    const double corr = cov / std::sqrt((left - ml).square().mean() *
                                        (right - mr).square().mean());
    CHECK(std::abs(corr) < 0.02);
}

TEST_CASE("split_dataset: sizes, determinism, disjoint and exhaustive") {
    std::vector<std::pair<GroundTruthMap, EnvelopeImage>> items;
    for (int i = 0; i < 10; ++i) {
        GroundTruthMap truth = GroundTruthMap::Constant(2, 2, 1.0);
        truth(0, 0) = 0.5 + 0.01 * i; // tag each item
        items.emplace_back(truth, EnvelopeImage::Constant(2, 2, 1.0));
    }
    const Dataset split = split_dataset(items, 0.8, 77);
    CHECK(split.train.size() == 8);
    CHECK(split.test.size() == 2);

    const Dataset again = split_dataset(items, 0.8, 77);
    std::set<double> tags, expected;
    for (std::size_t i = 0; i < items.size(); ++i)
        expected.insert(items[i].first(0, 0));
    for (const auto& [t, m] : split.train)
        tags.insert(t(0, 0));
    for (const auto& [t, m] : split.test)
        tags.insert(t(0, 0));
    CHECK(tags == expected); // disjoint + exhaustive: 10 distinct tags survive
    for (std::size_t i = 0; i < split.train.size(); ++i)
        CHECK(split.train[i].first(0, 0) == again.train[i].first(0, 0));

    const Dataset other = split_dataset(items, 0.8, 78);
    bool any_difference = false;
    for (std::size_t i = 0; i < split.train.size(); ++i)
        any_difference = any_difference ||
                         split.train[i].first(0, 0) != other.train[i].first(0, 0);
    CHECK(any_difference);

    CHECK(split_dataset(items, 0.75, 1).train.size() == 8); // ceil(7.5)
    CHECK_THROWS_AS(split_dataset(items, 0.0, 1), config_error);
    CHECK_THROWS_AS(split_dataset(items, 1.0, 1), config_error);
    CHECK_THROWS_AS(split_dataset({}, 0.5, 1), config_error);
}

TEST_CASE("procedural generators stay in range and vary with seed") {
    Rng rng(5);
    for (auto kind : {Generator::Ramp, Generator::Disk, Generator::Checkerboard,
                      Generator::Strokes}) {
        const ImageXd a = generate_intensity(kind, 32, 24, 0, rng);
        CHECK(a.rows() == 32);
        CHECK(a.cols() == 24);
        CHECK(a.minCoeff() >= 0.0);
        CHECK(a.maxCoeff() <= 1.0);
        CHECK((a.maxCoeff() - a.minCoeff()) > 0.05); // not constant
    }
    // Mixed cycles families by index.
    Rng r1(8), r2(8);
    const ImageXd mixed0 = generate_intensity(Generator::Mixed, 16, 16, 0, r1);
    const ImageXd ramp0 = generate_intensity(Generator::Ramp, 16, 16, 0, r2);
    CHECK((mixed0 == ramp0).all());
}

TEST_CASE("disk_phantom geometry and ROI mask") {
    const auto [truth, roi] = disk_phantom(64, 64, 1.2, 0.6, 0.25);
    CHECK(truth(0, 0) == doctest::Approx(1.2).epsilon(1e-15));
    CHECK(truth(32, 32) == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(roi(32, 32));
    CHECK(!roi(0, 0));
    // ROI area close to pi * r^2 with r = 0.25 * 64
    const double area = static_cast<double>(roi.count());
    CHECK(area == doctest::Approx(M_PI * 16.0 * 16.0).epsilon(0.05));
    // ROI and truth agree pixel-for-pixel
    for (int y = 0; y < 64; ++y)
        for (int x = 0; x < 64; ++x)
            CHECK(truth(y, x) == (roi(y, x) ? 0.6 : 1.2));
}

TEST_CASE("nkrf raster round-trip without mask") {
    Raster raster;
    raster.data = ImageXd(3, 5);
    Rng rng(21);
    for (int y = 0; y < 3; ++y)
        for (int x = 0; x < 5; ++x)
            raster.data(y, x) = rng.normal();
    const std::string path = "roundtrip.nkrf";
    write_raster(raster, path);
    const Raster back = read_raster(path);
    CHECK(!back.mask.has_value());
    CHECK((back.data == raster.data).all());
    std::remove(path.c_str());
}

TEST_CASE("nkrf raster round-trip with a packed mask at an awkward width") {
    Raster raster;
    raster.data = ImageXd::Zero(13, 29); // 13*29 = 377 bits -> padded final byte
    MaskXb mask(13, 29);
    Rng rng(4);
    for (int y = 0; y < 13; ++y)
        for (int x = 0; x < 29; ++x) {
            raster.data(y, x) = rng.uniform();
            mask(y, x) = rng.uniform() < 0.5;
        }
    raster.mask = mask;
    const std::string path = "masked.nkrf";
    write_raster(raster, path);
    const Raster back = read_raster(path);
    REQUIRE(back.mask.has_value());
    CHECK((back.data == raster.data).all());
    CHECK((*back.mask == mask).all());
    std::remove(path.c_str());
}

TEST_CASE("nkrf large raster round-trips bit-exactly") {
    Raster raster;
    raster.data = ImageXd(1580, 610);
    Rng rng(99);
    for (Eigen::Index i = 0; i < raster.data.size(); ++i)
        raster.data.data()[i] = rng.normal();
    const std::string path = "large.nkrf";
    write_raster(raster, path);
    const Raster back = read_raster(path);
    CHECK((back.data == raster.data).all());
    std::remove(path.c_str());
}

TEST_CASE("nkrf rejects zero dimensions, truncation, trailing bytes, bad magic") {
    Raster raster;
    raster.data = ImageXd::Zero(0, 4);
    CHECK_THROWS_AS(write_raster(raster, "zero.nkrf"), config_error);

    raster.data = ImageXd::Constant(4, 4, 1.5);
    const std::string path = "corrupt.nkrf";
    write_raster(raster, path);
    const std::string data = read_bytes(path);

    write_bytes(path, data.substr(0, data.size() - 3));
    CHECK_THROWS_AS(read_raster(path), format_error);

    write_bytes(path, data + "x");
    CHECK_THROWS_AS(read_raster(path), format_error);

    std::string bad = data;
    bad[0] = 'Z';
    write_bytes(path, bad);
    CHECK_THROWS_AS(read_raster(path), format_error);

    bad = data;
    bad[4] = 7; // unsupported version
    write_bytes(path, bad);
    CHECK_THROWS_AS(read_raster(path), format_error);

    bad = data;
    bad[8] = bad[9] = bad[10] = bad[11] = 0; // zero height
    write_bytes(path, bad);
    CHECK_THROWS_AS(read_raster(path), format_error);

    CHECK_THROWS_AS(read_raster("does-not-exist.nkrf"), format_error);
    std::remove(path.c_str());
}

TEST_CASE("param map round-trips values and validity") {
    ParamMap map(5, 7);
    Rng rng(3);
    for (int y = 0; y < 5; ++y)
        for (int x = 0; x < 7; ++x) {
            map.values(y, x) = 0.5 + rng.uniform();
            map.valid(y, x) = rng.uniform() < 0.8;
        }
    const std::string path = "map.nkrf";
    write_param_map(map, path);
    const ParamMap back = read_param_map(path);
    CHECK((back.values == map.values).all());
    CHECK((back.valid == map.valid).all());
    std::remove(path.c_str());
}

TEST_CASE("pgm ascii values map to [0, 1]") {
    const std::string path = "gray.pgm";
    write_bytes(path, "P2\n# comment\n4 1\n255\n0 127 128 255\n");
    const ImageXd image = read_pgm(path);
    CHECK(image.rows() == 1);
    CHECK(image.cols() == 4);
    CHECK(image(0, 0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(image(0, 1) == doctest::Approx(127.0 / 255.0).epsilon(1e-15));
    CHECK(image(0, 2) == doctest::Approx(128.0 / 255.0).epsilon(1e-15));
    CHECK(image(0, 3) == doctest::Approx(1.0).epsilon(1e-15));
    std::remove(path.c_str());
}

TEST_CASE("pgm binary round-trip at 8 and 16 bit") {
    ImageXd image(6, 9);
    Rng rng(31);
    for (int y = 0; y < 6; ++y)
        for (int x = 0; x < 9; ++x)
            image(y, x) = rng.uniform();
    const std::string path = "rt.pgm";
    for (int maxval : {255, 65535}) {
        write_pgm(image, path, maxval, true);
        const ImageXd back = read_pgm(path);
        CHECK((back - image).abs().maxCoeff() <= 0.5 / maxval + 1e-12);
        // Re-writing the quantized image reproduces it exactly.
        write_pgm(back, path, maxval, true);
        const ImageXd twice = read_pgm(path);
        CHECK((twice == back).all());
    }
    // ascii path round-trips the quantized image too
    write_pgm(image, path, 255, false);
    const ImageXd ascii_back = read_pgm(path);
    CHECK((ascii_back - image).abs().maxCoeff() <= 0.5 / 255 + 1e-12);
    std::remove(path.c_str());
}

TEST_CASE("pgm rejects color, oversized maxval, truncation and trailing bytes") {
    const std::string path = "bad.pgm";
    write_bytes(path, "P6\n2 2\n255\n aaaaaaaaaaaa");
    CHECK_THROWS_WITH_AS(read_pgm(path), doctest::Contains("P6"), format_error);

    write_bytes(path, "P2\n2 1\n70000\n0 1\n");
    CHECK_THROWS_AS(read_pgm(path), format_error);

    write_bytes(path, "P2\n2 2\n255\n0 1 2\n");
    CHECK_THROWS_AS(read_pgm(path), format_error);

    write_bytes(path, "P2\n2 1\n255\n0 1 2\n");
    CHECK_THROWS_AS(read_pgm(path), format_error);

    write_bytes(path, std::string("P5\n2 1\n255\n\x01\x02", 12) + "junk");
    CHECK_THROWS_AS(read_pgm(path), format_error);

    write_bytes(path, "P2\n2 1\n255\n0 300\n");
    CHECK_THROWS_AS(read_pgm(path), format_error);
    std::remove(path.c_str());
}
