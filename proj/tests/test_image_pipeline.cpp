#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "threadtone/image.hpp"
#include "threadtone/image_pipeline.hpp"

using namespace threadtone;
namespace fs = std::filesystem;

static const fs::path kData = THREADTONE_TEST_DATA;

TEST_CASE("load_grayscale decodes PNG and converts color by luma") {
  const GrayImage white = load_grayscale(kData / "white.png");
  CHECK(white.rows() == 1);
  CHECK(white.cols() == 1);
  CHECK(white(0, 0) == 255);

  // 0.299 * 255 = 76.245
  const GrayImage red = load_grayscale(kData / "red.png");
  CHECK(red(0, 0) == 76);
  CHECK(luminance(255, 0, 0) == 76);
}

TEST_CASE("gray input passes through a save/load cycle unchanged") {
  std::mt19937 rng(3);
  const GrayImage img = oracle::random_image(401, 401, rng);
  const fs::path dir = fs::temp_directory_path();
  for (const char* name : {"tt_roundtrip.png", "tt_roundtrip.pgm"}) {
    save_grayscale(img, dir / name);
    CHECK(load_grayscale(dir / name) == img);
  }
}

TEST_CASE("load_grayscale errors") {
  CHECK_THROWS_AS(load_grayscale(kData / "does_not_exist.png"), ImageError);
  const fs::path junk = fs::temp_directory_path() / "tt_junk.bin";
  {
    std::ofstream out(junk);
    out << "definitely not an image";
  }
  CHECK_THROWS_AS(load_grayscale(junk), ImageError);
}

TEST_CASE("ascii PGM with comments") {
  const fs::path p = fs::temp_directory_path() / "tt_ascii.pgm";
  {
    std::ofstream out(p);
    out << "P2\n# comment\n3 2\n15\n0 15 5\n10 0 15\n";
  }
  const GrayImage img = load_grayscale(p);
  REQUIRE(img.rows() == 2);
  REQUIRE(img.cols() == 3);
  CHECK(img(0, 1) == 255);
  CHECK(img(0, 2) == 85);
  CHECK(img(1, 0) == 170);
}

TEST_CASE("crop_region defaults to the largest centered circle") {
  const GrayImage img = GrayImage::Constant(401, 401, 9);
  const Cropped c = crop_region(img);
  CHECK(c.image.rows() == 401);
  CHECK(c.image.cols() == 401);
  CHECK(c.region.radius == 200);
  CHECK(c.region.center_x == 200);

  const Cropped wide = crop_region(GrayImage::Zero(300, 500));
  CHECK(wide.region.radius == 149);
  CHECK(wide.image.rows() == 299);
  CHECK(crop_region(GrayImage::Zero(301, 501)).region.radius == 150);
}

TEST_CASE("crop_region pixel counts") {
  CHECK(crop_region(GrayImage::Zero(5, 5), {Shape::circle, 2, 2, 0}).region.n() == 1);
  // integer points with dx²+dy² ≤ 4: 1 + 4 + 4 + 4 = 13
  CHECK(crop_region(GrayImage::Zero(5, 5), {Shape::circle, 2, 2, 2}).region.n() == 13);
  CHECK(crop_region(GrayImage::Zero(5, 5), {Shape::square, 2, 2, 2}).region.n() == 25);
}

TEST_CASE("crop_region rejects regions outside the image") {
  const GrayImage img = GrayImage::Zero(20, 20);
  CHECK_THROWS_AS(crop_region(img, {Shape::circle, 5, 10, 6}), std::out_of_range);
  CHECK_THROWS_AS(crop_region(img, {Shape::circle, 10, 10, 10}), std::out_of_range);
  CHECK_NOTHROW(crop_region(img, {Shape::circle, 10, 10, 9}));
}

TEST_CASE("region index is a bijection onto inside pixels") {
  const Region region = make_region(Shape::circle, 17);
  int count = 0;
  for (std::size_t p = 0; p < region.inside.size(); ++p) {
    if (!region.inside[p]) {
      CHECK(region.pixel_index[p] == -1);
      continue;
    }
    CHECK(region.pixel_offset[region.pixel_index[p]] == static_cast<int>(p));
    ++count;
  }
  CHECK(count == region.n());
}

TEST_CASE("lattice disk bound holds for r >= 2") {
  for (int r = 2; r <= 60; ++r) {
    const int n = make_region(Shape::circle, r).n();
    CHECK(n >= std::numbers::pi * (r - 1) * (r - 1));
    CHECK(n <= std::numbers::pi * (r + 1) * (r + 1));
  }
}

TEST_CASE("invert") {
  GrayImage px(1, 2);
  px << 0, 255;
  const GrayImage inv = invert(px);
  CHECK(inv(0, 0) == 255);
  CHECK(inv(0, 1) == 0);
  std::mt19937 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const GrayImage img = oracle::random_image(7 + trial, 5 + trial, rng);
    CHECK(invert(invert(img)) == img);
  }
}

TEST_CASE("gradient of a constant image is zero") {
  const GradientField g = gradient_field(GrayImage::Constant(9, 9, 77));
  CHECK(g.magnitude.isZero());
  CHECK(g.gx.isZero());
}

TEST_CASE("vertical step edge has no vertical gradient") {
  GrayImage img(7, 8);
  for (int y = 0; y < 7; ++y)
    for (int x = 0; x < 8; ++x) img(y, x) = x < 4 ? 20 : 200;
  const GradientField g = gradient_field(img);
  CHECK(g.gy.isZero());
  CHECK(g.gx(3, 3) == doctest::Approx(4 * 180));
  CHECK(g.magnitude.maxCoeff() == doctest::Approx(255));
}

TEST_CASE("5x5 ramp matches direct Sobel convolution") {
  GrayImage ramp(5, 5);
  for (int y = 0; y < 5; ++y)
    for (int x = 0; x < 5; ++x) ramp(y, x) = static_cast<std::uint8_t>(10 * x + 3 * y);
  const auto [gx, gy] = oracle::sobel(ramp);
  const GradientField g = gradient_field(ramp);
  CHECK((g.gx - gx).cwiseAbs().maxCoeff() == 0.0);
  CHECK((g.gy - gy).cwiseAbs().maxCoeff() == 0.0);
  // interior: gx = 4·20, gy = 4·6
  CHECK(g.gx(2, 2) == 80);
  CHECK(g.gy(2, 2) == 24);
  // left border replicates, halving the horizontal difference
  CHECK(g.gx(2, 0) == 40);
  const RealImage raw = (gx.array().square() + gy.array().square()).sqrt().matrix();
  const RealImage expected = raw * (255.0 / raw.maxCoeff());
  CHECK((g.magnitude - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("gradient needs 3x3") {
  CHECK_THROWS_AS(gradient_field(GrayImage::Zero(2, 5)), std::invalid_argument);
}

TEST_CASE("region-normalized gradient saturates outside the region") {
  GrayImage img = GrayImage::Constant(11, 11, 100);
  img(0, 0) = 255;  // corner spike, outside the disk
  img(5, 6) = 140;
  const Region region = make_region(Shape::circle, 5);
  const GradientField g = gradient_field(img, region);
  double inside_max = 0;
  for (int off : region.pixel_offset) inside_max = std::max(inside_max, g.magnitude.data()[off]);
  CHECK(inside_max == doctest::Approx(255));
  CHECK(g.magnitude.maxCoeff() <= 255.0);
}

TEST_CASE("build_target endpoints and blend") {
  const Region region = make_region(Shape::circle, 3);
  std::mt19937 rng(5);
  const GrayImage inv = oracle::random_image(7, 7, rng);
  const GradientField g = gradient_field(inv, region);
  const TargetVector b0 = build_target(inv, g, region, 0.0);
  const TargetVector b1 = build_target(inv, g, region, 1.0);
  for (int i = 0; i < region.n(); ++i) {
    CHECK(b0[i] == inv.data()[region.pixel_offset[i]]);
    CHECK(b1[i] == g.magnitude.data()[region.pixel_offset[i]]);
  }
  for (double alpha : {0.1, 0.25, 0.5, 0.9}) {
    const TargetVector b = build_target(inv, g, region, alpha);
    CHECK((b - ((1 - alpha) * b0 + alpha * b1)).cwiseAbs().maxCoeff() < 1e-12);
  }
  CHECK_THROWS_AS(build_target(inv, g, region, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(build_target(inv, g, region, -0.1), std::invalid_argument);
}

TEST_CASE("build_target arithmetic") {
  const Region region = make_region(Shape::square, 1);
  GrayImage inv = GrayImage::Constant(3, 3, 100);
  GradientField g{RealImage::Zero(3, 3), RealImage::Zero(3, 3), RealImage::Constant(3, 3, 50)};
  const TargetVector b = build_target(inv, g, region, 0.5);
  CHECK(b[4] == doctest::Approx(75));
}

TEST_CASE("pixel weights") {
  const Region region = make_region(Shape::circle, 10);
  CHECK(build_pixel_weights(region).isOnes());
  CHECK((build_pixel_weights(region, GrayImage::Constant(21, 21, 255)).array() == 2.0).all());

  GrayImage mask = GrayImage::Zero(21, 21);
  mask.block(5, 6, 4, 7).setConstant(200);
  const PixelWeights w = build_pixel_weights(region, mask);
  for (int i = 0; i < region.n(); ++i) {
    const int off = region.pixel_offset[i];
    const int y = off / 21, x = off % 21;
    const bool in_rect = y >= 5 && y < 9 && x >= 6 && x < 13;
    CHECK(w[i] == (in_rect ? 2.0 : 1.0));
  }
  CHECK_THROWS_AS(build_pixel_weights(region, GrayImage::Zero(20, 21)), std::invalid_argument);
}
