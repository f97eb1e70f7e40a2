#include <doctest.h>
#include <tiffio.h>

#include <cstdint>
#include <fstream>
#include <vector>

#include "rootlevel/image_io.hpp"
#include "testutil.hpp"

using namespace rootlevel;

namespace {

void write_tiff_grey(const std::filesystem::path& path, int width, int height, int depth,
                     const std::vector<std::uint16_t>& samples) {
  TIFF* tif = TIFFOpen(path.c_str(), "w");
  REQUIRE(tif != nullptr);
  TIFFSetField(tif, TIFFTAG_IMAGEWIDTH, width);
  TIFFSetField(tif, TIFFTAG_IMAGELENGTH, height);
  TIFFSetField(tif, TIFFTAG_BITSPERSAMPLE, depth);
  TIFFSetField(tif, TIFFTAG_SAMPLESPERPIXEL, 1);
  TIFFSetField(tif, TIFFTAG_PHOTOMETRIC, PHOTOMETRIC_MINISBLACK);
  TIFFSetField(tif, TIFFTAG_PLANARCONFIG, PLANARCONFIG_CONTIG);
  TIFFSetField(tif, TIFFTAG_ROWSPERSTRIP, 1);
  std::vector<std::uint8_t> row8(width);
  std::vector<std::uint16_t> row16(width);
  for (int y = 0; y < height; ++y) {
    if (depth == 8) {
      for (int x = 0; x < width; ++x)
        row8[x] = static_cast<std::uint8_t>(samples[static_cast<std::size_t>(y) * width + x]);
      TIFFWriteScanline(tif, row8.data(), y, 0);
    } else {
      for (int x = 0; x < width; ++x)
        row16[x] = samples[static_cast<std::size_t>(y) * width + x];
      TIFFWriteScanline(tif, row16.data(), y, 0);
    }
  }
  TIFFClose(tif);
}

}  // namespace

TEST_SUITE("image_io") {

TEST_CASE("grey8 png roundtrip") {
  testutil::TempDir tmp;
  const auto path = tmp / "a.png";
  std::vector<std::uint8_t> pixels = {0, 1, 2, 3, 4, 5};
  write_png_grey8(path, 3, 2, pixels.data());

  const ImageBuffer img = read_image(path);
  CHECK(img.width == 3);
  CHECK(img.height == 2);
  CHECK(img.depth == 8);
  CHECK(img.channels == 1);
  for (int y = 0; y < 2; ++y)
    for (int x = 0; x < 3; ++x) CHECK(img.sample(x, y) == pixels[y * 3 + x]);
}

TEST_CASE("rgb8 png roundtrip") {
  testutil::TempDir tmp;
  const auto path = tmp / "rgb.png";
  std::vector<std::uint8_t> rgb = {255, 0, 0, 0, 255, 0, 0, 0, 255, 10, 20, 30};
  write_png_rgb8(path, 2, 2, rgb.data());

  const ImageBuffer img = read_image(path);
  CHECK(img.width == 2);
  CHECK(img.height == 2);
  CHECK(img.channels == 3);
  for (int y = 0; y < 2; ++y)
    for (int x = 0; x < 2; ++x)
      for (int c = 0; c < 3; ++c) CHECK(img.sample(x, y, c) == rgb[(y * 2 + x) * 3 + c]);
}

TEST_CASE("tiff 16-bit grey read") {
  testutil::TempDir tmp;
  const auto path = tmp / "a.tif";
  std::vector<std::uint16_t> samples = {0, 1000, 40000, 65535};
  write_tiff_grey(path, 2, 2, 16, samples);

  const ImageBuffer img = read_image(path);
  CHECK(img.width == 2);
  CHECK(img.height == 2);
  CHECK(img.depth == 16);
  CHECK(img.channels == 1);
  CHECK(img.sample(0, 0) == 0);
  CHECK(img.sample(1, 0) == 1000);
  CHECK(img.sample(0, 1) == 40000);
  CHECK(img.sample(1, 1) == 65535);
}

TEST_CASE("tiff 8-bit grey read") {
  testutil::TempDir tmp;
  const auto path = tmp / "b.tif";
  write_tiff_grey(path, 2, 1, 8, {7, 250});
  const ImageBuffer img = read_image(path);
  CHECK(img.depth == 8);
  CHECK(img.sample(0, 0) == 7);
  CHECK(img.sample(1, 0) == 250);
}

TEST_CASE("missing file is an error") {
  CHECK_THROWS(read_image("/nonexistent/zzz.png"));
}

TEST_CASE("unrecognized signature is an error") {
  testutil::TempDir tmp;
  const auto path = tmp / "junk.png";
  std::ofstream(path) << "this is not an image";
  CHECK_THROWS_WITH_AS(read_image(path), doctest::Contains("unrecognized"), std::runtime_error);
}

}  // TEST_SUITE
