#include <doctest.h>

#include <algorithm>
#include <vector>

#include "rootlevel/image_io.hpp"
#include "rootlevel/init.hpp"
#include "testutil.hpp"

using namespace rootlevel;

namespace {

ImageBuffer rgb_image(int w, int h) {
  ImageBuffer img;
  img.width = w;
  img.height = h;
  img.depth = 8;
  img.channels = 3;
  img.samples.assign(static_cast<std::size_t>(w) * h * 3, 0);
  return img;
}

void set_rgb(ImageBuffer& img, int x, int y, int r, int g, int b) {
  const std::size_t base = (static_cast<std::size_t>(y) * img.width + x) * 3;
  img.samples[base] = static_cast<std::uint16_t>(r);
  img.samples[base + 1] = static_cast<std::uint16_t>(g);
  img.samples[base + 2] = static_cast<std::uint16_t>(b);
}

Volume flat_volume(Dims dims, Grey value) {
  Volume vol(dims, 8);
  for (std::size_t i = 0; i < dims.voxels(); ++i) vol[i] = value;
  return vol;
}

}  // namespace

TEST_SUITE("init") {

TEST_CASE("red dominance predicate") {
  CHECK(is_red_mark(255, 0, 0));
  CHECK(is_red_mark(200, 90, 10));
  CHECK(is_red_mark(128, 64, 64));
  CHECK_FALSE(is_red_mark(127, 0, 0));
  CHECK_FALSE(is_red_mark(128, 65, 0));
  CHECK_FALSE(is_red_mark(128, 0, 65));
  CHECK_FALSE(is_red_mark(255, 128, 200));
  // Unmodified greyscale pixels are never dominantly red.
  for (int g = 0; g <= 255; g += 5) CHECK_FALSE(is_red_mark(g, g, g));
}

TEST_CASE("parse_marked_slice extracts red pixels") {
  ImageBuffer img = rgb_image(4, 3);
  set_rgb(img, 1, 2, 255, 0, 0);
  set_rgb(img, 3, 0, 200, 90, 10);
  set_rgb(img, 0, 0, 100, 100, 100);
  const MarkedSlice s = parse_marked_slice(img, Axis::Z, 5, 4, 3);
  CHECK(s.axis == Axis::Z);
  CHECK(s.index == 5);
  CHECK(s.marked(1, 2));
  CHECK(s.marked(3, 0));
  CHECK_FALSE(s.marked(0, 0));
  int count = 0;
  for (int v = 0; v < 3; ++v)
    for (int u = 0; u < 4; ++u) count += s.marked(u, v) ? 1 : 0;
  CHECK(count == 2);
}

TEST_CASE("greyscale marked image yields an empty mask") {
  ImageBuffer img;
  img.width = 4;
  img.height = 3;
  img.depth = 8;
  img.channels = 1;
  img.samples.assign(12, 200);
  const MarkedSlice s = parse_marked_slice(img, Axis::Z, 0, 4, 3);
  for (int v = 0; v < 3; ++v)
    for (int u = 0; u < 4; ++u) CHECK_FALSE(s.marked(u, v));
}

TEST_CASE("marked slice dimension mismatch is an error") {
  ImageBuffer img = rgb_image(4, 3);
  CHECK_THROWS(parse_marked_slice(img, Axis::Z, 0, 5, 3));
}

TEST_CASE("embed maps a z-slice mark to its voxel") {
  const Volume vol = flat_volume(Dims{8, 8, 8}, 100);
  ImageBuffer img = rgb_image(8, 8);
  set_rgb(img, 3, 4, 255, 0, 0);
  const MarkedSlice s = parse_marked_slice(img, Axis::Z, 5, 8, 8);
  const SeedSet seeds = embed_marks({s}, vol, 1, 0, 255);
  REQUIRE(seeds.voxels.size() == 1);
  CHECK((seeds.voxels[0] == VoxelCoord{3, 4, 5}));
  CHECK(seeds.dropped_gate == 0);
}

TEST_CASE("axis conventions map (u,v) to the two free coordinates") {
  const Volume vol = flat_volume(Dims{6, 7, 8}, 100);

  ImageBuffer xi = rgb_image(7, 8);  // x-slice: u spans y, v spans z
  set_rgb(xi, 2, 3, 255, 0, 0);
  const SeedSet sx = embed_marks({parse_marked_slice(xi, Axis::X, 4, 7, 8)}, vol, 1, 0, 255);
  REQUIRE(sx.voxels.size() == 1);
  CHECK((sx.voxels[0] == VoxelCoord{4, 2, 3}));

  ImageBuffer yi = rgb_image(6, 8);  // y-slice: u spans x, v spans z
  set_rgb(yi, 1, 5, 255, 0, 0);
  const SeedSet sy = embed_marks({parse_marked_slice(yi, Axis::Y, 2, 6, 8)}, vol, 1, 0, 255);
  REQUIRE(sy.voxels.size() == 1);
  CHECK((sy.voxels[0] == VoxelCoord{1, 2, 5}));
}

TEST_CASE("union collapses the same voxel marked on two axes") {
  const Volume vol = flat_volume(Dims{8, 8, 8}, 100);
  ImageBuffer zi = rgb_image(8, 8);
  set_rgb(zi, 3, 4, 255, 0, 0);  // voxel (3,4,5)
  ImageBuffer xi = rgb_image(8, 8);
  set_rgb(xi, 4, 5, 255, 0, 0);  // x-slice 3, (u,v)=(4,5) -> voxel (3,4,5)
  const auto sz = parse_marked_slice(zi, Axis::Z, 5, 8, 8);
  const auto sx = parse_marked_slice(xi, Axis::X, 3, 8, 8);
  const SeedSet seeds = embed_marks({sz, sx}, vol, 1, 0, 255);
  CHECK(seeds.voxels.size() == 1);
}

TEST_CASE("disjoint marks on two axes give two voxels") {
  const Volume vol = flat_volume(Dims{8, 8, 8}, 100);
  ImageBuffer zi = rgb_image(8, 8);
  set_rgb(zi, 0, 0, 255, 0, 0);
  ImageBuffer xi = rgb_image(8, 8);
  set_rgb(xi, 7, 7, 255, 0, 0);
  const SeedSet seeds = embed_marks({parse_marked_slice(zi, Axis::Z, 1, 8, 8),
                                     parse_marked_slice(xi, Axis::X, 2, 8, 8)},
                                    vol, 1, 0, 255);
  CHECK(seeds.voxels.size() == 2);
}

TEST_CASE("seed set does not depend on slice order") {
  const Volume vol = flat_volume(Dims{8, 8, 8}, 100);
  std::vector<MarkedSlice> slices;
  for (int i = 0; i < 4; ++i) {
    ImageBuffer img = rgb_image(8, 8);
    set_rgb(img, i, i + 1, 255, 0, 0);
    set_rgb(img, 7 - i, 2, 255, 0, 0);
    slices.push_back(parse_marked_slice(img, Axis::Z, i, 8, 8));
  }
  const SeedSet forward = embed_marks(slices, vol, 1, 0, 255);
  std::reverse(slices.begin(), slices.end());
  const SeedSet reversed = embed_marks(slices, vol, 1, 0, 255);
  CHECK(forward.voxels == reversed.voxels);
  CHECK(std::is_sorted(forward.voxels.begin(), forward.voxels.end()));
}

TEST_CASE("greylevel gates drop marks and count them") {
  Volume vol = flat_volume(Dims{8, 8, 8}, 100);
  vol.at(0, 0, 2) = 0;    // below g_min
  vol.at(1, 0, 2) = 10;   // below band_lo
  vol.at(2, 0, 2) = 250;  // above band_hi

  ImageBuffer img = rgb_image(8, 8);
  set_rgb(img, 0, 0, 255, 0, 0);
  set_rgb(img, 1, 0, 255, 0, 0);
  set_rgb(img, 2, 0, 255, 0, 0);
  set_rgb(img, 3, 0, 255, 0, 0);  // survives
  const auto slice = parse_marked_slice(img, Axis::Z, 2, 8, 8);
  const SeedSet seeds = embed_marks({slice}, vol, 1, 50, 200);
  REQUIRE(seeds.voxels.size() == 1);
  CHECK((seeds.voxels[0] == VoxelCoord{3, 0, 2}));
  CHECK(seeds.dropped_gate == 3);
}

TEST_CASE("gate-dropped duplicates count once") {
  Volume vol = flat_volume(Dims{8, 8, 8}, 0);
  vol.at(4, 4, 4) = 100;
  ImageBuffer za = rgb_image(8, 8);
  set_rgb(za, 0, 0, 255, 0, 0);  // dark voxel (0,0,3)
  set_rgb(za, 4, 4, 255, 0, 0);  // mapped (4,4,3), dark too
  ImageBuffer zb = rgb_image(8, 8);
  set_rgb(zb, 0, 0, 255, 0, 0);  // same dark voxel again
  ImageBuffer zc = rgb_image(8, 8);
  set_rgb(zc, 4, 4, 255, 0, 0);  // the bright voxel (4,4,4)
  const SeedSet seeds = embed_marks({parse_marked_slice(za, Axis::Z, 3, 8, 8),
                                     parse_marked_slice(zb, Axis::Z, 3, 8, 8),
                                     parse_marked_slice(zc, Axis::Z, 4, 8, 8)},
                                    vol, 1, 0, 255);
  CHECK(seeds.voxels.size() == 1);
  CHECK(seeds.dropped_gate == 2);  // distinct dropped voxels, not mark events
}

TEST_CASE("empty union after gating is fatal") {
  const Volume vol = flat_volume(Dims{8, 8, 8}, 0);
  ImageBuffer img = rgb_image(8, 8);
  set_rgb(img, 3, 3, 255, 0, 0);
  const auto slice = parse_marked_slice(img, Axis::Z, 0, 8, 8);
  CHECK_THROWS_WITH_AS(embed_marks({slice}, vol, 1, 0, 255),
                       doctest::Contains("no initialization voxels"), std::runtime_error);
}

TEST_CASE("init directory loader") {
  const Dims dims{6, 7, 8};
  testutil::TempDir tmp;
  const auto write_marked = [&](const std::string& name, int w, int h) {
    std::vector<std::uint8_t> rgb(static_cast<std::size_t>(w) * h * 3, 0);
    rgb[0] = 255;  // one mark at (0,0)
    write_png_rgb8(tmp / name, w, h, rgb.data());
  };

  SUBCASE("loads slices for all three axes") {
    write_marked("init_z_3.png", 6, 7);
    write_marked("init_x_0.png", 7, 8);
    write_marked("init_Y_05.png", 6, 8);  // case-insensitive axis, padded index
    const auto slices = load_init_dir(tmp.path().string(), dims);
    REQUIRE(slices.size() == 3);
    CHECK(slices[0].axis == Axis::Y);  // alphabetical file order
    CHECK(slices[0].index == 5);
    CHECK(slices[1].axis == Axis::X);
    CHECK(slices[2].axis == Axis::Z);
    CHECK(slices[2].index == 3);
  }

  SUBCASE("unrecognized png name is an error") {
    write_marked("slice_3.png", 6, 7);
    CHECK_THROWS_WITH_AS(load_init_dir(tmp.path().string(), dims),
                         doctest::Contains("slice_3.png"), std::runtime_error);
  }

  SUBCASE("out-of-bounds index is an error") {
    write_marked("init_z_8.png", 6, 7);
    CHECK_THROWS(load_init_dir(tmp.path().string(), dims));
  }

  SUBCASE("cross-section dimension mismatch is an error") {
    write_marked("init_z_3.png", 7, 6);
    CHECK_THROWS(load_init_dir(tmp.path().string(), dims));
  }

  SUBCASE("missing directory is an error") {
    CHECK_THROWS(load_init_dir((tmp / "absent").string(), dims));
  }
}

}  // TEST_SUITE
