// Seed ingestion: user-marked slice images are parsed for red strokes and
// embedded into the volume as the initial root voxel set.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rootlevel/core.hpp"
#include "rootlevel/image_io.hpp"
#include "rootlevel/volume.hpp"

namespace rootlevel {

enum class Axis : std::uint8_t { X = 0, Y = 1, Z = 2 };

// One marked cross-section. The mask axes follow the image: for a Z slice
// (u,v) = (x,y); for a Y slice (u,v) = (x,z); for an X slice (u,v) = (y,z).
struct MarkedSlice {
  Axis axis = Axis::Z;
  int index = 0;
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> mask;  // width*height, u-fastest, 0 or 1

  bool marked(int u, int v) const {
    return mask[static_cast<std::size_t>(v) * width + u] != 0;
  }
};

// A pixel counts as a mark when it is dominantly red: R >= 128 and R >= 2G
// and R >= 2B, in 8-bit units. The ratio test keeps anti-aliased stroke
// edges while rejecting every achromatic pixel of the underlying scan.
bool is_red_mark(int r, int g, int b);

// Parses one marked image. width/height of the image must equal the volume
// cross-section perpendicular to axis (expected_w, expected_h); greyscale
// images are accepted and yield an empty mask.
MarkedSlice parse_marked_slice(const ImageBuffer& image, Axis axis, int index,
                               int expected_w, int expected_h);

struct SeedSet {
  std::vector<VoxelCoord> voxels;  // sorted, duplicates collapsed
  std::uint64_t dropped_gate = 0;  // marks discarded by the greylevel gates
};

// Union of all marks mapped into voxel coordinates. Marks whose greylevel
// falls below g_min or outside [band_lo, band_hi] are dropped and counted,
// not kept: strokes can bleed onto dark background. The result does not
// depend on slice order. Throws if the union ends up empty.
SeedSet embed_marks(const std::vector<MarkedSlice>& slices, const Volume& vol,
                    Grey g_min, Grey band_lo, Grey band_hi);

// Loads every init_<axis>_<index>.png in the directory. Files not matching
// the name pattern are an error: a typo would otherwise silently drop a
// hand-marked slice. Slice indices must be in volume bounds.
std::vector<MarkedSlice> load_init_dir(const std::string& directory, const Dims& dims);

}  // namespace rootlevel
