// Dense 3D greylevel volume and its slice-stack / raw file I/O.
//
// Layout is x-fastest, z slice-major: slice i of an image stack occupies
// z = i. Greylevels are unsigned integers at a declared bit depth (8 or 16);
// physical voxel pitch is carried as metadata only, all distances elsewhere
// are in voxel units.
#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "rootlevel/core.hpp"

namespace rootlevel {

class Volume {
 public:
  Volume() = default;
  Volume(Dims dims, int depth, double pitch_um = 0.0);

  const Dims& dims() const { return dims_; }
  int depth() const { return depth_; }
  double pitch_um() const { return pitch_um_; }
  void set_pitch_um(double p) { pitch_um_ = p; }

  Grey max_grey() const { return static_cast<Grey>((1u << depth_) - 1u); }

  Grey at(int x, int y, int z) const { return data_[dims_.index(x, y, z)]; }
  Grey& at(int x, int y, int z) { return data_[dims_.index(x, y, z)]; }
  Grey operator[](std::size_t i) const { return data_[i]; }
  Grey& operator[](std::size_t i) { return data_[i]; }

  const std::vector<Grey>& data() const { return data_; }
  std::vector<Grey>& data() { return data_; }

 private:
  Dims dims_;
  int depth_ = 8;
  double pitch_um_ = 0.0;
  std::vector<Grey> data_;
};

// Loads an alphabetically ordered directory of identically sized 8/16-bit
// single-channel images as a volume; image i becomes slice z = i. Mixed
// dimensions or bit depths abort with an error naming the offending file.
Volume load_slice_stack(const std::filesystem::path& directory);

// Loads a headerless little-endian raw file with the given dims and depth.
Volume load_raw(const std::filesystem::path& path, Dims dims, int depth);

// Writes the volume back out as headerless little-endian raw.
void save_raw(const Volume& vol, const std::filesystem::path& path);

// Writes a binary mask as one 8-bit PNG per z-slice (0 background / 255
// foreground), named mask_%05d.png.
void write_mask_stack(const Grid3<std::uint8_t>& mask, const std::filesystem::path& directory);

// Reads a mask written by write_mask_stack back into 0/1 form.
Grid3<std::uint8_t> load_mask_stack(const std::filesystem::path& directory);

}  // namespace rootlevel
