// Coarse cube-occupancy bookkeeping over a voxel volume. Cubes are s^3 voxel
// blocks (clipped at the upper volume faces); the grids mark which cubes are
// active this iteration (G_a) or have ever been explored (G_h).
#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "rootlevel/core.hpp"

namespace rootlevel {

class OccupancyGrid {
 public:
  OccupancyGrid() = default;
  OccupancyGrid(const Dims& vol_dims, int cube_edge)
      : edge_(cube_edge),
        vol_(vol_dims),
        cubes_{ceil_div(vol_dims.nx, cube_edge), ceil_div(vol_dims.ny, cube_edge),
               ceil_div(vol_dims.nz, cube_edge)},
        bits_(cubes_.voxels(), 0) {}

  int cube_edge() const { return edge_; }
  const Dims& cube_dims() const { return cubes_; }
  const Dims& vol_dims() const { return vol_; }

  bool test(int cx, int cy, int cz) const { return bits_[cubes_.index(cx, cy, cz)] != 0; }
  void set(int cx, int cy, int cz) { bits_[cubes_.index(cx, cy, cz)] = 1; }

  bool test_voxel(int x, int y, int z) const {
    return test(x / edge_, y / edge_, z / edge_);
  }

  void clear() { std::fill(bits_.begin(), bits_.end(), std::uint8_t{0}); }
  void set_all() { std::fill(bits_.begin(), bits_.end(), std::uint8_t{1}); }

  std::uint64_t count() const {
    std::uint64_t n = 0;
    for (std::uint8_t v : bits_) {
      n += v;
    }
    return n;
  }

  // Sets the cube containing (x,y,z) and every in-bounds 26-neighbor cube.
  void mark_voxel_with_neighbors(int x, int y, int z) {
    const int cx = x / edge_, cy = y / edge_, cz = z / edge_;
    for (int dz = -1; dz <= 1; ++dz) {
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int nx = cx + dx, ny = cy + dy, nz = cz + dz;
          if (cubes_.contains(nx, ny, nz)) {
            set(nx, ny, nz);
          }
        }
      }
    }
  }

  // Half-open voxel extents of a cube; upper-face cubes are clipped.
  struct CubeBox {
    int x0, x1, y0, y1, z0, z1;
  };
  CubeBox box(int cx, int cy, int cz) const {
    return CubeBox{cx * edge_, std::min((cx + 1) * edge_, vol_.nx),
                   cy * edge_, std::min((cy + 1) * edge_, vol_.ny),
                   cz * edge_, std::min((cz + 1) * edge_, vol_.nz)};
  }

  bool operator==(const OccupancyGrid&) const = default;

 private:
  int edge_ = 1;
  Dims vol_;
  Dims cubes_;
  std::vector<std::uint8_t> bits_;
};

}  // namespace rootlevel
