// Core grid types shared by every module: dimensions, coordinates, a dense
// x-fastest 3D array, and the voxel class labels.
#pragma once

#include <cassert>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rootlevel {

using Grey = std::uint16_t;

// Voxel class labels. Unlabeled voxels belong to the unexplored region and
// carry phi = +(b+1) until an occupancy cube containing them is explored.
enum class Label : std::uint8_t {
  Unlabeled = 0,
  Omega1 = 1,  // non-root
  Omega2 = 2,  // root
};

struct Dims {
  int nx = 0;
  int ny = 0;
  int nz = 0;

  std::size_t voxels() const {
    return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) *
           static_cast<std::size_t>(nz);
  }
  bool contains(int x, int y, int z) const {
    return x >= 0 && x < nx && y >= 0 && y < ny && z >= 0 && z < nz;
  }
  // Linear index, x fastest, z slowest (slice-major).
  std::size_t index(int x, int y, int z) const {
    assert(contains(x, y, z));
    return static_cast<std::size_t>(x) +
           static_cast<std::size_t>(nx) *
               (static_cast<std::size_t>(y) +
                static_cast<std::size_t>(ny) * static_cast<std::size_t>(z));
  }
  bool operator==(const Dims&) const = default;
};

struct VoxelCoord {
  int x = 0;
  int y = 0;
  int z = 0;
  bool operator==(const VoxelCoord&) const = default;
  auto operator<=>(const VoxelCoord&) const = default;
};

template <typename T>
class Grid3 {
 public:
  Grid3() = default;
  explicit Grid3(Dims dims, T fill = T{}) : dims_(dims), data_(dims.voxels(), fill) {}

  const Dims& dims() const { return dims_; }
  std::size_t size() const { return data_.size(); }

  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  T& at(int x, int y, int z) { return data_[dims_.index(x, y, z)]; }
  const T& at(int x, int y, int z) const { return data_[dims_.index(x, y, z)]; }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }

  void fill(T value) { data_.assign(data_.size(), value); }

  auto begin() { return data_.begin(); }
  auto end() { return data_.end(); }
  auto begin() const { return data_.begin(); }
  auto end() const { return data_.end(); }

  bool operator==(const Grid3&) const = default;

 private:
  Dims dims_;
  std::vector<T> data_;
};

// 6-connected neighbor offsets.
inline constexpr int kFaceNeighbors[6][3] = {
    {-1, 0, 0}, {1, 0, 0}, {0, -1, 0}, {0, 1, 0}, {0, 0, -1}, {0, 0, 1},
};

inline int ceil_div(int a, int b) { return (a + b - 1) / b; }

}  // namespace rootlevel
