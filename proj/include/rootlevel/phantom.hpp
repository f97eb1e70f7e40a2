// Synthetic ground-truth volumes: root-like polyline tubes in a noisy
// granular medium, for tests and closed-loop benchmarks.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rootlevel/core.hpp"
#include "rootlevel/volume.hpp"

namespace rootlevel {

struct TubePoint {
  double x = 0, y = 0, z = 0;
  double r = 1;  // tube radius at this control point, >= 1
};

struct PhantomSpec {
  Dims dims{64, 64, 64};
  int depth = 8;
  std::uint64_t seed = 1;

  double mu1 = 60, sigma1 = 10;    // medium
  double mu2 = 180, sigma2 = 12;   // root

  // Each tube is a polyline; radius interpolates linearly along segments.
  // A single-point polyline degenerates to a sphere blob.
  std::vector<std::vector<TubePoint>> tubes;

  int granule_count = 0;
  double granule_r_min = 3, granule_r_max = 6;
  double granule_mu = 90, granule_sigma = 8;
  bool granule_rim = false;        // bright 2-voxel outer shell
  double rim_mu = 170, rim_sigma = 6;

  // Self-seeding for closed-loop runs: every Nth ground-truth voxel on the
  // chosen z slices. Empty slice list = three slices spread over the tube
  // z-extent.
  std::vector<int> selfseed_slices;
  int selfseed_stride = 4;

  void validate() const;
};

enum class PhantomMaterial : std::uint8_t { Medium = 0, Granule = 1, Rim = 2, Tube = 3 };

struct PhantomResult {
  Volume vol;
  Grid3<std::uint8_t> truth;     // 1 on tube voxels
  Grid3<std::uint8_t> material;  // PhantomMaterial per voxel
};

// Deterministic per seed. The noise draw is a pure function of (seed, voxel
// position), independent of which material the voxel gets, so moving the
// geometry never reshuffles noise elsewhere.
PhantomResult generate(const PhantomSpec& spec);

// 2|A∩B| / (|A| + |B|) over nonzero voxels; 1.0 when both masks are empty.
double dice(const Grid3<std::uint8_t>& a, const Grid3<std::uint8_t>& b);

PhantomSpec parse_phantom_spec(const std::string& path);

std::vector<VoxelCoord> self_seeds(const PhantomSpec& spec,
                                   const Grid3<std::uint8_t>& truth);

}  // namespace rootlevel
