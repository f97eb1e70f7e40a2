// Truncated exact Euclidean distance transform over a union of active
// occupancy cubes: three separable sweeps whose envelope arithmetic runs on
// integer squared distances capped at (b+1)^2.
#pragma once

#include <cstdint>
#include <vector>

#include "rootlevel/core.hpp"
#include "rootlevel/occupancy.hpp"
#include "rootlevel/parallel.hpp"

namespace rootlevel {

// Full-volume sweep buffers, reused across iterations. Only voxels inside
// the swept cube union are written or read in a given call; values elsewhere
// are stale and meaningless.
struct DtScratch {
  Grid3<std::uint16_t> row;     // pass 1: per-row axial distance, capped at b+1
  Grid3<std::uint32_t> plane;   // pass 2: squared distance within slice
  Grid3<std::uint32_t> dist2;   // pass 3: final squared distance <= (b+1)^2
  void ensure(const Dims& dims);
};

// Computes dist2 = min((b+1)^2, squared distance to nearest source) for every
// voxel of every active cube; dist2 outside active cubes is left untouched.
// Sources must lie inside active cubes; the mask must be zero on every
// non-source voxel of the active cubes and of their 26-neighbor cubes,
// because the sweeps cover that one-cube halo.
//
// The halo is what makes the restriction exact: any source/voxel pair at
// distance <= b spans at most one cube boundary per axis (cube edge >= b), so
// every intermediate point of the separable decomposition falls in the halo.
// Pairs whose decomposition would leave the halo are at distance >= b+1 and
// land on the truncation value regardless.
void tedt_block_union(const Grid3<std::uint8_t>& sources, const OccupancyGrid& active,
                      int b, WorkerPool& pool, DtScratch& scratch);

}  // namespace rootlevel
