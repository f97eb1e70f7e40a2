// Final cleanup: connected components of the root class, keeping only those
// that touch the initialization set.
#pragma once

#include <cstdint>
#include <vector>

#include "rootlevel/core.hpp"

namespace rootlevel {

struct RemovedComponent {
  std::uint32_t id = 0;  // dense component id, 1-based in anchor scan order
  std::uint64_t size = 0;
};

struct FilterReport {
  std::uint64_t components_total = 0;
  std::uint64_t components_kept = 0;
  std::uint64_t voxels_removed = 0;
  std::vector<RemovedComponent> removed;
};

// Relabels every root-class voxel whose 26-connected component contains no
// seed to the non-root class, in place. Component ids are assigned in scan
// order of each component's first voxel, so the report is deterministic.
FilterReport filter_components(Grid3<std::uint8_t>& labels,
                               const std::vector<VoxelCoord>& seeds);

}  // namespace rootlevel
