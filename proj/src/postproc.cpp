#include "rootlevel/postproc.hpp"

#include <limits>
#include <stdexcept>
#include <vector>

namespace rootlevel {

namespace {

// Backward half of the 26-neighborhood: offsets that precede the origin in
// scan order. Scanning forward and unioning against these visits every
// adjacent pair exactly once.
constexpr int kBackward26[13][3] = {
    {-1, -1, -1}, {0, -1, -1}, {1, -1, -1}, {-1, 0, -1}, {0, 0, -1},
    {1, 0, -1},   {-1, 1, -1}, {0, 1, -1},  {1, 1, -1},  {-1, -1, 0},
    {0, -1, 0},   {1, -1, 0},  {-1, 0, 0},
};

struct UnionFind {
  std::vector<std::uint32_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) {
    for (std::size_t i = 0; i < n; ++i) {
      parent[i] = static_cast<std::uint32_t>(i);
    }
  }
  std::uint32_t find(std::uint32_t i) {
    while (parent[i] != i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) {
      // Anchor at the smaller index so roots stay in scan order.
      if (a < b) {
        parent[b] = a;
      } else {
        parent[a] = b;
      }
    }
  }
};

}  // namespace

FilterReport filter_components(Grid3<std::uint8_t>& labels,
                               const std::vector<VoxelCoord>& seeds) {
  const Dims& d = labels.dims();
  if (d.voxels() > std::numeric_limits<std::uint32_t>::max()) {
    throw std::runtime_error("volume too large for component filtering");
  }
  const auto omega2 = static_cast<std::uint8_t>(Label::Omega2);

  UnionFind uf(d.voxels());
  for (int z = 0; z < d.nz; ++z) {
    for (int y = 0; y < d.ny; ++y) {
      for (int x = 0; x < d.nx; ++x) {
        if (labels.at(x, y, z) != omega2) {
          continue;
        }
        const auto i = static_cast<std::uint32_t>(d.index(x, y, z));
        for (const auto& n : kBackward26) {
          const int nx = x + n[0], ny = y + n[1], nz = z + n[2];
          if (d.contains(nx, ny, nz) && labels.at(nx, ny, nz) == omega2) {
            uf.unite(i, static_cast<std::uint32_t>(d.index(nx, ny, nz)));
          }
        }
      }
    }
  }

  // Dense ids in scan order of component roots; roots are anchor (smallest
  // index) voxels by construction.
  std::vector<std::uint32_t> root_of;
  std::vector<std::uint64_t> size_of;
  std::vector<std::uint8_t> seeded;
  std::vector<std::uint32_t> id_at(d.voxels(), 0);
  for (std::size_t i = 0; i < d.voxels(); ++i) {
    if (labels[i] != omega2) {
      continue;
    }
    const std::uint32_t r = uf.find(static_cast<std::uint32_t>(i));
    if (r == i) {
      root_of.push_back(r);
      size_of.push_back(0);
      seeded.push_back(0);
      id_at[r] = static_cast<std::uint32_t>(root_of.size());  // 1-based
    }
    const std::uint32_t id = id_at[r];
    id_at[i] = id;
    ++size_of[id - 1];
  }
  for (const VoxelCoord& c : seeds) {
    if (!d.contains(c.x, c.y, c.z)) {
      continue;
    }
    const std::size_t i = d.index(c.x, c.y, c.z);
    if (labels[i] == omega2) {
      seeded[id_at[i] - 1] = 1;
    }
  }

  FilterReport report;
  report.components_total = root_of.size();
  for (std::size_t c = 0; c < root_of.size(); ++c) {
    if (seeded[c]) {
      ++report.components_kept;
    } else {
      report.removed.push_back(
          RemovedComponent{static_cast<std::uint32_t>(c + 1), size_of[c]});
      report.voxels_removed += size_of[c];
    }
  }
  if (!report.removed.empty()) {
    const auto omega1 = static_cast<std::uint8_t>(Label::Omega1);
    for (std::size_t i = 0; i < d.voxels(); ++i) {
      if (labels[i] == omega2 && !seeded[id_at[i] - 1]) {
        labels[i] = omega1;
      }
    }
  }
  return report;
}

}  // namespace rootlevel
