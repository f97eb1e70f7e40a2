#include "rootlevel/dt.hpp"

#include <cstdint>
#include <stdexcept>
#include <utility>

namespace rootlevel {

void DtScratch::ensure(const Dims& dims) {
  if (row.dims() != dims) {
    row = Grid3<std::uint16_t>(dims);
    plane = Grid3<std::uint32_t>(dims);
    dist2 = Grid3<std::uint32_t>(dims);
  }
}

namespace {

// Meijster lower-envelope scan over one run of a column. gbuf holds the
// squared per-position input, obuf receives min over u of (pos-u)^2 + g(u),
// capped at cap2. Indices are run-relative.
void envelope_run(const std::int64_t* gbuf, std::uint32_t* obuf, int m,
                  std::int64_t cap2, std::vector<int>& sv, std::vector<int>& tv) {
  sv.resize(m);
  tv.resize(m);
  auto F = [&](int pos, int i) {
    const std::int64_t d = pos - i;
    return d * d + gbuf[i];
  };
  int q = 0;
  sv[0] = 0;
  tv[0] = 0;
  for (int u = 1; u < m; ++u) {
    while (q >= 0 && F(tv[q], sv[q]) > F(tv[q], u)) {
      --q;
    }
    if (q < 0) {
      q = 0;
      sv[0] = u;
    } else {
      // First position where u's parabola wins over sv[q]'s. The preceding
      // pop guarantees the crossover is at or past tv[q], so the integer
      // division never sees a negative numerator.
      const int i = sv[q];
      const std::int64_t w =
          1 + (static_cast<std::int64_t>(u) * u - static_cast<std::int64_t>(i) * i +
               gbuf[u] - gbuf[i]) /
                  (2 * (u - i));
      if (w < m) {
        ++q;
        sv[q] = static_cast<int>(u);
        tv[q] = static_cast<int>(w);
      }
    }
  }
  for (int pos = m - 1; pos >= 0; --pos) {
    const std::int64_t v = F(pos, sv[q]);
    obuf[pos] = static_cast<std::uint32_t>(v < cap2 ? v : cap2);
    if (pos == tv[q]) {
      --q;
    }
  }
}

// Maximal runs of set cubes along one cube axis. probe(c) tests cube c in
// [0, n); emit(run_begin_cube, run_end_cube) is called per run.
template <typename Probe, typename Emit>
void cube_runs(int n, const Probe& probe, const Emit& emit) {
  int c = 0;
  while (c < n) {
    if (!probe(c)) {
      ++c;
      continue;
    }
    int e = c + 1;
    while (e < n && probe(e)) {
      ++e;
    }
    emit(c, e);
    c = e;
  }
}

}  // namespace

void tedt_block_union(const Grid3<std::uint8_t>& sources, const OccupancyGrid& active,
                      int b, WorkerPool& pool, DtScratch& scratch) {
  if (b < 1) {
    throw std::invalid_argument("band size must be positive");
  }
  if (b >= 65535) {
    throw std::invalid_argument("band size too large");  // pass 1 stores b+1 in 16 bits
  }
  const Dims& dims = sources.dims();
  const int s = active.cube_edge();
  scratch.ensure(dims);

  // Sweep domain: active cubes plus their 26-neighbor halo. Results are only
  // meaningful inside active cubes, but the halo keeps every separable path
  // of a sub-band source/voxel pair inside the swept region.
  OccupancyGrid domain(dims, s);
  const Dims& cd = active.cube_dims();
  for (int cz = 0; cz < cd.nz; ++cz) {
    for (int cy = 0; cy < cd.ny; ++cy) {
      for (int cx = 0; cx < cd.nx; ++cx) {
        if (!active.test(cx, cy, cz)) {
          continue;
        }
        for (int dz = -1; dz <= 1; ++dz) {
          for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
              const int nx = cx + dx, ny = cy + dy, nz = cz + dz;
              if (cd.contains(nx, ny, nz)) {
                domain.set(nx, ny, nz);
              }
            }
          }
        }
      }
    }
  }

  const std::uint16_t cap = static_cast<std::uint16_t>(b + 1);
  const std::int64_t cap2 = static_cast<std::int64_t>(b + 1) * (b + 1);

  // Pass 1: axial distance along x within each (y,z) row, truncated at b+1.
  std::vector<std::pair<int, int>> rows;  // (y, z)
  for (int z = 0; z < dims.nz; ++z) {
    const int cz = z / s;
    for (int cy = 0; cy < cd.ny; ++cy) {
      bool any = false;
      for (int cx = 0; cx < cd.nx && !any; ++cx) {
        any = domain.test(cx, cy, cz);
      }
      if (!any) {
        continue;
      }
      const auto box = domain.box(0, cy, 0);
      for (int y = box.y0; y < box.y1; ++y) {
        rows.emplace_back(y, z);
      }
    }
  }
  parallel_chunks(pool, rows.size(), 64, [&](std::size_t lo, std::size_t hi, std::size_t) {
    for (std::size_t r = lo; r < hi; ++r) {
      const int y = rows[r].first;
      const int z = rows[r].second;
      const int cy = y / s, cz = z / s;
      cube_runs(
          cd.nx, [&](int cx) { return domain.test(cx, cy, cz); },
          [&](int c0, int c1) {
            const int x0 = c0 * s;
            const int x1 = std::min(c1 * s, dims.nx);
            std::uint16_t d = cap;
            for (int x = x0; x < x1; ++x) {
              d = sources.at(x, y, z) ? std::uint16_t{0}
                                      : static_cast<std::uint16_t>(std::min<int>(d + 1, cap));
              scratch.row.at(x, y, z) = d;
            }
            d = cap;
            for (int x = x1 - 1; x >= x0; --x) {
              d = sources.at(x, y, z) ? std::uint16_t{0}
                                      : static_cast<std::uint16_t>(std::min<int>(d + 1, cap));
              auto& cell = scratch.row.at(x, y, z);
              cell = std::min(cell, d);
            }
          });
    }
  });

  // Pass 2: squared distance within each (x,z) column along y.
  std::vector<std::pair<int, int>> cols_y;  // (x, z)
  for (int z = 0; z < dims.nz; ++z) {
    const int cz = z / s;
    for (int cx = 0; cx < cd.nx; ++cx) {
      bool any = false;
      for (int cy = 0; cy < cd.ny && !any; ++cy) {
        any = domain.test(cx, cy, cz);
      }
      if (!any) {
        continue;
      }
      const auto box = domain.box(cx, 0, 0);
      for (int x = box.x0; x < box.x1; ++x) {
        cols_y.emplace_back(x, z);
      }
    }
  }
  parallel_chunks(pool, cols_y.size(), 64, [&](std::size_t lo, std::size_t hi, std::size_t) {
    std::vector<std::int64_t> gbuf;
    std::vector<std::uint32_t> obuf;
    std::vector<int> sv, tv;
    for (std::size_t r = lo; r < hi; ++r) {
      const int x = cols_y[r].first;
      const int z = cols_y[r].second;
      const int cx = x / s, cz = z / s;
      cube_runs(
          cd.ny, [&](int cy) { return domain.test(cx, cy, cz); },
          [&](int c0, int c1) {
            const int y0 = c0 * s;
            const int y1 = std::min(c1 * s, dims.ny);
            const int m = y1 - y0;
            gbuf.resize(m);
            obuf.resize(m);
            for (int i = 0; i < m; ++i) {
              const std::int64_t g = scratch.row.at(x, y0 + i, z);
              gbuf[i] = g * g;
            }
            envelope_run(gbuf.data(), obuf.data(), m, cap2, sv, tv);
            for (int i = 0; i < m; ++i) {
              scratch.plane.at(x, y0 + i, z) = obuf[i];
            }
          });
    }
  });

  // Pass 3: squared distance within each (x,y) column along z.
  std::vector<std::pair<int, int>> cols_z;  // (x, y)
  for (int y = 0; y < dims.ny; ++y) {
    const int cy = y / s;
    for (int cx = 0; cx < cd.nx; ++cx) {
      bool any = false;
      for (int cz = 0; cz < cd.nz && !any; ++cz) {
        any = domain.test(cx, cy, cz);
      }
      if (!any) {
        continue;
      }
      const auto box = domain.box(cx, 0, 0);
      for (int x = box.x0; x < box.x1; ++x) {
        cols_z.emplace_back(x, y);
      }
    }
  }
  parallel_chunks(pool, cols_z.size(), 64, [&](std::size_t lo, std::size_t hi, std::size_t) {
    std::vector<std::int64_t> gbuf;
    std::vector<std::uint32_t> obuf;
    std::vector<int> sv, tv;
    for (std::size_t r = lo; r < hi; ++r) {
      const int x = cols_z[r].first;
      const int y = cols_z[r].second;
      const int cx = x / s, cy = y / s;
      cube_runs(
          cd.nz, [&](int cz) { return domain.test(cx, cy, cz); },
          [&](int c0, int c1) {
            const int z0 = c0 * s;
            const int z1 = std::min(c1 * s, dims.nz);
            const int m = z1 - z0;
            gbuf.resize(m);
            obuf.resize(m);
            for (int i = 0; i < m; ++i) {
              gbuf[i] = scratch.plane.at(x, y, z0 + i);
            }
            envelope_run(gbuf.data(), obuf.data(), m, cap2, sv, tv);
            // The sweep covers the halo, but only active cubes own results;
            // everything else in dist2 must stay untouched.
            for (int i = 0; i < m; ++i) {
              const int z = z0 + i;
              if (active.test(cx, cy, z / s)) {
                scratch.dist2.at(x, y, z) = obuf[i];
              }
            }
          });
    }
  });
}

}  // namespace rootlevel
