#include "rootlevel/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rootlevel {

void EngineConfig::validate() const {
  if (b < 1) {
    throw std::invalid_argument("band size must be positive");
  }
  if (s < b) {
    throw std::invalid_argument("cube edge must be at least the band size");
  }
  if (t < 0 || t > 250) {
    throw std::invalid_argument("active-count threshold out of range");
  }
  if (k < 1) {
    throw std::invalid_argument("termination size must be at least 1");
  }
  if (!(dt_step > 0.0)) {
    throw std::invalid_argument("time step must be positive");
  }
  if (band_lo > band_hi) {
    throw std::invalid_argument("root greylevel band is inverted");
  }
  if (max_iters < 1) {
    throw std::invalid_argument("iteration cap must be at least 1");
  }
}

double curvature(const Grid3<float>& phi, int x, int y, int z) {
  const Dims& d = phi.dims();
  auto p = [&](int xx, int yy, int zz) -> double {
    xx = std::clamp(xx, 0, d.nx - 1);
    yy = std::clamp(yy, 0, d.ny - 1);
    zz = std::clamp(zz, 0, d.nz - 1);
    return phi.at(xx, yy, zz);
  };
  constexpr double eps = 1e-8;

  // Face between (x0,y,z) and (x0+1,y,z): x component of the unit normal.
  auto nfx = [&](int x0) {
    const double gx = p(x0 + 1, y, z) - p(x0, y, z);
    const double gy = 0.25 * (p(x0, y + 1, z) - p(x0, y - 1, z) +
                              p(x0 + 1, y + 1, z) - p(x0 + 1, y - 1, z));
    const double gz = 0.25 * (p(x0, y, z + 1) - p(x0, y, z - 1) +
                              p(x0 + 1, y, z + 1) - p(x0 + 1, y, z - 1));
    const double m = std::sqrt(gx * gx + gy * gy + gz * gz);
    return m > eps ? gx / m : 0.0;
  };
  auto nfy = [&](int y0) {
    const double gy = p(x, y0 + 1, z) - p(x, y0, z);
    const double gx = 0.25 * (p(x + 1, y0, z) - p(x - 1, y0, z) +
                              p(x + 1, y0 + 1, z) - p(x - 1, y0 + 1, z));
    const double gz = 0.25 * (p(x, y0, z + 1) - p(x, y0, z - 1) +
                              p(x, y0 + 1, z + 1) - p(x, y0 + 1, z - 1));
    const double m = std::sqrt(gx * gx + gy * gy + gz * gz);
    return m > eps ? gy / m : 0.0;
  };
  auto nfz = [&](int z0) {
    const double gz = p(x, y, z0 + 1) - p(x, y, z0);
    const double gx = 0.25 * (p(x + 1, y, z0) - p(x - 1, y, z0) +
                              p(x + 1, y, z0 + 1) - p(x - 1, y, z0 + 1));
    const double gy = 0.25 * (p(x, y + 1, z0) - p(x, y - 1, z0) +
                              p(x, y + 1, z0 + 1) - p(x, y - 1, z0 + 1));
    const double m = std::sqrt(gx * gx + gy * gy + gz * gz);
    return m > eps ? gz / m : 0.0;
  };

  return (nfx(x) - nfx(x - 1)) + (nfy(y) - nfy(y - 1)) + (nfz(z) - nfz(z - 1));
}

Engine::Engine(const Volume& vol, const std::vector<VoxelCoord>& seeds,
               const EngineConfig& cfg, WorkerPool& pool)
    : vol_(&vol),
      cfg_(cfg),
      pool_(&pool),
      phi_(vol.dims(), static_cast<float>(cfg.b + 1)),
      labels_(vol.dims(), static_cast<std::uint8_t>(Label::Unlabeled)),
      counts_(vol.dims(), 0),
      seed_(vol.dims(), 0),
      sources_(vol.dims(), 0),
      ga_(vol.dims(), cfg.s),
      gh_(vol.dims(), cfg.s),
      hist1_(vol.depth()),
      hist2_(vol.depth()) {
  cfg_.validate();
  if (cfg_.band_hi != 65535 && cfg_.band_hi > vol.max_grey()) {
    // A configured band bound beyond the volume depth is almost certainly a
    // config slip; the 65535 default means the gate is off.
    throw std::invalid_argument("root greylevel band exceeds volume depth");
  }
  if (seeds.empty()) {
    throw std::invalid_argument("no initialization voxels");
  }
  for (const VoxelCoord& c : seeds) {
    if (!vol.dims().contains(c.x, c.y, c.z)) {
      throw std::invalid_argument("seed voxel out of bounds");
    }
    const std::size_t i = vol.dims().index(c.x, c.y, c.z);
    if (labels_[i] == static_cast<std::uint8_t>(Label::Omega2)) {
      continue;  // duplicate seed
    }
    labels_[i] = static_cast<std::uint8_t>(Label::Omega2);
    phi_[i] = -1.0f;
    counts_[i] = 1;
    seed_[i] = 1;
    hist2_.add(vol[i]);
  }
  if (!cfg_.explore_incrementally) {
    gh_.set_all();
    const std::size_t n = vol.dims().voxels();
    for (std::size_t i = 0; i < n; ++i) {
      if (labels_[i] != static_cast<std::uint8_t>(Label::Unlabeled)) {
        continue;
      }
      const Grey g = vol[i];
      if (g >= cfg_.g_min) {
        labels_[i] = static_cast<std::uint8_t>(Label::Omega1);
        hist1_.add(g);
      }
    }
  }
}

void Engine::check_initial_state() const {
  if (hist2_.n() < 2) {
    throw std::runtime_error("insufficient samples for root class (need at least 2 seed voxels)");
  }
  if (!cfg_.explore_incrementally && hist1_.n() < 2) {
    throw std::runtime_error("insufficient samples for background class after gating");
  }
}

std::vector<VoxelCoord> Engine::locate_contour() const {
  const Dims& d = vol_->dims();
  const std::size_t chunk_z = 4;
  const std::size_t chunks = (static_cast<std::size_t>(d.nz) + chunk_z - 1) / chunk_z;
  std::vector<std::vector<VoxelCoord>> parts(chunks);
  parallel_chunks(*pool_, static_cast<std::size_t>(d.nz), chunk_z,
                  [&](std::size_t z0, std::size_t z1, std::size_t c) {
                    auto& out = parts[c];
                    for (int z = static_cast<int>(z0); z < static_cast<int>(z1); ++z) {
                      for (int y = 0; y < d.ny; ++y) {
                        for (int x = 0; x < d.nx; ++x) {
                          if (labels_.at(x, y, z) != static_cast<std::uint8_t>(Label::Omega2)) {
                            continue;
                          }
                          bool boundary = false;
                          for (const auto& n : kFaceNeighbors) {
                            const int nx = x + n[0], ny = y + n[1], nz = z + n[2];
                            if (d.contains(nx, ny, nz) &&
                                labels_.at(nx, ny, nz) !=
                                    static_cast<std::uint8_t>(Label::Omega2)) {
                              boundary = true;
                              break;
                            }
                          }
                          if (boundary) {
                            out.push_back(VoxelCoord{x, y, z});
                          }
                        }
                      }
                    }
                  });
  std::vector<VoxelCoord> contour;
  for (const auto& part : parts) {
    contour.insert(contour.end(), part.begin(), part.end());
  }
  return contour;
}

void Engine::split_contour(const std::vector<VoxelCoord>& contour,
                           std::vector<VoxelCoord>& active,
                           std::vector<VoxelCoord>& static_part) const {
  active.clear();
  static_part.clear();
  for (const VoxelCoord& c : contour) {
    if (counts_.at(c.x, c.y, c.z) <= cfg_.t) {
      active.push_back(c);
    } else {
      static_part.push_back(c);
    }
  }
}

void Engine::mark_active(const std::vector<VoxelCoord>& active) {
  ga_.clear();
  for (const VoxelCoord& c : active) {
    ga_.mark_voxel_with_neighbors(c.x, c.y, c.z);
  }
}

void Engine::explore() {
  if (!cfg_.explore_incrementally) {
    return;
  }
  const Dims& cd = ga_.cube_dims();
  for (int cz = 0; cz < cd.nz; ++cz) {
    for (int cy = 0; cy < cd.ny; ++cy) {
      for (int cx = 0; cx < cd.nx; ++cx) {
        if (!ga_.test(cx, cy, cz) || gh_.test(cx, cy, cz)) {
          continue;
        }
        gh_.set(cx, cy, cz);
        const auto box = ga_.box(cx, cy, cz);
        for (int z = box.z0; z < box.z1; ++z) {
          for (int y = box.y0; y < box.y1; ++y) {
            for (int x = box.x0; x < box.x1; ++x) {
              const std::size_t i = vol_->dims().index(x, y, z);
              if (labels_[i] != static_cast<std::uint8_t>(Label::Unlabeled)) {
                continue;
              }
              const Grey g = (*vol_)[i];
              if (g >= cfg_.g_min) {
                labels_[i] = static_cast<std::uint8_t>(Label::Omega1);
                hist1_.add(g);
              }
            }
          }
        }
      }
    }
  }
}

std::vector<VoxelCoord> Engine::active_cubes() const {
  const Dims& cd = ga_.cube_dims();
  std::vector<VoxelCoord> cubes;
  for (int cz = 0; cz < cd.nz; ++cz) {
    for (int cy = 0; cy < cd.ny; ++cy) {
      for (int cx = 0; cx < cd.nx; ++cx) {
        if (ga_.test(cx, cy, cz)) {
          cubes.push_back(VoxelCoord{cx, cy, cz});
        }
      }
    }
  }
  return cubes;
}

void Engine::rebuild_phi(const std::vector<VoxelCoord>& contour) {
  std::vector<std::size_t> touched;
  touched.reserve(contour.size());
  for (const VoxelCoord& c : contour) {
    if (ga_.test_voxel(c.x, c.y, c.z)) {
      const std::size_t i = vol_->dims().index(c.x, c.y, c.z);
      sources_[i] = 1;
      touched.push_back(i);
    }
  }
  tedt_block_union(sources_, ga_, cfg_.b, *pool_, dt_);
  for (std::size_t i : touched) {
    sources_[i] = 0;
  }

  const float far = static_cast<float>(cfg_.b + 1);
  const auto cubes = active_cubes();
  parallel_chunks(*pool_, cubes.size(), 4, [&](std::size_t lo, std::size_t hi, std::size_t) {
    for (std::size_t ci = lo; ci < hi; ++ci) {
      const auto box = ga_.box(cubes[ci].x, cubes[ci].y, cubes[ci].z);
      for (int z = box.z0; z < box.z1; ++z) {
        for (int y = box.y0; y < box.y1; ++y) {
          for (int x = box.x0; x < box.x1; ++x) {
            const std::size_t i = vol_->dims().index(x, y, z);
            switch (static_cast<Label>(labels_[i])) {
              case Label::Omega2:
                phi_[i] = -std::sqrt(static_cast<float>(dt_.dist2[i]));
                break;
              case Label::Omega1:
                phi_[i] = std::sqrt(static_cast<float>(dt_.dist2[i]));
                break;
              default:
                phi_[i] = far;
                break;
            }
          }
        }
      }
    }
  });
}

void Engine::estimate_params() {
  th1_ = hist1_.estimate();
  th2_ = hist2_.estimate();
}

std::uint64_t Engine::evolve() {
  struct PhiUpdate {
    std::size_t idx;
    float value;
    std::uint8_t label;
  };
  const auto cubes = active_cubes();
  const std::size_t chunk = 4;
  const std::size_t nchunks = cubes.empty() ? 0 : (cubes.size() + chunk - 1) / chunk;
  std::vector<std::vector<PhiUpdate>> parts(nchunks);
  const float far = static_cast<float>(cfg_.b + 1);
  const double band = static_cast<double>(cfg_.b);

  parallel_chunks(*pool_, cubes.size(), chunk, [&](std::size_t lo, std::size_t hi, std::size_t c) {
    auto& out = parts[c];
    for (std::size_t ci = lo; ci < hi; ++ci) {
      const auto box = ga_.box(cubes[ci].x, cubes[ci].y, cubes[ci].z);
      for (int z = box.z0; z < box.z1; ++z) {
        for (int y = box.y0; y < box.y1; ++y) {
          for (int x = box.x0; x < box.x1; ++x) {
            const std::size_t i = vol_->dims().index(x, y, z);
            const Label lab = static_cast<Label>(labels_[i]);
            if (lab == Label::Unlabeled) {
              continue;
            }
            if (counts_[i] > cfg_.t) {
              continue;  // static: discovered regions must not be smoothed away
            }
            const Grey g = (*vol_)[i];
            if (g < cfg_.g_min) {
              continue;
            }
            const float ph = phi_[i];
            if (std::abs(static_cast<double>(ph)) > band) {
              continue;  // outside the narrow band
            }
            const double kappa = curvature(phi_, x, y, z);
            const double v = cfg_.nu * kappa + speed_term(g, th1_, th2_);
            float nph = static_cast<float>(ph + cfg_.dt_step * v);
            nph = std::clamp(nph, -far, far);
            Label nlab = lab;
            if (lab == Label::Omega1 && nph < 0.0f) {
              if (g < cfg_.band_lo || g > cfg_.band_hi) {
                nph = kFlipEps;  // greylevel gate vetoes the flip
              } else {
                nlab = Label::Omega2;
              }
            } else if (lab == Label::Omega2 && nph > 0.0f) {
              if (seed_[i]) {
                nph = -kFlipEps;  // the marked set stays in the root class
              } else {
                nlab = Label::Omega1;
              }
            }
            if (nlab == Label::Omega2 && nph == 0.0f) {
              nph = -0.0f;  // boundary voxels are root-class: keep the sign bit
            }
            out.push_back(PhiUpdate{i, nph, static_cast<std::uint8_t>(nlab)});
          }
        }
      }
    }
  });

  std::uint64_t flips = 0;
  for (const auto& part : parts) {
    for (const PhiUpdate& u : part) {
      phi_[u.idx] = u.value;
      if (u.label != labels_[u.idx]) {
        const Grey g = (*vol_)[u.idx];
        if (static_cast<Label>(u.label) == Label::Omega2) {
          hist1_.remove(g);
          hist2_.add(g);
        } else {
          hist2_.remove(g);
          hist1_.add(g);
        }
        labels_[u.idx] = u.label;
        ++flips;
      }
    }
  }
  return flips;
}

void Engine::increment_counts() {
  const std::size_t n = labels_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (labels_[i] == static_cast<std::uint8_t>(Label::Omega2) && counts_[i] < 255) {
      ++counts_[i];
    }
  }
}

namespace {

double class_nll(const ClassHistogram& h) {
  if (h.n() == 0) {
    return 0.0;
  }
  GaussianParams p;
  if (h.n() == 1) {
    p = GaussianParams{static_cast<double>(h.sum()), kSigmaFloor};
  } else {
    p = h.estimate();
  }
  return h.negative_log_likelihood(p);
}

}  // namespace

double Engine::energy_value(std::uint64_t contour_size) const {
  return class_nll(hist1_) + class_nll(hist2_) +
         cfg_.nu * static_cast<double>(contour_size);
}

RunResult Engine::run(const IterCallback& cb) {
  check_initial_state();
  RunResult res;
  for (int iter = 1; iter <= cfg_.max_iters; ++iter) {
    const auto contour = locate_contour();
    std::vector<VoxelCoord> active, static_part;
    split_contour(contour, active, static_part);
    mark_active(active);
    res.metrics.push_back(MetricsRow{iter, active.size(), static_part.size(),
                                     ga_.count(), gh_.count(),
                                     energy_value(contour.size())});
    res.iterations = iter;
    if (active.size() < cfg_.k) {
      res.converged = true;
      if (cb) {
        cb(*this, iter);
      }
      break;
    }
    explore();
    rebuild_phi(contour);
    estimate_params();
    evolve();
    increment_counts();
    if (cb) {
      cb(*this, iter);
    }
  }
  res.labels = labels_;
  return res;
}

}  // namespace rootlevel
