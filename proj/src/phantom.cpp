#include "rootlevel/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rootlevel/config.hpp"

namespace rootlevel {

void PhantomSpec::validate() const {
  if (dims.nx < 1 || dims.ny < 1 || dims.nz < 1) {
    throw std::invalid_argument("phantom dims must be positive");
  }
  if (depth != 8 && depth != 16) {
    throw std::invalid_argument("phantom depth must be 8 or 16");
  }
  for (const auto& tube : tubes) {
    if (tube.empty()) {
      throw std::invalid_argument("empty tube polyline");
    }
    for (const TubePoint& p : tube) {
      if (p.r < 1.0) {
        throw std::invalid_argument("tube radius must be at least 1");
      }
    }
  }
  if (granule_count < 0 || granule_r_min < 1.0 || granule_r_max < granule_r_min) {
    throw std::invalid_argument("bad granule parameters");
  }
  if (sigma1 < 0 || sigma2 < 0 || granule_sigma < 0 || rim_sigma < 0) {
    throw std::invalid_argument("negative noise sigma");
  }
  if (selfseed_stride < 1) {
    throw std::invalid_argument("self-seed stride must be at least 1");
  }
}

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double to_unit(std::uint64_t bits) { return (bits >> 11) * 0x1.0p-53; }

// Standard normal draw keyed by (seed, counter); identical on every platform.
double keyed_gauss(std::uint64_t seed, std::uint64_t counter) {
  std::uint64_t s = seed ^ (counter + 1) * 0x9E3779B97F4A7C15ull;
  const double u1 = 1.0 - to_unit(splitmix64(s));  // (0, 1]
  const double u2 = to_unit(splitmix64(s));        // [0, 1)
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

// Material codes in fill order of precedence (tube strongest).
constexpr std::uint8_t kMedium = static_cast<std::uint8_t>(PhantomMaterial::Medium);
constexpr std::uint8_t kGranule = static_cast<std::uint8_t>(PhantomMaterial::Granule);
constexpr std::uint8_t kRim = static_cast<std::uint8_t>(PhantomMaterial::Rim);
constexpr std::uint8_t kTube = static_cast<std::uint8_t>(PhantomMaterial::Tube);

// True iff the voxel center lies inside the cone-capsule swept from
// (p0, r0) to (p1, r1): exists t in [0,1] with |x - c(t)| <= r(t). The
// left-hand side squared minus r(t)^2 is quadratic in t, so the minimum is
// at a parabola vertex or an endpoint.
bool in_segment(double x, double y, double z, const TubePoint& a, const TubePoint& b) {
  const double dx = b.x - a.x, dy = b.y - a.y, dz = b.z - a.z;
  const double dr = b.r - a.r;
  const double wx = x - a.x, wy = y - a.y, wz = z - a.z;
  const double qa = dx * dx + dy * dy + dz * dz - dr * dr;
  const double qb = -2.0 * (wx * dx + wy * dy + wz * dz + a.r * dr);
  const double qc = wx * wx + wy * wy + wz * wz - a.r * a.r;
  auto f = [&](double t) { return (qa * t + qb) * t + qc; };
  double best = std::min(f(0.0), f(1.0));
  if (qa > 0.0) {
    const double tv = -qb / (2.0 * qa);
    if (tv > 0.0 && tv < 1.0) {
      best = std::min(best, f(tv));
    }
  }
  return best <= 0.0;
}

void paint_tube(const std::vector<TubePoint>& tube, const Dims& dims,
                Grid3<std::uint8_t>& material) {
  const std::size_t nseg = tube.size() == 1 ? 1 : tube.size() - 1;
  for (std::size_t si = 0; si < nseg; ++si) {
    const TubePoint& a = tube[si];
    const TubePoint& b = tube[tube.size() == 1 ? si : si + 1];
    const double rmax = std::max(a.r, b.r);
    const int x0 = std::max(0, static_cast<int>(std::floor(std::min(a.x, b.x) - rmax)));
    const int x1 = std::min(dims.nx - 1, static_cast<int>(std::ceil(std::max(a.x, b.x) + rmax)));
    const int y0 = std::max(0, static_cast<int>(std::floor(std::min(a.y, b.y) - rmax)));
    const int y1 = std::min(dims.ny - 1, static_cast<int>(std::ceil(std::max(a.y, b.y) + rmax)));
    const int z0 = std::max(0, static_cast<int>(std::floor(std::min(a.z, b.z) - rmax)));
    const int z1 = std::min(dims.nz - 1, static_cast<int>(std::ceil(std::max(a.z, b.z) + rmax)));
    for (int z = z0; z <= z1; ++z) {
      for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
          if (in_segment(x, y, z, a, b)) {
            material.at(x, y, z) = kTube;
          }
        }
      }
    }
  }
}

}  // namespace

PhantomResult generate(const PhantomSpec& spec) {
  spec.validate();
  Grid3<std::uint8_t> material(spec.dims, kMedium);

  // Granules first so tubes overwrite them where they collide; granules are
  // background obstacles and never part of the ground truth.
  std::uint64_t gstate = spec.seed ^ 0xA5A5A5A55A5A5A5Aull;
  for (int gi = 0; gi < spec.granule_count; ++gi) {
    const double cx = to_unit(splitmix64(gstate)) * spec.dims.nx;
    const double cy = to_unit(splitmix64(gstate)) * spec.dims.ny;
    const double cz = to_unit(splitmix64(gstate)) * spec.dims.nz;
    const double r = spec.granule_r_min +
                     to_unit(splitmix64(gstate)) * (spec.granule_r_max - spec.granule_r_min);
    const double rim_inner = r - 2.0;
    const int x0 = std::max(0, static_cast<int>(std::floor(cx - r)));
    const int x1 = std::min(spec.dims.nx - 1, static_cast<int>(std::ceil(cx + r)));
    const int y0 = std::max(0, static_cast<int>(std::floor(cy - r)));
    const int y1 = std::min(spec.dims.ny - 1, static_cast<int>(std::ceil(cy + r)));
    const int z0 = std::max(0, static_cast<int>(std::floor(cz - r)));
    const int z1 = std::min(spec.dims.nz - 1, static_cast<int>(std::ceil(cz + r)));
    for (int z = z0; z <= z1; ++z) {
      for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
          const double dx = x - cx, dy = y - cy, dz = z - cz;
          const double d = std::sqrt(dx * dx + dy * dy + dz * dz);
          if (d > r) {
            continue;
          }
          material.at(x, y, z) =
              (spec.granule_rim && d > rim_inner) ? kRim : kGranule;
        }
      }
    }
  }

  for (const auto& tube : spec.tubes) {
    paint_tube(tube, spec.dims, material);
  }

  Volume vol(spec.dims, spec.depth);
  Grid3<std::uint8_t> truth(spec.dims, 0);
  const double maxg = static_cast<double>(vol.max_grey());
  const std::size_t n = spec.dims.voxels();
  for (std::size_t i = 0; i < n; ++i) {
    double mu, sigma;
    switch (material[i]) {
      case kTube:
        mu = spec.mu2;
        sigma = spec.sigma2;
        truth[i] = 1;
        break;
      case kGranule:
        mu = spec.granule_mu;
        sigma = spec.granule_sigma;
        break;
      case kRim:
        mu = spec.rim_mu;
        sigma = spec.rim_sigma;
        break;
      default:
        mu = spec.mu1;
        sigma = spec.sigma1;
        break;
    }
    const double g = mu + sigma * keyed_gauss(spec.seed, i);
    vol[i] = static_cast<Grey>(std::llround(std::clamp(g, 0.0, maxg)));
  }
  return PhantomResult{std::move(vol), std::move(truth), std::move(material)};
}

double dice(const Grid3<std::uint8_t>& a, const Grid3<std::uint8_t>& b) {
  if (a.dims() != b.dims()) {
    throw std::invalid_argument("dice: dimension mismatch");
  }
  std::uint64_t na = 0, nb = 0, inter = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const bool ia = a[i] != 0, ib = b[i] != 0;
    na += ia;
    nb += ib;
    inter += ia && ib;
  }
  if (na + nb == 0) {
    return 1.0;
  }
  return 2.0 * static_cast<double>(inter) / static_cast<double>(na + nb);
}

PhantomSpec parse_phantom_spec(const std::string& path) {
  PhantomSpec spec;
  for (const ConfigEntry& e : read_config_file(path)) {
    if (e.key == "dims") {
      const auto v = config_int_list(e);
      if (v.size() != 3) {
        throw std::runtime_error("phantom key 'dims' needs three values");
      }
      spec.dims = Dims{static_cast<int>(v[0]), static_cast<int>(v[1]),
                       static_cast<int>(v[2])};
    } else if (e.key == "depth") {
      spec.depth = static_cast<int>(config_int(e));
    } else if (e.key == "seed") {
      spec.seed = static_cast<std::uint64_t>(config_int(e));
    } else if (e.key == "mu1") {
      spec.mu1 = config_double(e);
    } else if (e.key == "sigma1") {
      spec.sigma1 = config_double(e);
    } else if (e.key == "mu2") {
      spec.mu2 = config_double(e);
    } else if (e.key == "sigma2") {
      spec.sigma2 = config_double(e);
    } else if (e.key == "tube") {
      std::vector<TubePoint> tube;
      std::string rest = e.value;
      while (!rest.empty()) {
        const std::size_t semi = rest.find(';');
        const std::string part = semi == std::string::npos ? rest : rest.substr(0, semi);
        rest = semi == std::string::npos ? std::string{} : rest.substr(semi + 1);
        const auto v = config_double_list(ConfigEntry{e.key, part, e.line});
        if (v.size() != 4) {
          throw std::runtime_error("phantom key 'tube': each point is x,y,z,r");
        }
        tube.push_back(TubePoint{v[0], v[1], v[2], v[3]});
      }
      spec.tubes.push_back(std::move(tube));
    } else if (e.key == "granules") {
      spec.granule_count = static_cast<int>(config_int(e));
    } else if (e.key == "granule_radius") {
      const auto v = config_double_list(e);
      if (v.size() != 2) {
        throw std::runtime_error("phantom key 'granule_radius' needs min,max");
      }
      spec.granule_r_min = v[0];
      spec.granule_r_max = v[1];
    } else if (e.key == "granule_mu") {
      spec.granule_mu = config_double(e);
    } else if (e.key == "granule_sigma") {
      spec.granule_sigma = config_double(e);
    } else if (e.key == "granule_rim") {
      spec.granule_rim = config_bool(e);
    } else if (e.key == "rim_mu") {
      spec.rim_mu = config_double(e);
    } else if (e.key == "rim_sigma") {
      spec.rim_sigma = config_double(e);
    } else if (e.key == "selfseed_slices") {
      spec.selfseed_slices.clear();
      for (long long z : config_int_list(e)) {
        spec.selfseed_slices.push_back(static_cast<int>(z));
      }
    } else if (e.key == "selfseed_stride") {
      spec.selfseed_stride = static_cast<int>(config_int(e));
    } else {
      throw std::runtime_error("unknown phantom key '" + e.key + "' (line " +
                               std::to_string(e.line) + ")");
    }
  }
  spec.validate();
  return spec;
}

std::vector<VoxelCoord> self_seeds(const PhantomSpec& spec,
                                   const Grid3<std::uint8_t>& truth) {
  const Dims& d = truth.dims();
  std::vector<int> slices = spec.selfseed_slices;
  if (slices.empty()) {
    int zmin = d.nz, zmax = -1;
    for (int z = 0; z < d.nz; ++z) {
      bool any = false;
      for (int y = 0; y < d.ny && !any; ++y) {
        for (int x = 0; x < d.nx && !any; ++x) {
          any = truth.at(x, y, z) != 0;
        }
      }
      if (any) {
        zmin = std::min(zmin, z);
        zmax = std::max(zmax, z);
      }
    }
    if (zmax < zmin) {
      throw std::runtime_error("phantom ground truth is empty");
    }
    for (int q = 1; q <= 3; ++q) {
      slices.push_back(zmin + (zmax - zmin) * q / 4);
    }
  }
  std::vector<VoxelCoord> seeds;
  for (int z : slices) {
    if (z < 0 || z >= d.nz) {
      throw std::runtime_error("self-seed slice out of bounds");
    }
    std::uint64_t count = 0;
    for (int y = 0; y < d.ny; ++y) {
      for (int x = 0; x < d.nx; ++x) {
        if (truth.at(x, y, z) == 0) {
          continue;
        }
        if (count % static_cast<std::uint64_t>(spec.selfseed_stride) == 0) {
          seeds.push_back(VoxelCoord{x, y, z});
        }
        ++count;
      }
    }
  }
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
  return seeds;
}

}  // namespace rootlevel
