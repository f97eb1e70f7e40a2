// Front-evolution engine: narrow-band level-set iteration over the volume,
// with occupancy-grid scoping, truncated-distance reinitialization, and
// incremental two-class statistics.
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "rootlevel/core.hpp"
#include "rootlevel/dt.hpp"
#include "rootlevel/occupancy.hpp"
#include "rootlevel/parallel.hpp"
#include "rootlevel/stats.hpp"
#include "rootlevel/volume.hpp"

namespace rootlevel {

struct EngineConfig {
  int b = 10;             // narrow-band half width (voxels)
  double nu = 1.0;        // smoothness weight on the curvature term
  int s = 10;             // occupancy cube edge; must be >= b
  int t = 1;              // active-count threshold; contour voxels with count > t freeze
  std::uint64_t k = 100;  // terminate once the active contour shrinks below k voxels
  double dt_step = 1.0;
  Grey g_min = 1;      // voxels darker than this never join either class
  Grey band_lo = 0;    // greylevel interval required to flip into the root class
  Grey band_hi = 65535;
  bool explore_incrementally = true;
  int max_iters = 5000;

  void validate() const;
};

struct MetricsRow {
  int iter = 0;
  std::uint64_t c_active = 0;
  std::uint64_t c_static = 0;
  std::uint64_t ga_cubes = 0;
  std::uint64_t gh_cubes = 0;
  double energy = 0.0;
};

struct RunResult {
  Grid3<std::uint8_t> labels;  // Label values
  std::vector<MetricsRow> metrics;
  int iterations = 0;
  bool converged = false;  // false = stopped by max_iters
};

// Sign changes that the greylevel gates veto leave phi clamped just off zero
// by this margin.
inline constexpr float kFlipEps = 1e-3f;

// Mean curvature estimate at (x,y,z): difference of unit normals evaluated on
// the six voxel faces, each face gradient taking the exact difference across
// the face and averaged central differences tangentially. Border reads
// replicate the boundary value.
double curvature(const Grid3<float>& phi, int x, int y, int z);

class Engine {
 public:
  // vol must outlive the engine. Duplicate seed coordinates are collapsed.
  Engine(const Volume& vol, const std::vector<VoxelCoord>& seeds,
         const EngineConfig& cfg, WorkerPool& pool);

  // One full run to termination. The callback, if set, fires at the end of
  // every iteration (after bookkeeping) and on the terminating iteration;
  // tests use it for invariant scans, the CLI for checkpoints.
  using IterCallback = std::function<void(const Engine&, int iter)>;
  RunResult run(const IterCallback& cb = {});

  // Individual phases, in the order run() applies them. Exposed for tests.
  std::vector<VoxelCoord> locate_contour() const;
  void split_contour(const std::vector<VoxelCoord>& contour,
                     std::vector<VoxelCoord>& active,
                     std::vector<VoxelCoord>& static_part) const;
  void mark_active(const std::vector<VoxelCoord>& active);
  void explore();
  void rebuild_phi(const std::vector<VoxelCoord>& contour);
  void estimate_params();
  // Overrides the estimated class parameters until the next estimate_params()
  // call. Lets tests drive evolve() with exact coefficients.
  void set_params(const GaussianParams& th1, const GaussianParams& th2) {
    th1_ = th1;
    th2_ = th2;
  }
  std::uint64_t evolve();  // returns number of label flips
  void increment_counts();
  double energy_value(std::uint64_t contour_size) const;

  // Fatal-state checks deferred from construction so the initial state stays
  // inspectable; run() calls this first.
  void check_initial_state() const;

  const Volume& volume() const { return *vol_; }
  const EngineConfig& config() const { return cfg_; }
  const Grid3<float>& phi() const { return phi_; }
  const Grid3<std::uint8_t>& labels() const { return labels_; }
  const Grid3<std::uint8_t>& counts() const { return counts_; }
  const Grid3<std::uint8_t>& seed_mask() const { return seed_; }
  const OccupancyGrid& active_grid() const { return ga_; }
  const OccupancyGrid& history_grid() const { return gh_; }
  const ClassHistogram& hist1() const { return hist1_; }
  const ClassHistogram& hist2() const { return hist2_; }
  const GaussianParams& theta1() const { return th1_; }
  const GaussianParams& theta2() const { return th2_; }

 private:
  const Volume* vol_;
  EngineConfig cfg_;
  WorkerPool* pool_;

  Grid3<float> phi_;
  Grid3<std::uint8_t> labels_;
  Grid3<std::uint8_t> counts_;
  Grid3<std::uint8_t> seed_;
  Grid3<std::uint8_t> sources_;
  OccupancyGrid ga_;
  OccupancyGrid gh_;
  DtScratch dt_;
  ClassHistogram hist1_;
  ClassHistogram hist2_;
  GaussianParams th1_;
  GaussianParams th2_;

  std::vector<VoxelCoord> active_cubes() const;  // scan order
};

}  // namespace rootlevel
