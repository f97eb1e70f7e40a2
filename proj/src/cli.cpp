#include "rootlevel/cli.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "rootlevel/config.hpp"
#include "rootlevel/engine.hpp"
#include "rootlevel/init.hpp"
#include "rootlevel/phantom.hpp"
#include "rootlevel/postproc.hpp"
#include "rootlevel/volume.hpp"

namespace fs = std::filesystem;

namespace rootlevel {

namespace {

struct RunSettings {
  EngineConfig engine;
  std::string volume_dir;
  std::string raw_path;
  std::string init_dir;
  std::string out_dir;
  std::string phantom_path;
  Dims raw_dims;
  bool have_dims = false;
  int depth = 8;
  int workers = 0;  // 0 = hardware concurrency
  int checkpoint = 0;
  bool strict = false;
  int verbose = 0;
};

Dims parse_dims(const std::string& text) {
  const auto v = config_int_list(ConfigEntry{"dims", text, 0});
  if (v.size() != 3 || v[0] < 1 || v[1] < 1 || v[2] < 1) {
    throw std::runtime_error("dims must be three positive integers X,Y,Z");
  }
  return Dims{static_cast<int>(v[0]), static_cast<int>(v[1]), static_cast<int>(v[2])};
}

void apply_config_file(const std::string& path, RunSettings& s) {
  for (const ConfigEntry& e : read_config_file(path)) {
    if (e.key == "b") {
      s.engine.b = static_cast<int>(config_int(e));
    } else if (e.key == "nu") {
      s.engine.nu = config_double(e);
    } else if (e.key == "s") {
      s.engine.s = static_cast<int>(config_int(e));
    } else if (e.key == "t") {
      s.engine.t = static_cast<int>(config_int(e));
    } else if (e.key == "k") {
      s.engine.k = static_cast<std::uint64_t>(config_int(e));
    } else if (e.key == "dt_step") {
      s.engine.dt_step = config_double(e);
    } else if (e.key == "g_min") {
      s.engine.g_min = static_cast<Grey>(config_int(e));
    } else if (e.key == "root_band") {
      const auto v = config_int_list(e);
      if (v.size() != 2) {
        throw std::runtime_error("config key 'root_band' needs lo,hi");
      }
      s.engine.band_lo = static_cast<Grey>(v[0]);
      s.engine.band_hi = static_cast<Grey>(v[1]);
    } else if (e.key == "explore") {
      s.engine.explore_incrementally = config_bool(e);
    } else if (e.key == "max_iters") {
      s.engine.max_iters = static_cast<int>(config_int(e));
    } else if (e.key == "volume_dir") {
      s.volume_dir = e.value;
    } else if (e.key == "raw") {
      s.raw_path = e.value;
    } else if (e.key == "dims") {
      s.raw_dims = parse_dims(e.value);
      s.have_dims = true;
    } else if (e.key == "depth") {
      s.depth = static_cast<int>(config_int(e));
    } else if (e.key == "init_dir") {
      s.init_dir = e.value;
    } else if (e.key == "out") {
      s.out_dir = e.value;
    } else if (e.key == "workers") {
      s.workers = static_cast<int>(config_int(e));
    } else if (e.key == "phantom") {
      s.phantom_path = e.value;
    } else if (e.key == "checkpoint") {
      s.checkpoint = static_cast<int>(config_int(e));
    } else if (e.key == "strict") {
      s.strict = config_bool(e);
    } else if (e.key == "verbose") {
      s.verbose = static_cast<int>(config_int(e));
    } else {
      throw std::runtime_error("unknown config key '" + e.key + "' (line " +
                               std::to_string(e.line) + ")");
    }
  }
}

void write_metrics_csv(const std::vector<MetricsRow>& rows, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << "iter,c_active,c_static,ga_cubes,gh_cubes,energy\n";
  char buf[64];
  for (const MetricsRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.17g", r.energy);
    out << r.iter << ',' << r.c_active << ',' << r.c_static << ',' << r.ga_cubes
        << ',' << r.gh_cubes << ',' << buf << '\n';
  }
}

void write_checkpoint(const Engine& engine, int iter, const fs::path& out_dir) {
  char name[32];
  std::snprintf(name, sizeof(name), "checkpoint_%05d.raw", iter);
  std::ofstream out(out_dir / name, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write checkpoint for iteration " +
                             std::to_string(iter));
  }
  const auto& labels = engine.labels();
  out.write(reinterpret_cast<const char*>(labels.data()),
            static_cast<std::streamsize>(labels.size()));
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Root segmentation by narrow-band front evolution"};
  std::string config_path, volume_dir, raw_path, dims_str, init_dir, out_dir,
      phantom_path;
  int depth = -1, workers = -1, checkpoint = -1;
  bool strict = false;
  app.add_option("--config", config_path, "key = value config file");
  app.add_option("--volume-dir", volume_dir, "directory of greyscale PNG/TIFF slices");
  app.add_option("--raw", raw_path, "raw little-endian volume file");
  app.add_option("--dims", dims_str, "volume dimensions X,Y,Z (with --raw)");
  app.add_option("--depth", depth, "bits per voxel, 8 or 16 (with --raw)");
  app.add_option("--init-dir", init_dir, "directory of marked init_<axis>_<index>.png slices");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--workers", workers, "worker thread count (default: hardware)");
  app.add_option("--phantom", phantom_path, "phantom spec file; runs closed-loop on synthetic data");
  app.add_flag("--strict", strict, "exit 4 if the iteration cap is reached");
  app.add_option("--checkpoint", checkpoint, "dump the label field every N iterations");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  RunSettings s;
  PhantomSpec phantom_spec;
  bool phantom_mode = false;
  try {
    if (!config_path.empty()) {
      apply_config_file(config_path, s);
    }
    // Flags win over config file values.
    if (!volume_dir.empty()) s.volume_dir = volume_dir;
    if (!raw_path.empty()) s.raw_path = raw_path;
    if (!dims_str.empty()) {
      s.raw_dims = parse_dims(dims_str);
      s.have_dims = true;
    }
    if (depth >= 0) s.depth = depth;
    if (!init_dir.empty()) s.init_dir = init_dir;
    if (!out_dir.empty()) s.out_dir = out_dir;
    if (workers >= 0) s.workers = workers;
    if (!phantom_path.empty()) s.phantom_path = phantom_path;
    if (checkpoint >= 0) s.checkpoint = checkpoint;
    if (strict) s.strict = true;

    int sources = 0;
    sources += !s.volume_dir.empty();
    sources += !s.raw_path.empty();
    sources += !s.phantom_path.empty();
    if (sources != 1) {
      throw std::runtime_error(
          "exactly one input source required: --volume-dir, --raw, or --phantom");
    }
    if (!s.raw_path.empty()) {
      if (!s.have_dims) {
        throw std::runtime_error("--raw requires --dims");
      }
      if (s.depth != 8 && s.depth != 16) {
        throw std::runtime_error("depth must be 8 or 16");
      }
    }
    phantom_mode = !s.phantom_path.empty();
    if (!phantom_mode && s.init_dir.empty()) {
      throw std::runtime_error("init-dir required");
    }
    if (s.out_dir.empty()) {
      throw std::runtime_error("out required");
    }
    if (phantom_mode) {
      phantom_spec = parse_phantom_spec(s.phantom_path);
    }
    s.engine.validate();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  }

  try {
    Volume vol;
    Grid3<std::uint8_t> truth;
    std::vector<VoxelCoord> seeds;
    std::uint64_t seeds_dropped = 0;
    if (phantom_mode) {
      PhantomResult gen = generate(phantom_spec);
      vol = std::move(gen.vol);
      truth = std::move(gen.truth);
      seeds = self_seeds(phantom_spec, truth);
    } else {
      vol = s.volume_dir.empty() ? load_raw(s.raw_path, s.raw_dims, s.depth)
                                 : load_slice_stack(s.volume_dir);
      const auto slices = load_init_dir(s.init_dir, vol.dims());
      SeedSet ss = embed_marks(slices, vol, s.engine.g_min, s.engine.band_lo,
                               s.engine.band_hi);
      seeds = std::move(ss.voxels);
      seeds_dropped = ss.dropped_gate;
      if (seeds_dropped > 0) {
        std::fprintf(stderr, "warning: %llu marked voxels dropped by greylevel gates\n",
                     static_cast<unsigned long long>(seeds_dropped));
      }
    }

    int pool_size = s.workers;
    if (pool_size < 1) {
      pool_size = static_cast<int>(std::thread::hardware_concurrency());
      if (pool_size < 1) {
        pool_size = 1;
      }
    }
    WorkerPool pool(pool_size);
    Engine engine(vol, seeds, s.engine, pool);

    fs::create_directories(s.out_dir);
    const fs::path out_dir_path(s.out_dir);
    Engine::IterCallback cb;
    if (s.checkpoint > 0) {
      const int every = s.checkpoint;
      cb = [&, every](const Engine& eng, int iter) {
        if (iter % every == 0) {
          write_checkpoint(eng, iter, out_dir_path);
        }
      };
    }

    const auto t0 = std::chrono::steady_clock::now();
    RunResult res = engine.run(cb);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const FilterReport report = filter_components(res.labels, seeds);
    if (s.verbose >= 1) {
      for (const RemovedComponent& rc : report.removed) {
        std::printf("removed component %u (%llu voxels)\n", rc.id,
                    static_cast<unsigned long long>(rc.size));
      }
    }

    Grid3<std::uint8_t> mask(res.labels.dims(), 0);
    std::uint64_t omega2 = 0;
    for (std::size_t i = 0; i < res.labels.size(); ++i) {
      if (res.labels[i] == static_cast<std::uint8_t>(Label::Omega2)) {
        mask[i] = 1;
        ++omega2;
      }
    }
    write_mask_stack(mask, out_dir_path);
    write_metrics_csv(res.metrics, out_dir_path / "metrics.csv");

    std::ofstream summary(out_dir_path / "summary.txt", std::ios::binary);
    if (!summary) {
      throw std::runtime_error("cannot write summary.txt");
    }
    summary << "iterations: " << res.iterations << '\n'
            << "converged: " << (res.converged ? "yes" : "no") << '\n'
            << "final_omega2: " << omega2 << '\n'
            << "components_removed: " << report.removed.size() << '\n';
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f", wall);
    summary << "wall_time_s: " << buf << '\n';
    if (!phantom_mode) {
      summary << "seeds_dropped: " << seeds_dropped << '\n';
    }
    if (phantom_mode) {
      const double d = dice(mask, truth);
      std::snprintf(buf, sizeof(buf), "%.4f", d);
      summary << "dice: " << buf << '\n';
      std::printf("dice: %s\n", buf);
    }
    summary.close();

    if (!res.converged) {
      std::fprintf(stderr, "warning: iteration cap (%d) reached before convergence\n",
                   s.engine.max_iters);
      if (s.strict) {
        return 4;
      }
    }
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}

}  // namespace rootlevel
