#include "rootlevel/init.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <set>
#include <stdexcept>
#include <string>

namespace fs = std::filesystem;

namespace rootlevel {

bool is_red_mark(int r, int g, int b) {
  return r >= 128 && r >= 2 * g && r >= 2 * b;
}

MarkedSlice parse_marked_slice(const ImageBuffer& image, Axis axis, int index,
                               int expected_w, int expected_h) {
  if (image.width != expected_w || image.height != expected_h) {
    throw std::runtime_error(
        "marked slice dimensions " + std::to_string(image.width) + "x" +
        std::to_string(image.height) + " do not match volume cross-section " +
        std::to_string(expected_w) + "x" + std::to_string(expected_h));
  }
  MarkedSlice out;
  out.axis = axis;
  out.index = index;
  out.width = image.width;
  out.height = image.height;
  out.mask.assign(static_cast<std::size_t>(out.width) * out.height, 0);
  if (image.channels < 3) {
    return out;  // greyscale: no pixel can be dominantly red
  }
  for (int v = 0; v < out.height; ++v) {
    for (int u = 0; u < out.width; ++u) {
      const int r = image.sample(u, v, 0);
      const int g = image.sample(u, v, 1);
      const int b = image.sample(u, v, 2);
      if (is_red_mark(r, g, b)) {
        out.mask[static_cast<std::size_t>(v) * out.width + u] = 1;
      }
    }
  }
  return out;
}

namespace {

VoxelCoord to_voxel(const MarkedSlice& s, int u, int v) {
  switch (s.axis) {
    case Axis::X:
      return VoxelCoord{s.index, u, v};
    case Axis::Y:
      return VoxelCoord{u, s.index, v};
    default:
      return VoxelCoord{u, v, s.index};
  }
}

}  // namespace

SeedSet embed_marks(const std::vector<MarkedSlice>& slices, const Volume& vol,
                    Grey g_min, Grey band_lo, Grey band_hi) {
  std::set<VoxelCoord> accepted;
  std::set<VoxelCoord> rejected;
  for (const MarkedSlice& s : slices) {
    for (int v = 0; v < s.height; ++v) {
      for (int u = 0; u < s.width; ++u) {
        if (!s.marked(u, v)) {
          continue;
        }
        const VoxelCoord c = to_voxel(s, u, v);
        if (!vol.dims().contains(c.x, c.y, c.z)) {
          throw std::runtime_error("marked pixel maps outside the volume");
        }
        const Grey g = vol.at(c.x, c.y, c.z);
        if (g < g_min || g < band_lo || g > band_hi) {
          rejected.insert(c);
        } else {
          accepted.insert(c);
        }
      }
    }
  }
  SeedSet out;
  out.voxels.assign(accepted.begin(), accepted.end());
  // A voxel accepted via one slice and rejected via another is the same
  // greylevel both times, so the two sets are disjoint by construction.
  out.dropped_gate = rejected.size();
  if (out.voxels.empty()) {
    throw std::runtime_error("no initialization voxels");
  }
  return out;
}

namespace {

// init_<axis>_<index>.png with axis in {x,y,z} (either case) and a decimal
// index. Returns false if the stem does not start with "init_".
bool parse_init_name(const std::string& filename, Axis& axis, int& index) {
  const std::string stem = fs::path(filename).stem().string();
  if (stem.rfind("init_", 0) != 0) {
    return false;
  }
  if (stem.size() < 7 || stem[6] != '_') {
    throw std::runtime_error("unrecognized init file name: " + filename);
  }
  switch (std::tolower(static_cast<unsigned char>(stem[5]))) {
    case 'x': axis = Axis::X; break;
    case 'y': axis = Axis::Y; break;
    case 'z': axis = Axis::Z; break;
    default:
      throw std::runtime_error("unrecognized init file name: " + filename);
  }
  const std::string digits = stem.substr(7);
  if (digits.empty() ||
      !std::all_of(digits.begin(), digits.end(),
                   [](unsigned char c) { return std::isdigit(c); })) {
    throw std::runtime_error("unrecognized init file name: " + filename);
  }
  index = std::stoi(digits);
  return true;
}

}  // namespace

std::vector<MarkedSlice> load_init_dir(const std::string& directory, const Dims& dims) {
  if (!fs::is_directory(directory)) {
    throw std::runtime_error("init directory not found: " + directory);
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(directory)) {
    if (!entry.is_regular_file()) {
      continue;
    }
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (ext == ".png") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<MarkedSlice> out;
  for (const fs::path& p : files) {
    Axis axis;
    int index;
    if (!parse_init_name(p.filename().string(), axis, index)) {
      throw std::runtime_error("unrecognized init file name: " + p.filename().string());
    }
    int extent, w, h;
    switch (axis) {
      case Axis::X: extent = dims.nx; w = dims.ny; h = dims.nz; break;
      case Axis::Y: extent = dims.ny; w = dims.nx; h = dims.nz; break;
      default:      extent = dims.nz; w = dims.nx; h = dims.ny; break;
    }
    if (index < 0 || index >= extent) {
      throw std::runtime_error("init slice index out of bounds: " + p.filename().string());
    }
    out.push_back(parse_marked_slice(read_image(p.string()), axis, index, w, h));
  }
  return out;
}

}  // namespace rootlevel
