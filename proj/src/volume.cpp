#include "rootlevel/volume.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "rootlevel/image_io.hpp"

namespace rootlevel {

namespace fs = std::filesystem;

Volume::Volume(Dims dims, int depth, double pitch_um)
    : dims_(dims), depth_(depth), pitch_um_(pitch_um), data_(dims.voxels(), 0) {
  if (depth != 8 && depth != 16) throw std::runtime_error("volume depth must be 8 or 16");
  if (dims.nx <= 0 || dims.ny <= 0 || dims.nz <= 0)
    throw std::runtime_error("volume dims must be positive");
}

namespace {

std::vector<fs::path> sorted_images(const fs::path& directory) {
  if (!fs::is_directory(directory))
    throw std::runtime_error("not a directory: " + directory.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(directory)) {
    if (!entry.is_regular_file()) continue;
    auto ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (ext == ".png" || ext == ".tif" || ext == ".tiff") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
  return files;
}

}  // namespace

Volume load_slice_stack(const fs::path& directory) {
  const auto files = sorted_images(directory);
  if (files.empty())
    throw std::runtime_error("no images found in directory: " + directory.string());

  Volume vol;
  for (std::size_t i = 0; i < files.size(); ++i) {
    ImageBuffer img = read_image(files[i]);
    if (img.channels != 1)
      throw std::runtime_error("slice is not single-channel: " + files[i].string());
    if (i == 0) {
      vol = Volume({img.width, img.height, static_cast<int>(files.size())}, img.depth);
    } else {
      if (img.width != vol.dims().nx || img.height != vol.dims().ny)
        throw std::runtime_error("slice dimensions differ from first slice: " + files[i].string());
      if (img.depth != vol.depth())
        throw std::runtime_error("slice bit depth differs from first slice: " + files[i].string());
    }
    Grey* dst = vol.data().data() + i * static_cast<std::size_t>(img.width) * img.height;
    std::copy(img.samples.begin(), img.samples.end(), dst);
  }
  return vol;
}

Volume load_raw(const fs::path& path, Dims dims, int depth) {
  Volume vol(dims, depth);
  const std::size_t bytes_per = depth == 16 ? 2 : 1;
  const std::size_t expected = dims.voxels() * bytes_per;

  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw std::runtime_error("cannot open raw file: " + path.string());
  const auto actual = static_cast<std::size_t>(in.tellg());
  if (actual != expected) {
    throw std::runtime_error("raw file size mismatch for " + path.string() + ": expected " +
                             std::to_string(expected) + ", got " + std::to_string(actual));
  }
  in.seekg(0);

  if (depth == 16) {
    // Samples are little-endian on disk, matching host order here.
    in.read(reinterpret_cast<char*>(vol.data().data()), static_cast<std::streamsize>(expected));
  } else {
    std::vector<std::uint8_t> raw(expected);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(expected));
    for (std::size_t i = 0; i < raw.size(); ++i) vol[i] = raw[i];
  }
  if (!in) throw std::runtime_error("short read on raw file: " + path.string());
  return vol;
}

void save_raw(const Volume& vol, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write raw file: " + path.string());
  if (vol.depth() == 16) {
    out.write(reinterpret_cast<const char*>(vol.data().data()),
              static_cast<std::streamsize>(vol.data().size() * 2));
  } else {
    std::vector<std::uint8_t> raw(vol.data().size());
    for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = static_cast<std::uint8_t>(vol[i]);
    out.write(reinterpret_cast<const char*>(raw.data()),
              static_cast<std::streamsize>(raw.size()));
  }
  if (!out) throw std::runtime_error("failed writing raw file: " + path.string());
}

void write_mask_stack(const Grid3<std::uint8_t>& mask, const fs::path& directory) {
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (!fs::is_directory(directory))
    throw std::runtime_error("cannot create mask directory: " + directory.string());

  const Dims d = mask.dims();
  const std::size_t slice_pixels = static_cast<std::size_t>(d.nx) * d.ny;
  std::vector<std::uint8_t> slice(slice_pixels);
  char name[32];
  for (int z = 0; z < d.nz; ++z) {
    const std::uint8_t* src = mask.data() + static_cast<std::size_t>(z) * slice_pixels;
    for (std::size_t i = 0; i < slice_pixels; ++i) slice[i] = src[i] ? 255 : 0;
    std::snprintf(name, sizeof(name), "mask_%05d.png", z);
    write_png_grey8(directory / name, d.nx, d.ny, slice.data());
  }
}

Grid3<std::uint8_t> load_mask_stack(const fs::path& directory) {
  Volume vol = load_slice_stack(directory);
  Grid3<std::uint8_t> mask(vol.dims(), 0);
  for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = vol[i] ? 1 : 0;
  return mask;
}

}  // namespace rootlevel
