// Minimal PNG/TIFF image I/O: 8/16-bit single-channel slices in, 8-bit RGB
// marked slices in, 8-bit grey mask slices out.
#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace rootlevel {

struct ImageBuffer {
  int width = 0;
  int height = 0;
  int depth = 8;     // bits per sample, 8 or 16
  int channels = 1;  // 1 = grey, 3 = rgb
  // Row-major, channel-interleaved samples in native range [0, 2^depth - 1].
  std::vector<std::uint16_t> samples;

  std::uint16_t sample(int x, int y, int c = 0) const {
    return samples[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
};

// Reads a PNG or TIFF image (chosen by file signature). Grey images keep
// their bit depth; palette/RGBA images come back as 8-bit RGB.
ImageBuffer read_image(const std::filesystem::path& path);

// Writes an 8-bit single-channel PNG; pixels is width*height bytes.
void write_png_grey8(const std::filesystem::path& path, int width, int height,
                     const std::uint8_t* pixels);

// Writes an 8-bit RGB PNG; rgb is width*height*3 interleaved bytes.
void write_png_rgb8(const std::filesystem::path& path, int width, int height,
                    const std::uint8_t* rgb);

}  // namespace rootlevel
