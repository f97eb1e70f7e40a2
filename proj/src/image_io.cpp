#include "rootlevel/image_io.hpp"

#include <png.h>
#include <tiffio.h>

#include <cstdio>
#include <cstring>
#include <memory>
#include <stdexcept>

namespace rootlevel {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

ImageBuffer read_png(const std::filesystem::path& path) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) throw std::runtime_error("cannot open image: " + path.string());

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw std::runtime_error("png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw std::runtime_error("png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error("failed to decode PNG: " + path.string());
  }

  png_init_io(png, file.get());
  png_read_info(png, info);

  const png_uint_32 width = png_get_image_width(png, info);
  const png_uint_32 height = png_get_image_height(png, info);
  int bit_depth = png_get_bit_depth(png, info);
  int color_type = png_get_color_type(png, info);

  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  // Non-grey content is only used for mark detection; 8 bits is enough.
  if (bit_depth == 16 && color_type != PNG_COLOR_TYPE_GRAY) png_set_strip_16(png);
  if (bit_depth == 16 && color_type == PNG_COLOR_TYPE_GRAY) png_set_swap(png);

  png_read_update_info(png, info);
  bit_depth = png_get_bit_depth(png, info);
  const int channels = png_get_channels(png, info);

  ImageBuffer out;
  out.width = static_cast<int>(width);
  out.height = static_cast<int>(height);
  out.depth = bit_depth;
  out.channels = channels;
  out.samples.resize(static_cast<std::size_t>(width) * height * channels);

  const std::size_t rowbytes = png_get_rowbytes(png, info);
  std::vector<std::uint8_t> row(rowbytes);
  for (png_uint_32 y = 0; y < height; ++y) {
    png_read_row(png, row.data(), nullptr);
    std::uint16_t* dst = out.samples.data() + static_cast<std::size_t>(y) * width * channels;
    if (bit_depth == 16) {
      std::memcpy(dst, row.data(), rowbytes);
    } else {
      for (std::size_t i = 0; i < static_cast<std::size_t>(width) * channels; ++i) dst[i] = row[i];
    }
  }
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return out;
}

ImageBuffer read_tiff(const std::filesystem::path& path) {
  TIFFSetWarningHandler(nullptr);
  TIFF* tif = TIFFOpen(path.c_str(), "r");
  if (!tif) throw std::runtime_error("cannot open image: " + path.string());

  std::uint32_t width = 0, height = 0;
  std::uint16_t bits = 8, samples_per_pixel = 1, sample_format = SAMPLEFORMAT_UINT;
  TIFFGetField(tif, TIFFTAG_IMAGEWIDTH, &width);
  TIFFGetField(tif, TIFFTAG_IMAGELENGTH, &height);
  TIFFGetFieldDefaulted(tif, TIFFTAG_BITSPERSAMPLE, &bits);
  TIFFGetFieldDefaulted(tif, TIFFTAG_SAMPLESPERPIXEL, &samples_per_pixel);
  TIFFGetFieldDefaulted(tif, TIFFTAG_SAMPLEFORMAT, &sample_format);

  if (samples_per_pixel != 1 || (bits != 8 && bits != 16) || sample_format != SAMPLEFORMAT_UINT) {
    TIFFClose(tif);
    throw std::runtime_error("unsupported TIFF layout (need 8/16-bit single-channel): " +
                             path.string());
  }

  ImageBuffer out;
  out.width = static_cast<int>(width);
  out.height = static_cast<int>(height);
  out.depth = bits;
  out.channels = 1;
  out.samples.resize(static_cast<std::size_t>(width) * height);

  std::vector<std::uint8_t> row(TIFFScanlineSize(tif));
  for (std::uint32_t y = 0; y < height; ++y) {
    if (TIFFReadScanline(tif, row.data(), y) < 0) {
      TIFFClose(tif);
      throw std::runtime_error("failed to decode TIFF: " + path.string());
    }
    std::uint16_t* dst = out.samples.data() + static_cast<std::size_t>(y) * width;
    if (bits == 16) {
      std::memcpy(dst, row.data(), static_cast<std::size_t>(width) * 2);
    } else {
      for (std::uint32_t x = 0; x < width; ++x) dst[x] = row[x];
    }
  }
  TIFFClose(tif);
  return out;
}

}  // namespace

ImageBuffer read_image(const std::filesystem::path& path) {
  FilePtr file(std::fopen(path.c_str(), "rb"));
  if (!file) throw std::runtime_error("cannot open image: " + path.string());
  unsigned char magic[4] = {0, 0, 0, 0};
  const std::size_t got = std::fread(magic, 1, 4, file.get());
  file.reset();
  if (got >= 4 && png_sig_cmp(magic, 0, 4) == 0) return read_png(path);
  if (got >= 2 && ((magic[0] == 'I' && magic[1] == 'I') || (magic[0] == 'M' && magic[1] == 'M')))
    return read_tiff(path);
  throw std::runtime_error("unrecognized image format: " + path.string());
}

void write_png_grey8(const std::filesystem::path& path, int width, int height,
                     const std::uint8_t* pixels) {
  FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file) throw std::runtime_error("cannot write image: " + path.string());

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw std::runtime_error("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw std::runtime_error("png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("failed to encode PNG: " + path.string());
  }

  png_init_io(png, file.get());
  png_set_IHDR(png, info, width, height, 8, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < height; ++y) {
    png_write_row(png, const_cast<png_bytep>(pixels + static_cast<std::size_t>(y) * width));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

void write_png_rgb8(const std::filesystem::path& path, int width, int height,
                    const std::uint8_t* rgb) {
  FilePtr file(std::fopen(path.c_str(), "wb"));
  if (!file) throw std::runtime_error("cannot write image: " + path.string());

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw std::runtime_error("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw std::runtime_error("png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("failed to encode PNG: " + path.string());
  }

  png_init_io(png, file.get());
  png_set_IHDR(png, info, width, height, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < height; ++y) {
    png_write_row(png, const_cast<png_bytep>(rgb + static_cast<std::size_t>(y) * width * 3));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace rootlevel
