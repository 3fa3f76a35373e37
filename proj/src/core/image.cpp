#include "core/image.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>

namespace ipens {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace

GrayImage read_png_gray(const std::string& path) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  require(fp != nullptr, ErrorCode::io, "cannot open " + path);

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  require(png != nullptr, ErrorCode::io, "libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    fail(ErrorCode::io, "libpng init failed");
  }
  std::vector<png_bytep> rows;
  std::vector<uint8_t> data;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(ErrorCode::bad_format, "failed to decode png: " + path);
  }
  png_init_io(png, fp.get());
  png_read_info(png, info);

  const png_byte color_type = png_get_color_type(png, info);
  if (png_get_bit_depth(png, info) == 16) png_set_strip_16(png);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) < 8)
    png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  png_read_update_info(png, info);

  const int width = static_cast<int>(png_get_image_width(png, info));
  const int height = static_cast<int>(png_get_image_height(png, info));
  const int channels = png_get_channels(png, info);
  require(channels == 1 || channels == 3, ErrorCode::bad_format,
          "unsupported png channel layout in " + path);

  data.resize(std::size_t(width) * height * channels);
  rows.resize(height);
  for (int y = 0; y < height; ++y) rows[y] = data.data() + std::size_t(y) * width * channels;
  png_read_image(png, rows.data());
  png_destroy_read_struct(&png, &info, nullptr);

  GrayImage img = GrayImage::zeros(width, height);
  if (channels == 1) {
    for (std::size_t i = 0; i < img.size(); ++i) img.pixels[i] = data[i];
  } else {
    for (std::size_t i = 0; i < img.size(); ++i) {
      const uint8_t* p = &data[i * 3];
      img.pixels[i] = 0.299f * p[0] + 0.587f * p[1] + 0.114f * p[2];
    }
  }
  return img;
}

namespace {

void write_png_bytes(const std::string& path, int width, int height,
                     const std::vector<uint8_t>& bytes) {
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  require(fp != nullptr, ErrorCode::io, "cannot write " + path);
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  require(png != nullptr, ErrorCode::io, "libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    fail(ErrorCode::io, "libpng init failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    fail(ErrorCode::io, "failed to encode png: " + path);
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, width, height, 8, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int y = 0; y < height; ++y)
    png_write_row(png, const_cast<png_bytep>(bytes.data() + std::size_t(y) * width));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace

void write_png_gray(const std::string& path, const GrayImage& image) {
  image.validate();
  std::vector<uint8_t> bytes(image.size());
  for (std::size_t i = 0; i < image.size(); ++i) {
    const float v = std::clamp(image.pixels[i], 0.0f, 255.0f);
    bytes[i] = static_cast<uint8_t>(std::lround(v));
  }
  write_png_bytes(path, image.width, image.height, bytes);
}

void write_png_mask(const std::string& path, const BinaryMask& mask) {
  require(mask.width > 0 && mask.height > 0, ErrorCode::invalid_argument, "empty mask");
  std::vector<uint8_t> bytes(mask.pixels.size());
  for (std::size_t i = 0; i < mask.pixels.size(); ++i) bytes[i] = mask.pixels[i] ? 255 : 0;
  write_png_bytes(path, mask.width, mask.height, bytes);
}

GrayImage horizontal_flip(const GrayImage& image) {
  image.validate();
  GrayImage out = GrayImage::zeros(image.width, image.height);
  for (int y = 0; y < image.height; ++y)
    for (int x = 0; x < image.width; ++x) out.at(x, y) = image.at(image.width - 1 - x, y);
  return out;
}

GrayImage resize_bilinear(const GrayImage& image, int w, int h) {
  image.validate();
  require(w > 0 && h > 0, ErrorCode::invalid_argument, "resize target must be positive");
  GrayImage out = GrayImage::zeros(w, h);
  const double sx = static_cast<double>(image.width) / w;
  const double sy = static_cast<double>(image.height) / h;
  for (int y = 0; y < h; ++y) {
    const double src_y = (y + 0.5) * sy - 0.5;
    const int y0 = std::clamp(static_cast<int>(std::floor(src_y)), 0, image.height - 1);
    const int y1 = std::min(y0 + 1, image.height - 1);
    const double fy = std::clamp(src_y - y0, 0.0, 1.0);
    for (int x = 0; x < w; ++x) {
      const double src_x = (x + 0.5) * sx - 0.5;
      const int x0 = std::clamp(static_cast<int>(std::floor(src_x)), 0, image.width - 1);
      const int x1 = std::min(x0 + 1, image.width - 1);
      const double fx = std::clamp(src_x - x0, 0.0, 1.0);
      const double top = (1 - fx) * image.at(x0, y0) + fx * image.at(x1, y0);
      const double bottom = (1 - fx) * image.at(x0, y1) + fx * image.at(x1, y1);
      out.at(x, y) = static_cast<float>((1 - fy) * top + fy * bottom);
    }
  }
  return out;
}

GrayImage resize_to_width(const GrayImage& image, int down_width) {
  image.validate();
  require(down_width > 0, ErrorCode::invalid_argument, "down_width must be positive");
  if (image.width == down_width) return image;
  const int h = std::max(1, static_cast<int>(std::lround(
                                  static_cast<double>(image.height) * down_width / image.width)));
  return resize_bilinear(image, down_width, h);
}

}  // namespace ipens
