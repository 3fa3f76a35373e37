#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/error.hpp"

namespace ipens {

/// Row-major grayscale image on the 0..255 dynamic range.
struct GrayImage {
  int width = 0, height = 0;
  std::vector<float> pixels;

  static GrayImage zeros(int w, int h) {
    require(w > 0 && h > 0, ErrorCode::invalid_argument, "image size must be positive");
    GrayImage img;
    img.width = w;
    img.height = h;
    img.pixels.assign(std::size_t(w) * h, 0.0f);
    return img;
  }
  float& at(int x, int y) { return pixels[std::size_t(y) * width + x]; }
  float at(int x, int y) const { return pixels[std::size_t(y) * width + x]; }
  std::size_t size() const { return pixels.size(); }
  void validate() const {
    require(width > 0 && height > 0, ErrorCode::invalid_argument, "empty image");
    require(pixels.size() == std::size_t(width) * height, ErrorCode::invalid_argument,
            "pixel count does not match image size");
  }
};

/// Strictly two-valued mask, pixels in {0, 1}.
struct BinaryMask {
  int width = 0, height = 0;
  std::vector<uint8_t> pixels;

  uint8_t at(int x, int y) const { return pixels[std::size_t(y) * width + x]; }
};

/// PNG loader; 8/16-bit gray, palette, RGB and RGBA all accepted. Color is
/// reduced with luma 0.299 R + 0.587 G + 0.114 B.
GrayImage read_png_gray(const std::string& path);

/// 8-bit grayscale PNG; pixels clamped to [0, 255] and rounded.
void write_png_gray(const std::string& path, const GrayImage& image);

void write_png_mask(const std::string& path, const BinaryMask& mask); // 0/255

GrayImage horizontal_flip(const GrayImage& image);

/// Bilinear resample to exactly (w, h).
GrayImage resize_bilinear(const GrayImage& image, int w, int h);

/// Resize so width == down_width with the aspect ratio preserved.
GrayImage resize_to_width(const GrayImage& image, int down_width);

}  // namespace ipens
