#include "core/morphology.hpp"

#include <algorithm>

namespace ipens {

namespace {

// Separable sliding max/min over a (2r+1)^2 window clipped to the image.
template <typename Op>
BinaryMask window_filter(const BinaryMask& mask, int radius, Op op, uint8_t init) {
  BinaryMask tmp{mask.width, mask.height, std::vector<uint8_t>(mask.pixels.size(), init)};
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      uint8_t acc = init;
      const int x0 = std::max(0, x - radius);
      const int x1 = std::min(mask.width - 1, x + radius);
      for (int xi = x0; xi <= x1; ++xi) acc = op(acc, mask.at(xi, y));
      tmp.pixels[std::size_t(y) * mask.width + x] = acc;
    }
  }
  BinaryMask out{mask.width, mask.height, std::vector<uint8_t>(mask.pixels.size(), init)};
  for (int y = 0; y < mask.height; ++y) {
    const int y0 = std::max(0, y - radius);
    const int y1 = std::min(mask.height - 1, y + radius);
    for (int x = 0; x < mask.width; ++x) {
      uint8_t acc = init;
      for (int yi = y0; yi <= y1; ++yi) acc = op(acc, tmp.at(x, yi));
      out.pixels[std::size_t(y) * mask.width + x] = acc;
    }
  }
  return out;
}

}  // namespace

BinaryMask binarize(const GrayImage& mask) {
  mask.validate();
  BinaryMask out{mask.width, mask.height, std::vector<uint8_t>(mask.size(), 0)};
  for (std::size_t i = 0; i < mask.size(); ++i) out.pixels[i] = mask.pixels[i] > 0 ? 1 : 0;
  return out;
}

BinaryMask dilate(const BinaryMask& mask, int radius) {
  return window_filter(mask, radius, [](uint8_t a, uint8_t b) { return std::max(a, b); },
                       uint8_t{0});
}

BinaryMask erode(const BinaryMask& mask, int radius) {
  return window_filter(mask, radius, [](uint8_t a, uint8_t b) { return std::min(a, b); },
                       uint8_t{1});
}

BinaryMask morphological_close(const BinaryMask& mask, int radius) {
  return erode(dilate(mask, radius), radius);
}

BinaryMask morphological_open(const BinaryMask& mask, int radius) {
  return dilate(erode(mask, radius), radius);
}

BinaryMask residual_handle(const GrayImage& mask) {
  return morphological_open(morphological_close(binarize(mask)));
}

}  // namespace ipens
