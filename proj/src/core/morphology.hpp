#pragma once

#include "core/image.hpp"

namespace ipens {

// 5x5 all-ones structuring element, clipped at the image border.
BinaryMask binarize(const GrayImage& mask);              // pixel > 0 -> 1
BinaryMask dilate(const BinaryMask& mask, int radius = 2);
BinaryMask erode(const BinaryMask& mask, int radius = 2);
BinaryMask morphological_close(const BinaryMask& mask, int radius = 2);
BinaryMask morphological_open(const BinaryMask& mask, int radius = 2);

/// Mask cleanup: binarize, close (fill holes), then open (drop specks).
BinaryMask residual_handle(const GrayImage& mask);

}  // namespace ipens
