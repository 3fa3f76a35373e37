#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "core/image.hpp"

namespace ipens {

/// Mean structural similarity over valid 11x11 Gaussian windows (sigma 1.5),
/// constants C1 = (0.01*255)^2 and C2 = (0.03*255)^2. Inputs must share
/// dimensions and be at least 11 pixels in each direction.
double ssim(const GrayImage& a, const GrayImage& b);

struct RearFrameConfig {
  double threshold = 0.05;
  int down_width = 128;
  int threads = 0; // 0 = hardware concurrency
};

/// Flags frame f when ssim(ref, flip(f)) - ssim(ref, f) > threshold after
/// downscaling both to down_width; returns the (min, max) flagged indices.
std::optional<std::pair<int, int>> find_rear_frames(const GrayImage& reference,
                                                    const std::vector<GrayImage>& frames,
                                                    const RearFrameConfig& cfg = {});

}  // namespace ipens
