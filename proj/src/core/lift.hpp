#pragma once

#include <cstdint>
#include <vector>

#include "core/grid.hpp"
#include "core/render.hpp"

namespace ipens {

struct LiftingConfig {
  double learning_rate = 0.1;
  double lambda = 1.0;       // weight of the background suppression term
  int chunk_rays = 16384;
  int passes = 3;            // sweeps over all views
  int samples_per_ray = 128;
  double export_threshold = 0.5;
  uint64_t seed = 0;
  int threads = 0;           // 0 = hardware concurrency

  void validate() const;
};

/// Per-object soft mask for one view, values in [0, 1], row-major.
struct MaskImage {
  int width = 0, height = 0;
  std::vector<float> values;

  float at(std::size_t pixel) const { return values[pixel]; }
};

struct LiftView {
  CameraPose pose;
  std::vector<MaskImage> masks; // one per object
};

struct LiftStats {
  std::vector<double> pass_losses; // projection loss summed over views, per pass
};

/// Mask inverse rendering: gradient descent on per-object voxel score grids so
/// that their volume renderings match the supplied per-view 2D masks. The
/// score field shares the density grid's dims and bounds and starts at zero.
/// Chunks are reduced in ascending index, so the result is bit-deterministic
/// for a given config regardless of thread count.
MaskField lift_masks(const DensityField& density, const CameraIntrinsics& intr,
                     const std::vector<LiftView>& views, const LiftingConfig& cfg,
                     LiftStats* stats = nullptr);

/// Assigns each point the argmax object whose clamped interpolated score
/// reaches the threshold (ties to the lowest object index), -1 otherwise.
/// Output colors come from the instance palette; prior colors are kept in
/// original_colors.
LabeledPointCloud export_instances(const MaskField& mask, const LabeledPointCloud& cloud,
                                   double threshold);

const std::vector<Rgb>& instance_palette();

}  // namespace ipens
