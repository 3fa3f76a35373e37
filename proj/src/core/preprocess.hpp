#pragma once

#include "core/geometry.hpp"

namespace ipens {

struct MeshingConfig {
  double voxel_size = 0.01;  // scene units
  int outlier_k = 20;
  double outlier_sigma = 2.0;
  double alpha = 0.03;       // alpha-shape radius; CLI default is 3x voxel_size
  int loop_iterations = 2;

  void validate() const;
};

/// Voxel downsampling anchored at the cloud's min corner (one centroid point
/// per occupied voxel, majority instance id, mean color), followed by
/// statistical outlier removal against the mean k-NN distance distribution.
LabeledPointCloud preprocess_cloud(const LabeledPointCloud& cloud, const MeshingConfig& cfg);

/// Downsample step alone; used by the volume trait as well.
LabeledPointCloud voxel_downsample(const LabeledPointCloud& cloud, double voxel_size);

}  // namespace ipens
