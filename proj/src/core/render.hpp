#pragma once

#include <vector>

#include "core/grid.hpp"

namespace ipens {

/// Quadrature samples along one ray: positions t, spacing, and the
/// emission-absorption weights w_i = T_i * (1 - exp(-sigma_i * delta)) with
/// T_i = exp(-sum_{j<i} sigma_j * delta). Sum of weights is 1 - exp(-tau).
struct RaySamples {
  std::vector<double> t_values; // ascending, within [t_near, t_far]
  std::vector<double> deltas;   // positive spacing, uniform here
  std::vector<double> weights;  // in [0, 1], sum <= 1
};

RaySamples compute_ray_weights(const DensityField& field, const Ray& ray, double t_near,
                               double t_far, int n);

/// March with the interpolation stencils kept: the stencil of each sample
/// serves both the sigma gather and any later gather/scatter against a grid
/// sharing the density layout.
struct RayMarch {
  std::vector<TrilinearStencil> stencils;
  std::vector<double> t_values;
  std::vector<double> weights;
};

void march_ray(const DensityField& field, const Ray& ray, double t_near, double t_far, int n,
               RayMarch& out);

/// Volume-rendered mask scores for a single ray, one value per object:
/// M_i = sum_k w_k * trilerp(scores_i, ray(t_k)). Linear in the score grids.
std::vector<double> render_mask(const MaskField& mask, const Ray& ray, const RaySamples& samples);

/// L = -sum_i sum_r ext[i][r] * render[i][r] + lambda * sum_i sum_r (1 - ext[i][r]) * render[i][r]
double projection_loss(const std::vector<std::vector<double>>& m_ext,
                       const std::vector<std::vector<double>>& m_render, double lambda);

}  // namespace ipens
