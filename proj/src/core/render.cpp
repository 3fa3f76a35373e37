#include "core/render.hpp"

#include <cmath>

namespace ipens {

void march_ray(const DensityField& field, const Ray& ray, double t_near, double t_far, int n,
               RayMarch& out) {
  require(n >= 2, ErrorCode::invalid_argument, "ray quadrature needs n >= 2");
  require(t_near < t_far, ErrorCode::invalid_argument, "t_near must precede t_far");
  out.stencils.resize(n);
  out.t_values.resize(n);
  out.weights.resize(n);
  const double delta = (t_far - t_near) / n;
  double tau = 0.0; // accumulated optical depth
  for (int k = 0; k < n; ++k) {
    const double t = t_near + (k + 0.5) * delta;
    const TrilinearStencil st = trilinear_stencil(field.layout, ray.at(t));
    double sigma = 0.0;
    for (int c = 0; c < st.count; ++c) sigma += st.weight[c] * field.sigma[st.index[c]];
    out.stencils[k] = st;
    out.t_values[k] = t;
    out.weights[k] = std::exp(-tau) * (1.0 - std::exp(-sigma * delta));
    tau += sigma * delta;
  }
}

RaySamples compute_ray_weights(const DensityField& field, const Ray& ray, double t_near,
                               double t_far, int n) {
  RayMarch march;
  march_ray(field, ray, t_near, t_far, n, march);
  RaySamples samples;
  samples.t_values = std::move(march.t_values);
  samples.deltas.assign(n, (t_far - t_near) / n);
  samples.weights = std::move(march.weights);
  return samples;
}

std::vector<double> render_mask(const MaskField& mask, const Ray& ray, const RaySamples& samples) {
  require(mask.n_objects() > 0, ErrorCode::invalid_argument, "mask field has no objects");
  std::vector<double> rendered(mask.n_objects(), 0.0);
  const std::size_t n = samples.t_values.size();
  for (std::size_t k = 0; k < n; ++k) {
    const double w = samples.weights[k];
    if (w == 0.0) continue;
    const TrilinearStencil st = trilinear_stencil(mask.layout, ray.at(samples.t_values[k]));
    for (int obj = 0; obj < mask.n_objects(); ++obj) {
      const std::vector<double>& grid = mask.scores[obj];
      double value = 0.0;
      for (int c = 0; c < st.count; ++c) value += st.weight[c] * grid[st.index[c]];
      rendered[obj] += w * value;
    }
  }
  return rendered;
}

double projection_loss(const std::vector<std::vector<double>>& m_ext,
                       const std::vector<std::vector<double>>& m_render, double lambda) {
  require(m_ext.size() == m_render.size(), ErrorCode::invalid_argument,
          "projection loss: object counts differ");
  require(!m_ext.empty(), ErrorCode::invalid_argument, "projection loss: no objects");
  double loss = 0.0;
  for (std::size_t i = 0; i < m_ext.size(); ++i) {
    require(m_ext[i].size() == m_render[i].size(), ErrorCode::invalid_argument,
            "projection loss: ray counts differ");
    for (std::size_t r = 0; r < m_ext[i].size(); ++r) {
      const double ext = m_ext[i][r];
      const double ren = m_render[i][r];
      loss += -ext * ren + lambda * (1.0 - ext) * ren;
    }
  }
  return loss;
}

}  // namespace ipens
