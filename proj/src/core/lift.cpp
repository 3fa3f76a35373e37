#include "core/lift.hpp"

#include <algorithm>
#include <cmath>

#include "core/threading.hpp"

namespace ipens {

namespace {

constexpr std::size_t kRaysPerBlock = 2048; // fixed so reductions ignore thread count

}  // namespace

void LiftingConfig::validate() const {
  require(learning_rate > 0, ErrorCode::invalid_argument, "learning_rate must be positive");
  require(lambda >= 0, ErrorCode::invalid_argument, "lambda must be non-negative");
  require(chunk_rays > 0, ErrorCode::invalid_argument, "chunk_rays must be positive");
  require(passes > 0, ErrorCode::invalid_argument, "passes must be positive");
  require(samples_per_ray >= 2, ErrorCode::invalid_argument, "samples_per_ray must be >= 2");
  require(export_threshold > 0 && export_threshold < 1, ErrorCode::invalid_argument,
          "export_threshold must lie in (0,1)");
}

MaskField lift_masks(const DensityField& density, const CameraIntrinsics& intr,
                     const std::vector<LiftView>& views, const LiftingConfig& cfg,
                     LiftStats* stats) {
  cfg.validate();
  density.validate();
  intr.validate();
  require(!views.empty(), ErrorCode::invalid_argument, "lifting needs at least one view");
  const int n_objects = static_cast<int>(views.front().masks.size());
  require(n_objects > 0, ErrorCode::invalid_argument, "lifting needs at least one object");
  const std::size_t n_pixels = intr.pixel_count();
  for (const LiftView& view : views) {
    require(static_cast<int>(view.masks.size()) == n_objects, ErrorCode::invalid_argument,
            "views disagree on object count");
    for (const MaskImage& m : view.masks) {
      require(m.width == intr.width && m.height == intr.height, ErrorCode::invalid_argument,
              "mask resolution does not match intrinsics");
      require(m.values.size() == n_pixels, ErrorCode::invalid_argument,
              "mask pixel count does not match resolution");
      for (float v : m.values)
        require(std::isfinite(v) && v >= 0.0f && v <= 1.0f, ErrorCode::invalid_argument,
                "mask values must be finite and in [0,1]");
    }
  }

  MaskField field = MaskField::zeros(n_objects, density.layout);
  const std::size_t n_vox = density.layout.dims.count();
  const std::size_t chunk = static_cast<std::size_t>(cfg.chunk_rays);

  // cache camera rays once per view
  std::vector<std::vector<Ray>> view_rays;
  view_rays.reserve(views.size());
  for (const LiftView& view : views) view_rays.push_back(generate_camera_rays(view.pose, intr));

  const std::size_t blocks_per_chunk = (chunk + kRaysPerBlock - 1) / kRaysPerBlock;
  std::vector<std::vector<double>> block_grads(blocks_per_chunk);
  std::vector<double> block_losses(blocks_per_chunk, 0.0);
  const bool want_loss = stats != nullptr;
  if (stats) stats->pass_losses.assign(cfg.passes, 0.0);

  for (int pass = 0; pass < cfg.passes; ++pass) {
    double pass_loss = 0.0;
    for (std::size_t vi = 0; vi < views.size(); ++vi) {
      const LiftView& view = views[vi];
      const std::vector<Ray>& rays = view_rays[vi];
      for (std::size_t chunk_begin = 0; chunk_begin < rays.size(); chunk_begin += chunk) {
        const std::size_t chunk_end = std::min(rays.size(), chunk_begin + chunk);
        const std::size_t n_blocks = (chunk_end - chunk_begin + kRaysPerBlock - 1) / kRaysPerBlock;

        parallel_for(n_blocks, cfg.threads, [&](std::size_t block) {
          std::vector<double>& grad = block_grads[block];
          grad.assign(std::size_t(n_objects) * n_vox, 0.0);
          double loss = 0.0;
          std::vector<double> g(n_objects);
          RayMarch march;
          const std::size_t begin = chunk_begin + block * kRaysPerBlock;
          const std::size_t end = std::min(chunk_end, begin + kRaysPerBlock);
          for (std::size_t r = begin; r < end; ++r) {
            const auto clip = density.layout.bounds.clip(rays[r]);
            if (!clip || clip->second <= clip->first) continue;
            march_ray(density, rays[r], clip->first, clip->second, cfg.samples_per_ray, march);
            // dL/dM_i(r) for this ray; constant across samples
            for (int obj = 0; obj < n_objects; ++obj) {
              const double m_ext = view.masks[obj].at(r);
              g[obj] = -m_ext + cfg.lambda * (1.0 - m_ext);
            }
            for (int k = 0; k < cfg.samples_per_ray; ++k) {
              const double w = march.weights[k];
              if (w == 0.0) continue;
              const TrilinearStencil& st = march.stencils[k];
              for (int obj = 0; obj < n_objects; ++obj) {
                const double coeff = w * g[obj];
                double* grad_obj = grad.data() + std::size_t(obj) * n_vox;
                if (want_loss) {
                  const double* score = field.scores[obj].data();
                  double m_render = 0.0;
                  for (int c = 0; c < st.count; ++c) {
                    grad_obj[st.index[c]] += coeff * st.weight[c];
                    m_render += st.weight[c] * score[st.index[c]];
                  }
                  loss += coeff * m_render;
                } else {
                  for (int c = 0; c < st.count; ++c) grad_obj[st.index[c]] += coeff * st.weight[c];
                }
              }
            }
          }
          block_losses[block] = loss;
        });

        // reduce in ascending block index, then one descent step per chunk
        std::vector<double>& total = block_grads[0];
        for (std::size_t b = 1; b < n_blocks; ++b) {
          const std::vector<double>& src = block_grads[b];
          for (std::size_t i = 0; i < total.size(); ++i) total[i] += src[i];
        }
        for (int obj = 0; obj < n_objects; ++obj) {
          double* score = field.scores[obj].data();
          const double* grad_obj = total.data() + std::size_t(obj) * n_vox;
          for (std::size_t i = 0; i < n_vox; ++i) score[i] -= cfg.learning_rate * grad_obj[i];
        }
        if (want_loss)
          for (std::size_t b = 0; b < n_blocks; ++b) pass_loss += block_losses[b];
      }
    }
    if (stats) stats->pass_losses[pass] = pass_loss;
  }
  return field;
}

const std::vector<Rgb>& instance_palette() {
  static const std::vector<Rgb> palette = {
      Rgb{230, 25, 75},  Rgb{60, 180, 75},   Rgb{255, 225, 25}, Rgb{0, 130, 200},
      Rgb{245, 130, 48}, Rgb{145, 30, 180},  Rgb{70, 240, 240}, Rgb{240, 50, 230},
      Rgb{210, 245, 60}, Rgb{250, 190, 212}, Rgb{0, 128, 128},  Rgb{220, 190, 255},
      Rgb{170, 110, 40}, Rgb{255, 250, 200}, Rgb{128, 0, 0},    Rgb{170, 255, 195},
      Rgb{128, 128, 0},  Rgb{255, 215, 180}, Rgb{0, 0, 128},    Rgb{128, 128, 128}};
  return palette;
}

LabeledPointCloud export_instances(const MaskField& mask, const LabeledPointCloud& cloud,
                                   double threshold) {
  mask.validate();
  cloud.validate();
  require(!cloud.points.empty(), ErrorCode::invalid_argument, "cannot label an empty cloud");

  LabeledPointCloud out;
  out.points = cloud.points;
  out.original_colors = cloud.has_colors() ? cloud.colors : cloud.original_colors;
  out.instance_ids.resize(cloud.points.size(), kUnlabeled);
  out.colors.resize(cloud.points.size(), Rgb{0, 0, 0});

  const auto& palette = instance_palette();
  for (std::size_t p = 0; p < cloud.points.size(); ++p) {
    const Vec3& point = cloud.points[p];
    int best = kUnlabeled;
    double best_score = 0.0;
    if (mask.layout.bounds.contains(point)) {
      for (int obj = 0; obj < mask.n_objects(); ++obj) {
        const double raw = trilinear_sample(mask.layout, mask.scores[obj], point);
        const double score = std::clamp(raw, 0.0, 1.0);
        if (score >= threshold && score > best_score) { // ties keep the lowest index
          best = obj;
          best_score = score;
        }
      }
    }
    out.instance_ids[p] = best;
    out.colors[p] = best >= 0 ? palette[best % palette.size()] : Rgb{40, 40, 40};
  }
  return out;
}

}  // namespace ipens
