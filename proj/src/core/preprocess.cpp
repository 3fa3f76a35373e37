#include "core/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>

#include "core/kdtree.hpp"

namespace ipens {

void MeshingConfig::validate() const {
  require(voxel_size > 0, ErrorCode::invalid_argument, "voxel_size must be positive");
  require(outlier_k > 0, ErrorCode::invalid_argument, "outlier_k must be positive");
  require(outlier_sigma > 0, ErrorCode::invalid_argument, "outlier_sigma must be positive");
  require(alpha > 0, ErrorCode::invalid_argument, "alpha must be positive");
  require(loop_iterations >= 0, ErrorCode::invalid_argument, "loop_iterations must be >= 0");
}

LabeledPointCloud voxel_downsample(const LabeledPointCloud& cloud, double voxel_size) {
  cloud.validate();
  require(!cloud.points.empty(), ErrorCode::invalid_argument, "downsample of empty cloud");
  require(voxel_size > 0, ErrorCode::invalid_argument, "voxel_size must be positive");

  const Aabb box = bounding_box(cloud.points);
  struct Bucket {
    Vec3 sum = Vec3::Zero();
    std::array<double, 3> color_sum{0, 0, 0};
    std::map<int32_t, int> id_votes;
    int count = 0;
  };
  // ordered keys make the output deterministic
  std::map<std::array<int64_t, 3>, Bucket> buckets;
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    const Vec3 rel = (cloud.points[i] - box.min) / voxel_size;
    const std::array<int64_t, 3> key = {static_cast<int64_t>(std::floor(rel.x())),
                                        static_cast<int64_t>(std::floor(rel.y())),
                                        static_cast<int64_t>(std::floor(rel.z()))};
    Bucket& b = buckets[key];
    b.sum += cloud.points[i];
    if (cloud.has_colors())
      for (int c = 0; c < 3; ++c) b.color_sum[c] += cloud.colors[i][c];
    if (cloud.has_ids()) ++b.id_votes[cloud.instance_ids[i]];
    ++b.count;
  }

  LabeledPointCloud out;
  out.points.reserve(buckets.size());
  if (cloud.has_colors()) out.colors.reserve(buckets.size());
  if (cloud.has_ids()) out.instance_ids.reserve(buckets.size());
  for (const auto& [key, b] : buckets) {
    (void)key;
    out.points.push_back(b.sum / b.count);
    if (cloud.has_colors()) {
      Rgb rgb;
      for (int c = 0; c < 3; ++c)
        rgb[c] = static_cast<uint8_t>(std::lround(b.color_sum[c] / b.count));
      out.colors.push_back(rgb);
    }
    if (cloud.has_ids()) {
      int32_t best_id = kUnlabeled;
      int best_votes = -1;
      for (const auto& [id, votes] : b.id_votes)
        if (votes > best_votes) { // ties go to the smallest id (map order)
          best_id = id;
          best_votes = votes;
        }
      out.instance_ids.push_back(best_id);
    }
  }
  return out;
}

LabeledPointCloud preprocess_cloud(const LabeledPointCloud& cloud, const MeshingConfig& cfg) {
  cfg.validate();
  LabeledPointCloud down = voxel_downsample(cloud, cfg.voxel_size);
  const std::size_t n = down.points.size();
  if (n <= 2) return down;

  const int k = std::min<int>(cfg.outlier_k, static_cast<int>(n) - 1);
  NnIndex index(down.points);
  std::vector<double> mean_dist(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    // k+1 includes the query point itself at distance zero
    const std::vector<int> nn = index.knn(down.points[i], k + 1);
    double sum = 0.0;
    int used = 0;
    for (int j : nn) {
      if (static_cast<std::size_t>(j) == i) continue;
      sum += (down.points[j] - down.points[i]).norm();
      ++used;
    }
    mean_dist[i] = sum / std::max(used, 1);
  }
  double mu = 0.0;
  for (double d : mean_dist) mu += d;
  mu /= static_cast<double>(n);
  double var = 0.0;
  for (double d : mean_dist) var += (d - mu) * (d - mu);
  const double sd = std::sqrt(var / static_cast<double>(n));
  const double cutoff = mu + cfg.outlier_sigma * sd;

  LabeledPointCloud kept;
  for (std::size_t i = 0; i < n; ++i) {
    if (mean_dist[i] > cutoff) continue;
    kept.points.push_back(down.points[i]);
    if (down.has_colors()) kept.colors.push_back(down.colors[i]);
    if (down.has_ids()) kept.instance_ids.push_back(down.instance_ids[i]);
  }
  return kept;
}

}  // namespace ipens
