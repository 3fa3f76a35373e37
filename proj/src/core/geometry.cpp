#include "core/geometry.hpp"

#include <cmath>

namespace ipens {

void LabeledPointCloud::validate() const {
  if (!colors.empty())
    require(colors.size() == points.size(), ErrorCode::invalid_argument,
            "cloud colors length differs from point count");
  if (!original_colors.empty())
    require(original_colors.size() == points.size(), ErrorCode::invalid_argument,
            "cloud original_colors length differs from point count");
  if (!instance_ids.empty()) {
    require(instance_ids.size() == points.size(), ErrorCode::invalid_argument,
            "cloud instance_ids length differs from point count");
    for (int32_t id : instance_ids)
      require(id >= -1, ErrorCode::invalid_argument, "instance id below -1");
  }
  for (const Vec3& p : points)
    require(p.allFinite(), ErrorCode::invalid_argument, "non-finite point coordinate");
}

void CameraIntrinsics::validate() const {
  require(fx > 0 && fy > 0, ErrorCode::invalid_argument, "focal lengths must be positive");
  require(width > 0 && height > 0, ErrorCode::invalid_argument, "image size must be positive");
  require(cx >= 0 && cx < width, ErrorCode::invalid_argument, "cx outside image");
  require(cy >= 0 && cy < height, ErrorCode::invalid_argument, "cy outside image");
}

CameraPose CameraPose::from_matrix(const Mat4& m) {
  require(m.allFinite(), ErrorCode::invalid_argument, "pose matrix has non-finite entries");
  const Eigen::RowVector4d bottom = m.row(3);
  require(bottom == Eigen::RowVector4d(0, 0, 0, 1), ErrorCode::invalid_argument,
          "pose bottom row must be (0,0,0,1)");
  const Mat3 r = m.topLeftCorner<3, 3>();
  const double ortho_err = (r * r.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff();
  require(ortho_err <= 1e-6, ErrorCode::invalid_argument,
          "pose rotation block is not orthonormal");
  require(std::abs(r.determinant() - 1.0) <= 1e-6, ErrorCode::invalid_argument,
          "pose rotation block must have determinant +1");
  CameraPose pose;
  pose.world_from_camera = m;
  return pose;
}

Aabb Aabb::of(const Vec3& lo, const Vec3& hi) {
  require((lo.array() <= hi.array()).all(), ErrorCode::invalid_argument,
          "aabb min exceeds max");
  Aabb b;
  b.min = lo;
  b.max = hi;
  return b;
}

std::optional<std::pair<double, double>> Aabb::clip(const Ray& ray) const {
  double t0 = 0.0;
  double t1 = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 3; ++a) {
    const double o = ray.origin[a];
    const double d = ray.direction[a];
    if (d == 0.0) {
      if (o < min[a] || o > max[a]) return std::nullopt;
      continue;
    }
    double near = (min[a] - o) / d;
    double far = (max[a] - o) / d;
    if (near > far) std::swap(near, far);
    t0 = std::max(t0, near);
    t1 = std::min(t1, far);
    if (t0 > t1) return std::nullopt;
  }
  return std::make_pair(t0, t1);
}

void TriMesh::validate() const {
  const int n = static_cast<int>(vertices.size());
  for (const auto& f : faces) {
    for (int v : f)
      require(v >= 0 && v < n, ErrorCode::invalid_argument, "face index out of range");
    require(f[0] != f[1] && f[1] != f[2] && f[0] != f[2], ErrorCode::invalid_argument,
            "face repeats a vertex");
  }
}

Ray camera_ray(const CameraPose& pose, const CameraIntrinsics& intr, double col, double row) {
  // +x right, +y up, camera looks along -z; image rows grow downward.
  const Vec3 dir_cam((col - intr.cx) / intr.fx, -(row - intr.cy) / intr.fy, -1.0);
  Ray ray;
  ray.origin = pose.translation();
  ray.direction = (pose.rotation() * dir_cam).normalized();
  return ray;
}

std::vector<Ray> generate_camera_rays(const CameraPose& pose, const CameraIntrinsics& intr) {
  intr.validate();
  std::vector<Ray> rays;
  rays.reserve(intr.pixel_count());
  for (int v = 0; v < intr.height; ++v)
    for (int u = 0; u < intr.width; ++u)
      rays.push_back(camera_ray(pose, intr, u + 0.5, v + 0.5));
  return rays;
}

Aabb bounding_box(const std::vector<Vec3>& points) {
  require(!points.empty(), ErrorCode::invalid_argument, "bounding box of empty point set");
  Vec3 lo = points.front();
  Vec3 hi = points.front();
  for (const Vec3& p : points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return Aabb::of(lo, hi);
}

}  // namespace ipens
