#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "core/error.hpp"

namespace ipens {

using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Rgb = std::array<uint8_t, 3>;

constexpr int32_t kUnlabeled = -1;

/// Point cloud with optional per-point color and instance id (-1 = background).
struct LabeledPointCloud {
  std::vector<Vec3> points;
  std::vector<Rgb> colors;           // empty or size() == points.size()
  std::vector<int32_t> instance_ids; // empty or size() == points.size()
  std::vector<Rgb> original_colors;  // colors prior to instance recoloring

  std::size_t size() const { return points.size(); }
  bool has_colors() const { return !colors.empty(); }
  bool has_ids() const { return !instance_ids.empty(); }
  void validate() const;
};

struct CameraIntrinsics {
  double fx = 0, fy = 0, cx = 0, cy = 0;
  int width = 0, height = 0;

  void validate() const;
  std::size_t pixel_count() const { return std::size_t(width) * std::size_t(height); }
};

/// Rigid world-from-camera transform. Camera looks along -z, +x right, +y up.
struct CameraPose {
  Mat4 world_from_camera = Mat4::Identity();

  static CameraPose from_matrix(const Mat4& m); // validates orthonormality
  Mat3 rotation() const { return world_from_camera.topLeftCorner<3, 3>(); }
  Vec3 translation() const { return world_from_camera.topRightCorner<3, 1>(); }
};

struct Ray {
  Vec3 origin = Vec3::Zero();
  Vec3 direction = Vec3::UnitZ(); // unit norm

  Vec3 at(double t) const { return origin + t * direction; }
};

struct Aabb {
  Vec3 min = Vec3::Zero();
  Vec3 max = Vec3::Zero();

  static Aabb of(const Vec3& lo, const Vec3& hi);
  Vec3 extent() const { return max - min; }
  double diagonal() const { return extent().norm(); }
  bool contains(const Vec3& p) const {
    return (p.array() >= min.array()).all() && (p.array() <= max.array()).all();
  }
  // Intersection parameter interval of ray with the box, clipped to t >= 0.
  std::optional<std::pair<double, double>> clip(const Ray& ray) const;
};

struct TriMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces;

  void validate() const; // index bounds, no repeated vertex in a face
};

/// Rays through every pixel center, row-major over (row, col).
std::vector<Ray> generate_camera_rays(const CameraPose& pose, const CameraIntrinsics& intr);

/// Single pixel variant, pixel center at (col + 0.5, row + 0.5).
Ray camera_ray(const CameraPose& pose, const CameraIntrinsics& intr, double col, double row);

Aabb bounding_box(const std::vector<Vec3>& points);

}  // namespace ipens
