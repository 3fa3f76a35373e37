#pragma once

#include <array>
#include <vector>

#include "core/geometry.hpp"

namespace ipens {

/// Finite tetrahedron of a Delaunay tetrahedralization, positively oriented.
struct DelaunayTet {
  std::array<int, 4> v;
  double circumradius = 0.0;
};

/// Incremental Bowyer-Watson over normalized coordinates. Inputs receive a
/// deterministic 1e-9-scale symbolic jitter so cospherical configurations
/// (grids, sampled spheres) triangulate consistently; circumradii are
/// reported in the original scale.
std::vector<DelaunayTet> delaunay3d(const std::vector<Vec3>& points);

struct DelaunayTri {
  std::array<int, 3> v; // counter-clockwise in the input plane
  double circumradius = 0.0;
};

std::vector<DelaunayTri> delaunay2d(const std::vector<Vec2>& points);

}  // namespace ipens
