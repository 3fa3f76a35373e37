#pragma once

#include "core/geometry.hpp"

namespace ipens {

/// Boundary triangles of the alpha complex: a triangle is kept iff it bounds
/// exactly one tetrahedron with circumradius <= alpha, oriented outward.
/// Coplanar clouds fall back to a planar 2D alpha complex patch.
TriMesh alpha_shape_mesh(const LabeledPointCloud& cloud, double alpha);

}  // namespace ipens
