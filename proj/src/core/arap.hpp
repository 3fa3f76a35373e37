#pragma once

#include <vector>

#include "core/geometry.hpp"

namespace ipens {

struct Parameterization2D {
  std::vector<Vec2> uv;          // one per mesh vertex
  std::vector<double> energies;  // per accepted iteration, non-increasing
  double arap_energy = 0.0;      // final value
  int iterations_used = 0;
};

/// Flattens a connected manifold disk to the plane. Tutte initialization maps
/// the boundary to the unit circle by arc length and solves the cotangent
/// harmonic system for the interior; local-global iterations then fit one
/// SO(2) rotation per triangle and re-solve the cotangent system until the
/// energy decrease drops below tol.
Parameterization2D arap_parameterize(const TriMesh& mesh, int max_iterations = 100,
                                     double tol = 1e-7);

}  // namespace ipens
