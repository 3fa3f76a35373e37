#pragma once

#include <vector>

#include "core/geometry.hpp"

namespace ipens {

/// Undirected edge adjacency; throws on edges with more than two faces.
struct MeshAdjacency {
  std::vector<std::array<int, 2>> edges;          // sorted vertex pairs
  std::vector<std::array<int, 2>> edge_faces;     // -1 when absent
  std::vector<std::array<int, 3>> face_edges;     // edge index per face corner

  static MeshAdjacency build(const TriMesh& mesh);
  bool has_boundary() const;
};

int euler_characteristic(const TriMesh& mesh);

/// Boundary loops as vertex cycles, each following the face winding.
std::vector<std::vector<int>> boundary_loops(const TriMesh& mesh);

/// Fills every boundary loop with at most max_loop_edges edges by a centroid
/// fan. Larger loops stay open; their count is written to open_loops_out.
TriMesh fill_holes(const TriMesh& mesh, int max_loop_edges = 64, int* open_loops_out = nullptr);

/// Standard Loop scheme with boundary rules; requires a manifold input.
TriMesh loop_subdivide(const TriMesh& mesh, int iterations);

/// Drops vertices no face references, remapping face indices.
TriMesh remove_unreferenced_vertices(const TriMesh& mesh);

}  // namespace ipens
