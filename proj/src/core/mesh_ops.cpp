#include "core/mesh_ops.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace ipens {

MeshAdjacency MeshAdjacency::build(const TriMesh& mesh) {
  mesh.validate();
  MeshAdjacency adj;
  adj.face_edges.resize(mesh.faces.size());
  std::map<std::array<int, 2>, int> edge_ids;
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    for (int e = 0; e < 3; ++e) {
      const int a = mesh.faces[f][e];
      const int b = mesh.faces[f][(e + 1) % 3];
      const std::array<int, 2> key{std::min(a, b), std::max(a, b)};
      auto it = edge_ids.find(key);
      int id;
      if (it == edge_ids.end()) {
        id = static_cast<int>(adj.edges.size());
        edge_ids.emplace(key, id);
        adj.edges.push_back(key);
        adj.edge_faces.push_back({static_cast<int>(f), -1});
      } else {
        id = it->second;
        require(adj.edge_faces[id][1] < 0, ErrorCode::bad_topology,
                "non-manifold edge: more than two incident faces");
        adj.edge_faces[id][1] = static_cast<int>(f);
      }
      adj.face_edges[f][e] = id;
    }
  }
  return adj;
}

bool MeshAdjacency::has_boundary() const {
  for (const auto& ef : edge_faces)
    if (ef[1] < 0) return true;
  return false;
}

int euler_characteristic(const TriMesh& mesh) {
  const MeshAdjacency adj = MeshAdjacency::build(mesh);
  return static_cast<int>(mesh.vertices.size()) - static_cast<int>(adj.edges.size()) +
         static_cast<int>(mesh.faces.size());
}

std::vector<std::vector<int>> boundary_loops(const TriMesh& mesh) {
  const MeshAdjacency adj = MeshAdjacency::build(mesh);
  // directed boundary edges in face winding
  std::map<int, std::set<int>> next; // u -> candidate v (set keeps it deterministic)
  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    for (int e = 0; e < 3; ++e) {
      if (adj.edge_faces[adj.face_edges[f][e]][1] >= 0) continue;
      const int a = mesh.faces[f][e];
      const int b = mesh.faces[f][(e + 1) % 3];
      next[a].insert(b);
    }
  }
  std::vector<std::vector<int>> loops;
  while (!next.empty()) {
    const int start = next.begin()->first;
    std::vector<int> loop;
    int u = start;
    for (;;) {
      loop.push_back(u);
      auto it = next.find(u);
      require(it != next.end() && !it->second.empty(), ErrorCode::bad_topology,
              "boundary walk hit a dead end");
      const int v = *it->second.begin();
      it->second.erase(it->second.begin());
      if (it->second.empty()) next.erase(it);
      u = v;
      if (u == start) break;
    }
    loops.push_back(std::move(loop));
  }
  return loops;
}

TriMesh fill_holes(const TriMesh& mesh, int max_loop_edges, int* open_loops_out) {
  const std::vector<std::vector<int>> loops = boundary_loops(mesh);
  TriMesh out = mesh;
  int open = 0;
  for (const std::vector<int>& loop : loops) {
    if (static_cast<int>(loop.size()) > max_loop_edges) {
      ++open;
      continue;
    }
    Vec3 centroid = Vec3::Zero();
    for (int v : loop) centroid += mesh.vertices[v];
    centroid /= static_cast<double>(loop.size());
    const int center = static_cast<int>(out.vertices.size());
    out.vertices.push_back(centroid);
    // boundary ran with the face winding, so fans traverse it reversed
    for (std::size_t i = 0; i < loop.size(); ++i) {
      const int u = loop[i];
      const int v = loop[(i + 1) % loop.size()];
      out.faces.push_back({v, u, center});
    }
  }
  if (open_loops_out) *open_loops_out = open;
  return out;
}

TriMesh remove_unreferenced_vertices(const TriMesh& mesh) {
  mesh.validate();
  std::vector<int> remap(mesh.vertices.size(), -1);
  TriMesh out;
  for (const auto& f : mesh.faces) {
    std::array<int, 3> face;
    for (int e = 0; e < 3; ++e) {
      if (remap[f[e]] < 0) {
        remap[f[e]] = static_cast<int>(out.vertices.size());
        out.vertices.push_back(mesh.vertices[f[e]]);
      }
      face[e] = remap[f[e]];
    }
    out.faces.push_back(face);
  }
  return out;
}

TriMesh loop_subdivide(const TriMesh& mesh, int iterations) {
  require(iterations >= 0, ErrorCode::invalid_argument, "iterations must be >= 0");
  TriMesh current = mesh;
  for (int iter = 0; iter < iterations; ++iter) {
    const MeshAdjacency adj = MeshAdjacency::build(current);
    const int nv = static_cast<int>(current.vertices.size());
    const int ne = static_cast<int>(adj.edges.size());

    std::vector<bool> boundary_edge(ne, false);
    std::vector<std::vector<int>> boundary_neighbors(nv);
    for (int e = 0; e < ne; ++e)
      if (adj.edge_faces[e][1] < 0) {
        boundary_edge[e] = true;
        boundary_neighbors[adj.edges[e][0]].push_back(adj.edges[e][1]);
        boundary_neighbors[adj.edges[e][1]].push_back(adj.edges[e][0]);
      }

    // vertex neighborhoods; edges are unique so no duplicates appear
    std::vector<std::vector<int>> neighbors(nv);
    for (int e = 0; e < ne; ++e) {
      neighbors[adj.edges[e][0]].push_back(adj.edges[e][1]);
      neighbors[adj.edges[e][1]].push_back(adj.edges[e][0]);
    }

    TriMesh next;
    next.vertices.resize(nv + ne);

    // even (original) vertices
    for (int v = 0; v < nv; ++v) {
      if (!boundary_neighbors[v].empty()) {
        // a manifold boundary vertex has exactly two boundary neighbors
        require(boundary_neighbors[v].size() == 2, ErrorCode::bad_topology,
                "non-manifold boundary vertex");
        next.vertices[v] = 0.75 * current.vertices[v] +
                           0.125 * (current.vertices[boundary_neighbors[v][0]] +
                                    current.vertices[boundary_neighbors[v][1]]);
      } else {
        const std::vector<int>& ring = neighbors[v];
        const int n = static_cast<int>(ring.size());
        if (n == 0) { // unreferenced vertex, carried through untouched
          next.vertices[v] = current.vertices[v];
          continue;
        }
        const double c = 0.375 + 0.25 * std::cos(2.0 * M_PI / n);
        const double beta = (0.625 - c * c) / n;
        Vec3 acc = (1.0 - n * beta) * current.vertices[v];
        for (int u : ring) acc += beta * current.vertices[u];
        next.vertices[v] = acc;
      }
    }

    // odd (edge) vertices
    for (int e = 0; e < ne; ++e) {
      const int a = adj.edges[e][0];
      const int b = adj.edges[e][1];
      if (boundary_edge[e]) {
        next.vertices[nv + e] = 0.5 * (current.vertices[a] + current.vertices[b]);
      } else {
        int c = -1, d = -1;
        for (int side = 0; side < 2; ++side) {
          const int f = adj.edge_faces[e][side];
          for (int corner = 0; corner < 3; ++corner) {
            const int v = current.faces[f][corner];
            if (v != a && v != b) (side == 0 ? c : d) = v;
          }
        }
        next.vertices[nv + e] = 0.375 * (current.vertices[a] + current.vertices[b]) +
                                0.125 * (current.vertices[c] + current.vertices[d]);
      }
    }

    next.faces.reserve(current.faces.size() * 4);
    for (std::size_t f = 0; f < current.faces.size(); ++f) {
      const auto& face = current.faces[f];
      // midpoint of the edge opposite corner i is on edge (i+1, i+2)... the
      // edge ids were stored per corner as edge (corner, corner+1)
      const int mab = nv + adj.face_edges[f][0];
      const int mbc = nv + adj.face_edges[f][1];
      const int mca = nv + adj.face_edges[f][2];
      next.faces.push_back({face[0], mab, mca});
      next.faces.push_back({face[1], mbc, mab});
      next.faces.push_back({face[2], mca, mbc});
      next.faces.push_back({mab, mbc, mca});
    }
    current = std::move(next);
  }
  return current;
}

}  // namespace ipens
