#include "core/arap.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>

#include "core/mesh_ops.hpp"

namespace ipens {

namespace {

using SparseMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

// Isometric 2D coordinates for one triangle: p0 at the origin, p1 on +x.
std::array<Vec2, 3> flatten_triangle(const Vec3& p0, const Vec3& p1, const Vec3& p2) {
  const Vec3 e1 = p1 - p0;
  const Vec3 e2 = p2 - p0;
  const double len = e1.norm();
  require(len > 0, ErrorCode::invalid_argument, "degenerate triangle edge");
  const double x2 = e1.dot(e2) / len;
  const double cross = e1.cross(e2).norm();
  return {Vec2(0, 0), Vec2(len, 0), Vec2(x2, cross / len)};
}

void check_connected(const TriMesh& mesh) {
  std::vector<std::vector<int>> adjacency(mesh.vertices.size());
  for (const auto& f : mesh.faces)
    for (int e = 0; e < 3; ++e) {
      adjacency[f[e]].push_back(f[(e + 1) % 3]);
      adjacency[f[(e + 1) % 3]].push_back(f[e]);
    }
  std::vector<bool> seen(mesh.vertices.size(), false);
  std::vector<int> stack{0};
  seen[0] = true;
  std::size_t visited = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int u : adjacency[v])
      if (!seen[u]) {
        seen[u] = true;
        ++visited;
        stack.push_back(u);
      }
  }
  require(visited == mesh.vertices.size(), ErrorCode::bad_topology,
          "parameterization needs a connected mesh");
}

}  // namespace

Parameterization2D arap_parameterize(const TriMesh& mesh, int max_iterations, double tol) {
  mesh.validate();
  require(!mesh.faces.empty(), ErrorCode::invalid_argument, "empty mesh");
  require(max_iterations >= 0 && tol >= 0, ErrorCode::invalid_argument,
          "bad iteration limits");
  check_connected(mesh);
  const std::vector<std::vector<int>> loops = boundary_loops(mesh);
  require(loops.size() == 1, ErrorCode::bad_topology,
          "parameterization needs disk topology (exactly one boundary loop)");
  const int nv = static_cast<int>(mesh.vertices.size());
  const int nf = static_cast<int>(mesh.faces.size());

  // per-triangle reference shapes and cotangent weights
  std::vector<std::array<Vec2, 3>> ref(nf);
  std::vector<std::array<double, 3>> cot(nf); // cot[e] belongs to edge (e, e+1)
  const double area_scale = bounding_box(mesh.vertices).diagonal();
  for (int f = 0; f < nf; ++f) {
    const auto& face = mesh.faces[f];
    const Vec3& p0 = mesh.vertices[face[0]];
    const Vec3& p1 = mesh.vertices[face[1]];
    const Vec3& p2 = mesh.vertices[face[2]];
    const double doubled_area = (p1 - p0).cross(p2 - p0).norm();
    require(doubled_area > 1e-14 * area_scale * area_scale, ErrorCode::invalid_argument,
            "degenerate (zero-area) triangle");
    ref[f] = flatten_triangle(p0, p1, p2);
    for (int e = 0; e < 3; ++e) {
      // angle at the vertex opposite edge (e, e+1), i.e. at corner e+2
      const Vec3& a = mesh.vertices[face[(e + 2) % 3]];
      const Vec3& b = mesh.vertices[face[e]];
      const Vec3& c = mesh.vertices[face[(e + 1) % 3]];
      const Vec3 u = b - a, v = c - a;
      cot[f][e] = u.dot(v) / u.cross(v).norm();
    }
  }

  // Tutte start: boundary on the unit circle by arc length, interior harmonic
  const std::vector<int>& loop = loops.front();
  std::vector<double> cumulative(loop.size() + 1, 0.0);
  for (std::size_t i = 0; i < loop.size(); ++i) {
    const Vec3& a = mesh.vertices[loop[i]];
    const Vec3& b = mesh.vertices[loop[(i + 1) % loop.size()]];
    cumulative[i + 1] = cumulative[i] + (b - a).norm();
  }
  const double total_len = cumulative.back();
  require(total_len > 0, ErrorCode::invalid_argument, "degenerate boundary loop");

  std::vector<bool> fixed(nv, false);
  std::vector<Vec2> uv(nv, Vec2::Zero());
  for (std::size_t i = 0; i < loop.size(); ++i) {
    const double angle = 2.0 * M_PI * cumulative[i] / total_len;
    uv[loop[i]] = Vec2(std::cos(angle), std::sin(angle));
    fixed[loop[i]] = true;
  }

  std::vector<int> free_index(nv, -1);
  int n_free = 0;
  for (int v = 0; v < nv; ++v)
    if (!fixed[v]) free_index[v] = n_free++;

  // assemble the cotangent Laplacian once; reused by Tutte and every global step
  std::vector<double> diag(nv, 0.0);
  std::vector<Triplet> full_triplets;
  std::vector<std::map<int, double>> off(nv); // symmetric off-diagonal weights
  for (int f = 0; f < nf; ++f)
    for (int e = 0; e < 3; ++e) {
      const int i = mesh.faces[f][e];
      const int j = mesh.faces[f][(e + 1) % 3];
      const double w = cot[f][e];
      diag[i] += w;
      diag[j] += w;
      off[std::min(i, j)][std::max(i, j)] += w;
    }

  if (n_free > 0) {
    SparseMat tutte(n_free, n_free);
    std::vector<Triplet> triplets;
    Eigen::MatrixX2d rhs = Eigen::MatrixX2d::Zero(n_free, 2);
    for (int v = 0; v < nv; ++v) {
      if (fixed[v]) continue;
      triplets.emplace_back(free_index[v], free_index[v], diag[v]);
    }
    for (int i = 0; i < nv; ++i)
      for (const auto& [j, w] : off[i]) {
        if (!fixed[i] && !fixed[j]) {
          triplets.emplace_back(free_index[i], free_index[j], -w);
          triplets.emplace_back(free_index[j], free_index[i], -w);
        } else if (!fixed[i] && fixed[j]) {
          rhs.row(free_index[i]) += w * uv[j].transpose();
        } else if (fixed[i] && !fixed[j]) {
          rhs.row(free_index[j]) += w * uv[i].transpose();
        }
      }
    tutte.setFromTriplets(triplets.begin(), triplets.end());
    Eigen::SparseLU<SparseMat> solver(tutte);
    require(solver.info() == Eigen::Success, ErrorCode::numeric, "tutte solve failed");
    const Eigen::MatrixX2d sol = solver.solve(rhs);
    for (int v = 0; v < nv; ++v)
      if (!fixed[v]) uv[v] = sol.row(free_index[v]).transpose();
  }

  // ARAP system: pin vertex 0 to remove the translation null space
  const int pin = 0;
  std::vector<int> sys_index(nv, -1);
  int n_sys = 0;
  for (int v = 0; v < nv; ++v)
    if (v != pin) sys_index[v] = n_sys++;
  SparseMat laplacian(n_sys, n_sys);
  {
    std::vector<Triplet> triplets;
    for (int v = 0; v < nv; ++v)
      if (v != pin) triplets.emplace_back(sys_index[v], sys_index[v], diag[v]);
    for (int i = 0; i < nv; ++i)
      for (const auto& [j, w] : off[i]) {
        if (i != pin && j != pin) {
          triplets.emplace_back(sys_index[i], sys_index[j], -w);
          triplets.emplace_back(sys_index[j], sys_index[i], -w);
        }
      }
    laplacian.setFromTriplets(triplets.begin(), triplets.end());
  }
  Eigen::SimplicialLDLT<SparseMat> solver(laplacian);
  require(solver.info() == Eigen::Success, ErrorCode::numeric, "arap factorization failed");

  auto fit_rotations = [&](const std::vector<Vec2>& coords, std::vector<Eigen::Matrix2d>& rot) {
    for (int f = 0; f < nf; ++f) {
      const auto& face = mesh.faces[f];
      Eigen::Matrix2d s = Eigen::Matrix2d::Zero();
      for (int e = 0; e < 3; ++e) {
        const int i = face[e];
        const int j = face[(e + 1) % 3];
        const Vec2 du = coords[i] - coords[j];
        const Vec2 dx = ref[f][e] - ref[f][(e + 1) % 3];
        s += cot[f][e] * du * dx.transpose();
      }
      const Eigen::JacobiSVD<Eigen::Matrix2d> svd(s, Eigen::ComputeFullU | Eigen::ComputeFullV);
      Eigen::Matrix2d r = svd.matrixU() * svd.matrixV().transpose();
      if (r.determinant() < 0) {
        Eigen::Matrix2d u = svd.matrixU();
        u.col(1) *= -1;
        r = u * svd.matrixV().transpose();
      }
      rot[f] = r;
    }
  };

  auto energy_of = [&](const std::vector<Vec2>& coords, const std::vector<Eigen::Matrix2d>& rot) {
    double energy = 0.0;
    for (int f = 0; f < nf; ++f) {
      const auto& face = mesh.faces[f];
      for (int e = 0; e < 3; ++e) {
        const int i = face[e];
        const int j = face[(e + 1) % 3];
        const Vec2 du = coords[i] - coords[j];
        const Vec2 dx = ref[f][e] - ref[f][(e + 1) % 3];
        energy += cot[f][e] * (du - rot[f] * dx).squaredNorm();
      }
    }
    return energy;
  };

  Parameterization2D result;
  std::vector<Eigen::Matrix2d> rotations(nf);
  fit_rotations(uv, rotations);
  double energy = energy_of(uv, rotations);
  result.energies.push_back(energy);

  for (int iter = 0; iter < max_iterations; ++iter) {
    // global step: solve the cotangent system against rotated reference edges
    Eigen::MatrixX2d rhs = Eigen::MatrixX2d::Zero(n_sys, 2);
    Vec2 pin_rhs = Vec2::Zero(); // accumulated, then moved to the right side
    for (int f = 0; f < nf; ++f) {
      const auto& face = mesh.faces[f];
      for (int e = 0; e < 3; ++e) {
        const int i = face[e];
        const int j = face[(e + 1) % 3];
        const Vec2 target = cot[f][e] * (rotations[f] * (ref[f][e] - ref[f][(e + 1) % 3]));
        if (i != pin) rhs.row(sys_index[i]) += target.transpose();
        else pin_rhs += target;
        if (j != pin) rhs.row(sys_index[j]) -= target.transpose();
        else pin_rhs -= target;
      }
    }
    // keep the pinned vertex where it is; shift its coupling to the rhs
    const Vec2 pin_uv = uv[pin];
    for (const auto& [j, w] : off[pin])
      if (j != pin) rhs.row(sys_index[j]) += w * pin_uv.transpose();
    // off[] keys are min-indexed, so pin==0 owns all its couplings

    const Eigen::MatrixX2d sol = solver.solve(rhs);
    std::vector<Vec2> candidate = uv;
    for (int v = 0; v < nv; ++v)
      if (v != pin) candidate[v] = sol.row(sys_index[v]).transpose();

    // local step on the candidate, then accept
    fit_rotations(candidate, rotations);
    const double new_energy = energy_of(candidate, rotations);
    uv = std::move(candidate);
    result.iterations_used = iter + 1;
    const double decrease = energy - new_energy;
    energy = new_energy;
    result.energies.push_back(energy);
    if (decrease >= 0 && decrease < tol) break;
  }

  result.uv = std::move(uv);
  result.arap_energy = energy;
  return result;
}

}  // namespace ipens
