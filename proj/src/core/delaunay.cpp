#include "core/delaunay.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <unordered_map>

namespace ipens {

namespace {

using LVec3 = Eigen::Matrix<long double, 3, 1>;
using LVec2 = Eigen::Matrix<long double, 2, 1>;

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double hash_unit(uint64_t key) { // deterministic in [-0.5, 0.5)
  return static_cast<double>(splitmix64(key) >> 11) * 0x1.0p-53 - 0.5;
}

// det of rows (b-a, c-a, d-a); > 0 means d on the positive side of (a,b,c)
long double orient3d(const LVec3& a, const LVec3& b, const LVec3& c, const LVec3& d) {
  const LVec3 u = b - a, v = c - a, w = d - a;
  return u.x() * (v.y() * w.z() - v.z() * w.y()) - u.y() * (v.x() * w.z() - v.z() * w.x()) +
         u.z() * (v.x() * w.y() - v.y() * w.x());
}

// For a positively oriented tet (a,b,c,d): > 0 means e strictly inside the
// circumsphere.
long double insphere(const LVec3& a, const LVec3& b, const LVec3& c, const LVec3& d,
                     const LVec3& e) {
  const LVec3 pa = a - e, pb = b - e, pc = c - e, pd = d - e;
  const long double na = pa.squaredNorm(), nb = pb.squaredNorm(), nc = pc.squaredNorm(),
                    nd = pd.squaredNorm();
  auto det3 = [](const LVec3& u, const LVec3& v, const LVec3& w) {
    return u.x() * (v.y() * w.z() - v.z() * w.y()) - u.y() * (v.x() * w.z() - v.z() * w.x()) +
           u.z() * (v.x() * w.y() - v.y() * w.x());
  };
  // expansion of the 4x4 determinant along the squared-norm column
  return na * det3(pb, pc, pd) - nb * det3(pa, pc, pd) + nc * det3(pa, pb, pd) -
         nd * det3(pa, pb, pc);
}

long double orient2d(const LVec2& a, const LVec2& b, const LVec2& c) {
  return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

// For a counter-clockwise triangle (a,b,c): > 0 means d inside the circumcircle.
long double incircle(const LVec2& a, const LVec2& b, const LVec2& c, const LVec2& d) {
  const LVec2 pa = a - d, pb = b - d, pc = c - d;
  const long double na = pa.squaredNorm(), nb = pb.squaredNorm(), nc = pc.squaredNorm();
  return na * (pb.x() * pc.y() - pb.y() * pc.x()) - nb * (pa.x() * pc.y() - pa.y() * pc.x()) +
         nc * (pa.x() * pb.y() - pa.y() * pb.x());
}

struct Tet {
  std::array<int, 4> v;
  std::array<int, 4> neighbor; // neighbor[i] faces vertex v[i]; -1 = outside
  bool alive = true;
};

struct Tri {
  std::array<int, 3> v;
  std::array<int, 3> neighbor;
  bool alive = true;
};

double circumradius3(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  Eigen::Matrix3d m;
  m.row(0) = (b - a).transpose();
  m.row(1) = (c - a).transpose();
  m.row(2) = (d - a).transpose();
  Eigen::Vector3d rhs(0.5 * (b - a).squaredNorm(), 0.5 * (c - a).squaredNorm(),
                      0.5 * (d - a).squaredNorm());
  const Eigen::Vector3d center = m.fullPivLu().solve(rhs);
  return center.norm(); // distance from a after translation
}

double circumradius2(const Vec2& a, const Vec2& b, const Vec2& c) {
  Eigen::Matrix2d m;
  m.row(0) = (b - a).transpose();
  m.row(1) = (c - a).transpose();
  Eigen::Vector2d rhs(0.5 * (b - a).squaredNorm(), 0.5 * (c - a).squaredNorm());
  const Eigen::Vector2d center = m.fullPivLu().solve(rhs);
  return center.norm();
}

}  // namespace

std::vector<DelaunayTet> delaunay3d(const std::vector<Vec3>& points) {
  const int n = static_cast<int>(points.size());
  require(n >= 4, ErrorCode::invalid_argument, "3d delaunay needs at least 4 points");

  // normalize into [-0.5, 0.5]^3 and add index-keyed jitter
  const Aabb box = bounding_box(points);
  const double scale = std::max(box.extent().maxCoeff(), 1e-300);
  const Vec3 center = 0.5 * (box.min + box.max);
  std::vector<LVec3> pts(n + 4);
  for (int i = 0; i < n; ++i) {
    const Vec3 q = (points[i] - center) / scale;
    for (int a = 0; a < 3; ++a)
      pts[i][a] = static_cast<long double>(q[a]) +
                  1e-9L * static_cast<long double>(hash_unit(uint64_t(i) * 3 + a));
  }
  // super-tetrahedron far outside the normalized cloud
  const long double big = 1e4L;
  pts[n + 0] = LVec3(0, 0, big);
  pts[n + 1] = LVec3(-big, -big, -big);
  pts[n + 2] = LVec3(big, -big, -big);
  pts[n + 3] = LVec3(0, big, -big);

  std::vector<Tet> tets;
  {
    Tet root;
    root.v = {n + 0, n + 1, n + 2, n + 3};
    if (orient3d(pts[root.v[0]], pts[root.v[1]], pts[root.v[2]], pts[root.v[3]]) < 0)
      std::swap(root.v[2], root.v[3]);
    root.neighbor = {-1, -1, -1, -1};
    tets.push_back(root);
  }

  auto contains = [&](int ti, const LVec3& p) {
    const Tet& t = tets[ti];
    // p is inside when it lies on the positive side of every face
    for (int f = 0; f < 4; ++f) {
      const int a = t.v[(f + 1) % 4], b = t.v[(f + 2) % 4], c = t.v[(f + 3) % 4];
      long double o = orient3d(pts[a], pts[b], pts[c], pts[t.v[f]]);
      long double s = orient3d(pts[a], pts[b], pts[c], p);
      if (o > 0 ? s < 0 : s > 0) return false;
    }
    return true;
  };

  int hint = 0;
  for (int pi = 0; pi < n; ++pi) {
    const LVec3& p = pts[pi];
    // walk toward the containing tet
    int current = hint;
    if (!tets[current].alive) current = 0;
    int steps = 0;
    const int max_steps = static_cast<int>(tets.size()) * 4 + 64;
    while (!tets[current].alive || !contains(current, p)) {
      if (!tets[current].alive) {
        ++current;
        current %= static_cast<int>(tets.size());
        continue;
      }
      const Tet& t = tets[current];
      int next = -1;
      for (int f = 0; f < 4; ++f) {
        const int a = t.v[(f + 1) % 4], b = t.v[(f + 2) % 4], c = t.v[(f + 3) % 4];
        const long double o = orient3d(pts[a], pts[b], pts[c], pts[t.v[f]]);
        const long double s = orient3d(pts[a], pts[b], pts[c], p);
        if ((o > 0 && s < 0) || (o < 0 && s > 0)) {
          next = t.neighbor[f];
          break;
        }
      }
      require(next >= 0, ErrorCode::numeric, "delaunay walk left the domain");
      current = next;
      if (++steps > max_steps) {
        // robustness fallback: exhaustive scan
        current = -1;
        for (int ti = 0; ti < static_cast<int>(tets.size()); ++ti)
          if (tets[ti].alive && contains(ti, p)) {
            current = ti;
            break;
          }
        require(current >= 0, ErrorCode::numeric, "delaunay point location failed");
        break;
      }
    }

    // conflict region: BFS over circumsphere violations
    std::vector<int> conflict{current};
    tets[current].alive = false;
    std::vector<int> queue{current};
    while (!queue.empty()) {
      const int ti = queue.back();
      queue.pop_back();
      for (int f = 0; f < 4; ++f) {
        const int nb = tets[ti].neighbor[f];
        if (nb < 0 || !tets[nb].alive) continue;
        const Tet& t = tets[nb];
        if (insphere(pts[t.v[0]], pts[t.v[1]], pts[t.v[2]], pts[t.v[3]], p) > 0) {
          tets[nb].alive = false;
          conflict.push_back(nb);
          queue.push_back(nb);
        }
      }
    }

    // cavity boundary faces -> new tets around p
    struct BoundaryFace {
      std::array<int, 3> v;
      int outside;
    };
    std::vector<BoundaryFace> boundary;
    for (int ti : conflict) {
      const Tet& t = tets[ti];
      for (int f = 0; f < 4; ++f) {
        const int nb = t.neighbor[f];
        if (nb >= 0 && !tets[nb].alive) continue; // internal cavity face
        BoundaryFace bf;
        bf.v = {t.v[(f + 1) % 4], t.v[(f + 2) % 4], t.v[(f + 3) % 4]};
        bf.outside = nb;
        boundary.push_back(bf);
      }
    }

    std::map<std::pair<int, int>, std::pair<int, int>> open_edges; // directed edge -> (tet, face slot)
    const int first_new = static_cast<int>(tets.size());
    for (const BoundaryFace& bf : boundary) {
      Tet t;
      t.v = {bf.v[0], bf.v[1], bf.v[2], pi};
      if (orient3d(pts[t.v[0]], pts[t.v[1]], pts[t.v[2]], pts[t.v[3]]) < 0)
        std::swap(t.v[0], t.v[1]);
      t.neighbor = {-1, -1, -1, -1};
      t.neighbor[3] = bf.outside; // face opposite p is the old boundary face
      const int ti = static_cast<int>(tets.size());
      if (bf.outside >= 0) {
        // fix the back-pointer of the surviving neighbor
        Tet& o = tets[bf.outside];
        for (int f = 0; f < 4; ++f) {
          const int a = o.v[(f + 1) % 4], b = o.v[(f + 2) % 4], c = o.v[(f + 3) % 4];
          std::array<int, 3> face{a, b, c};
          std::array<int, 3> mine{t.v[0], t.v[1], t.v[2]};
          std::sort(face.begin(), face.end());
          std::sort(mine.begin(), mine.end());
          if (face == mine) {
            o.neighbor[f] = ti;
            break;
          }
        }
      }
      // glue side faces (those containing p) to sibling new tets
      for (int f = 0; f < 3; ++f) {
        const int a = t.v[(f + 1) % 3], b = t.v[(f + 2) % 3];
        // face opposite t.v[f] within the new tet: (a, b, p)
        const auto key = std::make_pair(std::min(a, b), std::max(a, b));
        auto it = open_edges.find(key);
        if (it == open_edges.end()) {
          open_edges[key] = {ti, f};
        } else {
          const auto [other_ti, other_f] = it->second;
          t.neighbor[f] = other_ti;
          tets[other_ti].neighbor[other_f] = ti;
          open_edges.erase(it);
        }
      }
      tets.push_back(t);
    }
    require(open_edges.empty(), ErrorCode::numeric, "delaunay cavity did not close");
    hint = first_new;
  }

  std::vector<DelaunayTet> result;
  for (const Tet& t : tets) {
    if (!t.alive) continue;
    if (t.v[0] >= n || t.v[1] >= n || t.v[2] >= n || t.v[3] >= n) continue;
    DelaunayTet out;
    out.v = t.v;
    out.circumradius =
        circumradius3(points[t.v[0]], points[t.v[1]], points[t.v[2]], points[t.v[3]]);
    result.push_back(out);
  }
  return result;
}

std::vector<DelaunayTri> delaunay2d(const std::vector<Vec2>& points) {
  const int n = static_cast<int>(points.size());
  require(n >= 3, ErrorCode::invalid_argument, "2d delaunay needs at least 3 points");

  Vec2 lo = points.front(), hi = points.front();
  for (const Vec2& p : points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const double scale = std::max((hi - lo).maxCoeff(), 1e-300);
  const Vec2 center = 0.5 * (lo + hi);
  std::vector<LVec2> pts(n + 3);
  for (int i = 0; i < n; ++i) {
    const Vec2 q = (points[i] - center) / scale;
    for (int a = 0; a < 2; ++a)
      pts[i][a] = static_cast<long double>(q[a]) +
                  1e-9L * static_cast<long double>(hash_unit(uint64_t(i) * 2 + a));
  }
  const long double big = 1e4L;
  pts[n + 0] = LVec2(0, big);
  pts[n + 1] = LVec2(-big, -big);
  pts[n + 2] = LVec2(big, -big);

  std::vector<Tri> tris;
  {
    Tri root;
    root.v = {n + 0, n + 1, n + 2};
    if (orient2d(pts[root.v[0]], pts[root.v[1]], pts[root.v[2]]) < 0)
      std::swap(root.v[1], root.v[2]);
    root.neighbor = {-1, -1, -1};
    tris.push_back(root);
  }

  auto contains = [&](int ti, const LVec2& p) {
    const Tri& t = tris[ti];
    for (int e = 0; e < 3; ++e)
      if (orient2d(pts[t.v[(e + 1) % 3]], pts[t.v[(e + 2) % 3]], p) < 0) return false;
    return true;
  };

  int hint = 0;
  for (int pi = 0; pi < n; ++pi) {
    const LVec2& p = pts[pi];
    int current = hint;
    if (!tris[current].alive) current = 0;
    int steps = 0;
    const int max_steps = static_cast<int>(tris.size()) * 3 + 64;
    while (!tris[current].alive || !contains(current, p)) {
      if (!tris[current].alive) {
        ++current;
        current %= static_cast<int>(tris.size());
        continue;
      }
      const Tri& t = tris[current];
      int next = -1;
      for (int e = 0; e < 3; ++e) {
        if (orient2d(pts[t.v[(e + 1) % 3]], pts[t.v[(e + 2) % 3]], p) < 0) {
          next = t.neighbor[e];
          break;
        }
      }
      require(next >= 0, ErrorCode::numeric, "delaunay walk left the domain");
      current = next;
      if (++steps > max_steps) {
        current = -1;
        for (int ti = 0; ti < static_cast<int>(tris.size()); ++ti)
          if (tris[ti].alive && contains(ti, p)) {
            current = ti;
            break;
          }
        require(current >= 0, ErrorCode::numeric, "delaunay point location failed");
        break;
      }
    }

    std::vector<int> conflict{current};
    tris[current].alive = false;
    std::vector<int> queue{current};
    while (!queue.empty()) {
      const int ti = queue.back();
      queue.pop_back();
      for (int e = 0; e < 3; ++e) {
        const int nb = tris[ti].neighbor[e];
        if (nb < 0 || !tris[nb].alive) continue;
        const Tri& t = tris[nb];
        if (incircle(pts[t.v[0]], pts[t.v[1]], pts[t.v[2]], p) > 0) {
          tris[nb].alive = false;
          conflict.push_back(nb);
          queue.push_back(nb);
        }
      }
    }

    struct BoundaryEdge {
      std::array<int, 2> v;
      int outside;
    };
    std::vector<BoundaryEdge> boundary;
    for (int ti : conflict) {
      const Tri& t = tris[ti];
      for (int e = 0; e < 3; ++e) {
        const int nb = t.neighbor[e];
        if (nb >= 0 && !tris[nb].alive) continue;
        boundary.push_back({{t.v[(e + 1) % 3], t.v[(e + 2) % 3]}, nb});
      }
    }

    std::unordered_map<int, std::pair<int, int>> open_vertices; // vertex -> (tri, slot)
    const int first_new = static_cast<int>(tris.size());
    for (const BoundaryEdge& be : boundary) {
      Tri t;
      t.v = {be.v[0], be.v[1], pi};
      if (orient2d(pts[t.v[0]], pts[t.v[1]], pts[t.v[2]]) < 0) std::swap(t.v[0], t.v[1]);
      t.neighbor = {-1, -1, -1};
      t.neighbor[2] = be.outside;
      const int ti = static_cast<int>(tris.size());
      if (be.outside >= 0) {
        Tri& o = tris[be.outside];
        for (int e = 0; e < 3; ++e) {
          std::array<int, 2> edge{o.v[(e + 1) % 3], o.v[(e + 2) % 3]};
          std::array<int, 2> mine{t.v[0], t.v[1]};
          std::sort(edge.begin(), edge.end());
          std::sort(mine.begin(), mine.end());
          if (edge == mine) {
            o.neighbor[e] = ti;
            break;
          }
        }
      }
      for (int e = 0; e < 2; ++e) {
        // side edges (t.v[e], pi); neighbor slot is the one opposite t.v[1-e]
        const int key = t.v[e];
        const int slot = 1 - e;
        auto it = open_vertices.find(key);
        if (it == open_vertices.end()) {
          open_vertices[key] = {ti, slot};
        } else {
          const auto [other_ti, other_slot] = it->second;
          t.neighbor[slot] = other_ti;
          tris[other_ti].neighbor[other_slot] = ti;
          open_vertices.erase(it);
        }
      }
      tris.push_back(t);
    }
    require(open_vertices.empty(), ErrorCode::numeric, "delaunay cavity did not close");
    hint = first_new;
  }

  std::vector<DelaunayTri> result;
  for (const Tri& t : tris) {
    if (!t.alive) continue;
    if (t.v[0] >= n || t.v[1] >= n || t.v[2] >= n) continue;
    DelaunayTri out;
    out.v = t.v;
    if (orient2d(pts[t.v[0]], pts[t.v[1]], pts[t.v[2]]) < 0) std::swap(out.v[1], out.v[2]);
    out.circumradius = circumradius2(points[out.v[0]], points[out.v[1]], points[out.v[2]]);
    result.push_back(out);
  }
  return result;
}

}  // namespace ipens
