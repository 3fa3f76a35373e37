#include "core/alpha_shape.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <map>

#include "core/delaunay.hpp"

namespace ipens {

namespace {

TriMesh planar_alpha_shape(const std::vector<Vec3>& points, double alpha, const Vec3& centroid,
                           const Mat3& axes) {
  // axes columns: in-plane e1, e2, then the normal
  std::vector<Vec2> uv(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Vec3 d = points[i] - centroid;
    uv[i] = Vec2(d.dot(axes.col(0)), d.dot(axes.col(1)));
  }
  const std::vector<DelaunayTri> tris = delaunay2d(uv);
  TriMesh mesh;
  mesh.vertices = points;
  for (const DelaunayTri& t : tris) {
    if (t.circumradius > alpha) continue;
    mesh.faces.push_back({t.v[0], t.v[1], t.v[2]});
  }
  return mesh;
}

}  // namespace

TriMesh alpha_shape_mesh(const LabeledPointCloud& cloud, double alpha) {
  cloud.validate();
  require(cloud.points.size() >= 3, ErrorCode::invalid_argument,
          "alpha shape needs at least 3 points");
  require(alpha > 0, ErrorCode::invalid_argument, "alpha must be positive");
  const std::vector<Vec3>& points = cloud.points;

  // PCA thickness decides between the volumetric and the planar path
  Vec3 centroid = Vec3::Zero();
  for (const Vec3& p : points) centroid += p;
  centroid /= static_cast<double>(points.size());
  Mat3 cov = Mat3::Zero();
  for (const Vec3& p : points) {
    const Vec3 d = p - centroid;
    cov += d * d.transpose();
  }
  cov /= static_cast<double>(points.size());
  Eigen::SelfAdjointEigenSolver<Mat3> eig(cov); // eigenvalues ascending
  const double diag = bounding_box(points).diagonal();
  const double thickness = std::sqrt(std::max(eig.eigenvalues()[0], 0.0));
  if (points.size() < 4 || thickness <= 1e-7 * std::max(diag, 1e-300)) {
    Mat3 axes;
    axes.col(0) = eig.eigenvectors().col(2);
    axes.col(1) = eig.eigenvectors().col(1);
    axes.col(2) = eig.eigenvectors().col(0);
    return planar_alpha_shape(points, alpha, centroid, axes);
  }

  const std::vector<DelaunayTet> tets = delaunay3d(points);

  // count how many retained tets each face bounds, remembering one owner
  struct FaceInfo {
    int count = 0;
    std::array<int, 3> v{};
    int opposite = 0; // vertex of the owning tet across the face
  };
  std::map<std::array<int, 3>, FaceInfo> faces;
  for (const DelaunayTet& tet : tets) {
    if (tet.circumradius > alpha) continue;
    for (int f = 0; f < 4; ++f) {
      std::array<int, 3> tri{tet.v[(f + 1) % 4], tet.v[(f + 2) % 4], tet.v[(f + 3) % 4]};
      std::array<int, 3> key = tri;
      std::sort(key.begin(), key.end());
      FaceInfo& info = faces[key];
      ++info.count;
      info.v = tri;
      info.opposite = tet.v[f];
    }
  }

  TriMesh mesh;
  mesh.vertices = points;
  for (const auto& [key, info] : faces) {
    (void)key;
    if (info.count != 1) continue;
    std::array<int, 3> tri = info.v;
    const Vec3 normal =
        (points[tri[1]] - points[tri[0]]).cross(points[tri[2]] - points[tri[0]]);
    if (normal.dot(points[info.opposite] - points[tri[0]]) > 0) std::swap(tri[1], tri[2]);
    mesh.faces.push_back(tri);
  }
  return mesh;
}

}  // namespace ipens
