#include "core/traits.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "core/alpha_shape.hpp"
#include "core/arap.hpp"
#include "core/kdtree.hpp"
#include "core/mesh_ops.hpp"

namespace ipens {

double instance_volume(const LabeledPointCloud& cloud, double voxel_size) {
  require(!cloud.points.empty(), ErrorCode::invalid_argument, "volume of empty cloud");
  const LabeledPointCloud down = voxel_downsample(cloud, voxel_size);
  return static_cast<double>(down.points.size()) * voxel_size * voxel_size * voxel_size;
}

double surface_area(const TriMesh& mesh) {
  mesh.validate();
  double area = 0.0;
  for (const auto& f : mesh.faces) {
    const Vec3 a = mesh.vertices[f[0]] - mesh.vertices[f[1]];
    const Vec3 b = mesh.vertices[f[0]] - mesh.vertices[f[2]];
    area += 0.5 * a.cross(b).norm();
  }
  return area;
}

namespace {

double mean_nearest_neighbor_spacing(const NnIndex& index) {
  const auto& points = index.points();
  double sum = 0.0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const std::vector<int> nn = index.knn(points[i], 2); // self plus nearest other
    for (int j : nn) {
      if (static_cast<std::size_t>(j) == i) continue;
      sum += (points[j] - points[i]).norm();
      ++used;
      break;
    }
  }
  require(used > 0, ErrorCode::invalid_argument, "cloud has no distinct points");
  return sum / static_cast<double>(used);
}

}  // namespace

std::pair<double, MidribTrace> leaf_length(const LabeledPointCloud& cloud,
                                           const TraitConfig& cfg) {
  cloud.validate();
  const std::vector<Vec3>& points = cloud.points;
  require(points.size() >= static_cast<std::size_t>(cfg.k) + 1, ErrorCode::invalid_argument,
          "midrib trace needs more than k points");

  // principal axis of the centered cloud
  Vec3 centroid = Vec3::Zero();
  for (const Vec3& p : points) centroid += p;
  centroid /= static_cast<double>(points.size());
  Mat3 cov = Mat3::Zero();
  for (const Vec3& p : points) {
    const Vec3 d = p - centroid;
    cov += d * d.transpose();
  }
  cov /= static_cast<double>(points.size());
  Eigen::SelfAdjointEigenSolver<Mat3> eig(cov);
  require(eig.eigenvalues()[2] > 0, ErrorCode::invalid_argument,
          "zero-variance cloud has no principal axis");
  Vec3 axis = eig.eigenvectors().col(2);
  // deterministic sign: align with the coordinate axis of largest extent
  const Aabb box = bounding_box(points);
  int widest = 0;
  box.extent().maxCoeff(&widest);
  if (axis[widest] < 0) axis = -axis;

  std::size_t start = 0, finish = 0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i].dot(axis) < points[start].dot(axis)) start = i;
    if (points[i].dot(axis) > points[finish].dot(axis)) finish = i;
  }

  NnIndex index(points);
  double epsilon = cfg.epsilon;
  if (epsilon <= 0) epsilon = 2.0 * mean_nearest_neighbor_spacing(index);

  std::vector<bool> visited(points.size(), false);
  std::vector<int> path{static_cast<int>(start)};
  visited[start] = true;
  int current = static_cast<int>(start);

  // k nearest unvisited points, in distance order, via expanding knn queries
  auto unvisited_neighbors = [&](int from) {
    std::vector<int> result;
    int query = cfg.k + 1;
    const int n_points = static_cast<int>(points.size());
    for (;;) {
      result.clear();
      for (int j : index.knn(points[from], std::min(query, n_points))) {
        if (visited[j]) continue;
        result.push_back(j);
        if (static_cast<int>(result.size()) == cfg.k) return result;
      }
      if (query >= n_points) return result;
      query = std::min(query * 2, n_points);
    }
  };

  while ((points[current] - points[finish]).norm() > epsilon &&
         static_cast<int>(path.size()) < cfg.m_max) {
    const std::vector<int> nn = unvisited_neighbors(current);
    int chosen = -1;
    double min_angle = std::numeric_limits<double>::infinity();
    int min_angle_candidate = -1;
    for (int j : nn) {
      const Vec3 step = points[j] - points[current];
      const double norm = step.norm();
      if (norm == 0) continue;
      const double angle = std::acos(std::clamp(step.dot(axis) / norm, -1.0, 1.0));
      if (angle < min_angle) {
        min_angle = angle;
        min_angle_candidate = j;
      }
      if (angle < cfg.theta_max) {
        chosen = j;
        break;
      }
    }
    if (chosen < 0) chosen = min_angle_candidate; // fall back to the least deviation
    if (chosen < 0) break;                        // every remaining point coincides
    visited[chosen] = true;
    path.push_back(chosen);
    current = chosen;
  }

  // keep every 2nd base point, endpoints pinned
  std::vector<int> kept;
  for (std::size_t i = 0; i < path.size(); i += 2) kept.push_back(path[i]);
  if (path.size() > 1 && kept.back() != path.back()) kept.push_back(path.back());

  MidribTrace trace;
  trace.principal_axis = axis;
  trace.endpoint_start = points[start];
  trace.endpoint_end = points[finish];
  for (int i : kept) trace.base_points.push_back(points[i]);

  double length = 0.0;
  for (std::size_t i = 1; i < trace.base_points.size(); ++i)
    length += (trace.base_points[i] - trace.base_points[i - 1]).norm();
  return {length, trace};
}

double leaf_width(const TriMesh& mesh, const TraitConfig& cfg) {
  const Parameterization2D param = arap_parameterize(mesh, cfg.arap_max_iterations, cfg.arap_tol);
  const std::vector<Vec2>& uv = param.uv;

  Vec2 mean = Vec2::Zero();
  for (const Vec2& u : uv) mean += u;
  mean /= static_cast<double>(uv.size());
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  for (const Vec2& u : uv) {
    const Vec2 d = u - mean;
    cov += d * d.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(cov);
  if (eig.eigenvalues()[0] <= 0) return 0.0; // collinear parameterization
  const Vec2 axis = eig.eigenvectors().col(1);
  const Vec2 normal(-axis.y(), axis.x());

  double s_min = std::numeric_limits<double>::infinity();
  double s_max = -std::numeric_limits<double>::infinity();
  for (const Vec2& u : uv) {
    const double s = u.dot(axis);
    s_min = std::min(s_min, s);
    s_max = std::max(s_max, s);
  }
  if (s_max <= s_min) return 0.0;

  const int n = cfg.n_strips;
  const double half_band = (s_max - s_min) / (2.0 * n);
  double width = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double s_k = s_min + (s_max - s_min) * static_cast<double>(k) / n;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    bool any = false;
    for (const Vec2& u : uv) {
      if (std::abs(u.dot(axis) - s_k) > half_band) continue;
      const double t = u.dot(normal);
      lo = std::min(lo, t);
      hi = std::max(hi, t);
      any = true;
    }
    if (any) width = std::max(width, hi - lo);
  }
  return width;
}

std::vector<TraitReport> extract_traits(const LabeledPointCloud& cloud,
                                        const MeshingConfig& mesh_cfg,
                                        const TraitConfig& trait_cfg) {
  cloud.validate();
  require(cloud.has_ids(), ErrorCode::invalid_argument, "trait extraction needs instance ids");
  std::set<int32_t> ids(cloud.instance_ids.begin(), cloud.instance_ids.end());
  ids.erase(kUnlabeled);
  require(!ids.empty(), ErrorCode::invalid_argument, "no labeled instances in cloud");

  const double scale = trait_cfg.scale_cm_per_unit;
  std::vector<TraitReport> reports;
  for (int32_t id : ids) {
    LabeledPointCloud instance;
    for (std::size_t i = 0; i < cloud.points.size(); ++i) {
      if (cloud.instance_ids[i] != id) continue;
      instance.points.push_back(cloud.points[i]);
      if (cloud.has_colors()) instance.colors.push_back(cloud.colors[i]);
    }
    TraitReport report;
    report.instance_id = id;

    const LabeledPointCloud clean = preprocess_cloud(instance, mesh_cfg);
    report.volume_units3 = instance_volume(clean, mesh_cfg.voxel_size);
    report.volume_cm3 = report.volume_units3 * scale * scale * scale;

    try {
      TriMesh repaired;
      {
        const TriMesh shape = alpha_shape_mesh(clean, mesh_cfg.alpha);
        require(!shape.faces.empty(), ErrorCode::invalid_argument,
                "alpha shape produced no faces (alpha too small?)");
        repaired = remove_unreferenced_vertices(fill_holes(shape));
      }
      const TriMesh refined = loop_subdivide(repaired, mesh_cfg.loop_iterations);
      report.area_cm2 = surface_area(refined) * scale * scale;
      try {
        report.width_cm = leaf_width(repaired, trait_cfg) * scale;
      } catch (const Error& e) {
        report.notes += std::string("width: ") + e.what() + "; ";
      }
    } catch (const Error& e) {
      report.notes += std::string("mesh: ") + e.what() + "; ";
    }

    try {
      report.length_cm = leaf_length(clean, trait_cfg).first * scale;
    } catch (const Error& e) {
      report.notes += std::string("length: ") + e.what() + "; ";
    }
    reports.push_back(std::move(report));
  }
  return reports;
}

void write_trait_csv(const std::string& path, const std::vector<TraitReport>& reports,
                     const MeshingConfig& mesh_cfg, const TraitConfig& trait_cfg) {
  std::ofstream out(path);
  require(bool(out), ErrorCode::io, "cannot write " + path);
  out << "instance_id,class,volume_cm3,area_cm2,length_cm,width_cm,"
         "alpha,loop_iterations,k,n,scale_cm_per_unit\n";
  auto cell = [](const std::optional<double>& v) {
    if (!v) return std::string();
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", *v);
    return std::string(buf);
  };
  for (const TraitReport& r : reports) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", r.volume_cm3);
    out << r.instance_id << ',' << r.class_name << ',' << buf << ',' << cell(r.area_cm2) << ','
        << cell(r.length_cm) << ',' << cell(r.width_cm) << ',' << mesh_cfg.alpha << ','
        << mesh_cfg.loop_iterations << ',' << trait_cfg.k << ',' << trait_cfg.n_strips << ','
        << trait_cfg.scale_cm_per_unit << '\n';
  }
  require(bool(out), ErrorCode::io, "short write to " + path);
}

}  // namespace ipens
