#pragma once

#include <optional>
#include <string>
#include <vector>

#include "core/geometry.hpp"
#include "core/preprocess.hpp"

namespace ipens {

struct TraitConfig {
  int k = 8;                  // midrib walk neighborhood
  double theta_max = M_PI / 2;
  double epsilon = 0.0;       // <= 0 resolves to 2x mean nearest-neighbor spacing
  int m_max = 500;
  int n_strips = 100;         // width sampling rows
  double scale_cm_per_unit = 1.0;
  int arap_max_iterations = 300;
  double arap_tol = 1e-9;
};

struct MidribTrace {
  std::vector<Vec3> base_points; // starts at e_s
  Vec3 principal_axis = Vec3::UnitX();
  Vec3 endpoint_start = Vec3::Zero();
  Vec3 endpoint_end = Vec3::Zero();
};

/// Point count after voxel downsampling times voxel_size^3, scene units^3.
double instance_volume(const LabeledPointCloud& cloud, double voxel_size = 0.01);

/// Sum of 0.5 * |(v1 - v2) x (v1 - v3)| over faces.
double surface_area(const TriMesh& mesh);

/// Length of the greedy nearest-neighbor midrib polyline between the extreme
/// points along the first principal axis.
std::pair<double, MidribTrace> leaf_length(const LabeledPointCloud& cloud,
                                           const TraitConfig& cfg = {});

/// Widest strip of the ARAP-flattened mesh across the flattening's principal
/// axis, in mesh units.
double leaf_width(const TriMesh& mesh, const TraitConfig& cfg = {});

struct TraitReport {
  int32_t instance_id = kUnlabeled;
  std::string class_name = "object";
  double volume_units3 = 0.0;
  double volume_cm3 = 0.0;
  std::optional<double> area_cm2;
  std::optional<double> length_cm;
  std::optional<double> width_cm;
  std::string notes; // per-instance failures land here instead of aborting
};

/// Full per-instance extraction: preprocess, volume, alpha-shape mesh, hole
/// fill, area from the subdivided mesh, midrib length from the cloud, width
/// from the ARAP parameterization of the repaired mesh.
std::vector<TraitReport> extract_traits(const LabeledPointCloud& cloud, const MeshingConfig& mesh_cfg,
                                        const TraitConfig& trait_cfg);

void write_trait_csv(const std::string& path, const std::vector<TraitReport>& reports,
                     const MeshingConfig& mesh_cfg, const TraitConfig& trait_cfg);

}  // namespace ipens
