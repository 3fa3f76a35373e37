#pragma once

#include <string>

#include "core/geometry.hpp"

namespace ipens {

/// Reads x/y/z (float or double) plus optional red/green/blue, instance_id,
/// and orig_red/orig_green/orig_blue properties. Accepts ascii and
/// binary_little_endian; unknown properties are skipped.
LabeledPointCloud read_cloud_ply(const std::string& path);

/// Binary little-endian writer: x,y,z float32; red,green,blue uchar when
/// colors present; instance_id int32 when ids present; orig_* uchar when
/// original colors present.
void write_cloud_ply(const std::string& path, const LabeledPointCloud& cloud);

TriMesh read_mesh_ply(const std::string& path);
void write_mesh_ply(const std::string& path, const TriMesh& mesh);

}  // namespace ipens
