#pragma once

#include <array>
#include <string>
#include <vector>

#include "core/geometry.hpp"

namespace ipens {

struct GridDims {
  int x = 0, y = 0, z = 0;

  std::size_t count() const { return std::size_t(x) * std::size_t(y) * std::size_t(z); }
  bool operator==(const GridDims&) const = default;
};

// Voxel values live at cell centers: center(i,j,k) = min + (i+.5, j+.5, k+.5)*h.
// Storage is x-fastest: index = i + dims.x*(j + dims.y*k).
struct GridLayout {
  GridDims dims;
  Aabb bounds;

  Vec3 cell_size() const {
    return Vec3(bounds.extent().x() / dims.x, bounds.extent().y() / dims.y,
                bounds.extent().z() / dims.z);
  }
  Vec3 center(int i, int j, int k) const {
    const Vec3 h = cell_size();
    return bounds.min + Vec3((i + 0.5) * h.x(), (j + 0.5) * h.y(), (k + 0.5) * h.z());
  }
  std::size_t index(int i, int j, int k) const {
    return std::size_t(i) + std::size_t(dims.x) * (std::size_t(j) + std::size_t(dims.y) * k);
  }
  bool operator==(const GridLayout& o) const {
    return dims == o.dims && bounds.min == o.bounds.min && bounds.max == o.bounds.max;
  }
};

// One trilinear stencil: up to 8 (linear index, weight) pairs. Cells outside
// the grid are dropped, which realizes the zero-outside-bounds convention for
// interpolation and keeps scatter/gather exactly adjoint.
struct TrilinearStencil {
  std::array<std::size_t, 8> index;
  std::array<double, 8> weight;
  int count = 0;
};

TrilinearStencil trilinear_stencil(const GridLayout& layout, const Vec3& p);

double trilinear_sample(const GridLayout& layout, const std::vector<double>& values, const Vec3& p);

struct DensityField {
  GridLayout layout;
  std::vector<double> sigma; // layout.dims.count(), non-negative

  void validate() const;
};

struct MaskField {
  GridLayout layout;
  std::vector<std::vector<double>> scores; // one grid per object

  int n_objects() const { return static_cast<int>(scores.size()); }
  static MaskField zeros(int n_objects, const GridLayout& layout);
  void validate() const;
};

// "DGRD" file: magic, u32 dims xyz, f32 bounds (min xyz, max xyz), f32 values x-fastest.
DensityField read_density_grid(const std::string& path);
void write_density_grid(const std::string& path, const DensityField& field);

// "MFLD" file: magic, u32 object count, then the DGRD layout repeated per object.
MaskField read_mask_field(const std::string& path);
void write_mask_field(const std::string& path, const MaskField& field);

}  // namespace ipens
