#include "core/grid.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

namespace ipens {

TrilinearStencil trilinear_stencil(const GridLayout& layout, const Vec3& p) {
  TrilinearStencil st;
  const Vec3 h = layout.cell_size();
  // continuous cell coordinates; integer g means "at cell center g"
  const double gx = (p.x() - layout.bounds.min.x()) / h.x() - 0.5;
  const double gy = (p.y() - layout.bounds.min.y()) / h.y() - 0.5;
  const double gz = (p.z() - layout.bounds.min.z()) / h.z() - 0.5;
  const int ix = static_cast<int>(std::floor(gx));
  const int iy = static_cast<int>(std::floor(gy));
  const int iz = static_cast<int>(std::floor(gz));
  const double fx = gx - ix, fy = gy - iy, fz = gz - iz;
  const double wx[2] = {1.0 - fx, fx};
  const double wy[2] = {1.0 - fy, fy};
  const double wz[2] = {1.0 - fz, fz};
  for (int dz = 0; dz < 2; ++dz) {
    const int k = iz + dz;
    if (k < 0 || k >= layout.dims.z) continue;
    for (int dy = 0; dy < 2; ++dy) {
      const int j = iy + dy;
      if (j < 0 || j >= layout.dims.y) continue;
      for (int dx = 0; dx < 2; ++dx) {
        const int i = ix + dx;
        if (i < 0 || i >= layout.dims.x) continue;
        const double w = wx[dx] * wy[dy] * wz[dz];
        if (w == 0.0) continue;
        st.index[st.count] = layout.index(i, j, k);
        st.weight[st.count] = w;
        ++st.count;
      }
    }
  }
  return st;
}

double trilinear_sample(const GridLayout& layout, const std::vector<double>& values, const Vec3& p) {
  const TrilinearStencil st = trilinear_stencil(layout, p);
  double acc = 0.0;
  for (int c = 0; c < st.count; ++c) acc += st.weight[c] * values[st.index[c]];
  return acc;
}

void DensityField::validate() const {
  require(layout.dims.x > 0 && layout.dims.y > 0 && layout.dims.z > 0,
          ErrorCode::invalid_argument, "density grid dims must be positive");
  require(sigma.size() == layout.dims.count(), ErrorCode::invalid_argument,
          "density value count does not match dims");
  require((layout.bounds.min.array() < layout.bounds.max.array()).all(),
          ErrorCode::invalid_argument, "density bounds must have positive extent");
  for (double s : sigma)
    require(std::isfinite(s) && s >= 0.0, ErrorCode::invalid_argument,
            "density values must be finite and non-negative");
}

MaskField MaskField::zeros(int n_objects, const GridLayout& layout) {
  require(n_objects > 0, ErrorCode::invalid_argument, "mask field needs at least one object");
  MaskField f;
  f.layout = layout;
  f.scores.assign(n_objects, std::vector<double>(layout.dims.count(), 0.0));
  return f;
}

void MaskField::validate() const {
  require(!scores.empty(), ErrorCode::invalid_argument, "mask field has no objects");
  for (const auto& grid : scores)
    require(grid.size() == layout.dims.count(), ErrorCode::invalid_argument,
            "mask grid size does not match dims");
}

namespace {

constexpr char kDensityMagic[4] = {'D', 'G', 'R', 'D'};
constexpr char kMaskMagic[4] = {'M', 'F', 'L', 'D'};

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  require(bool(in), ErrorCode::bad_format, "truncated grid file");
  return v;
}

void write_layout(std::ostream& out, const GridLayout& layout) {
  put<uint32_t>(out, static_cast<uint32_t>(layout.dims.x));
  put<uint32_t>(out, static_cast<uint32_t>(layout.dims.y));
  put<uint32_t>(out, static_cast<uint32_t>(layout.dims.z));
  for (int a = 0; a < 3; ++a) put<float>(out, static_cast<float>(layout.bounds.min[a]));
  for (int a = 0; a < 3; ++a) put<float>(out, static_cast<float>(layout.bounds.max[a]));
}

GridLayout read_layout(std::istream& in) {
  GridLayout layout;
  layout.dims.x = static_cast<int>(get<uint32_t>(in));
  layout.dims.y = static_cast<int>(get<uint32_t>(in));
  layout.dims.z = static_cast<int>(get<uint32_t>(in));
  Vec3 lo, hi;
  for (int a = 0; a < 3; ++a) lo[a] = get<float>(in);
  for (int a = 0; a < 3; ++a) hi[a] = get<float>(in);
  layout.bounds = Aabb::of(lo, hi);
  return layout;
}

void write_values(std::ostream& out, const std::vector<double>& values) {
  for (double v : values) put<float>(out, static_cast<float>(v));
}

std::vector<double> read_values(std::istream& in, std::size_t n) {
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = get<float>(in);
  return values;
}

}  // namespace

DensityField read_density_grid(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(bool(in), ErrorCode::io, "cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  require(bool(in) && std::memcmp(magic, kDensityMagic, 4) == 0, ErrorCode::bad_format,
          "not a density grid file: " + path);
  DensityField field;
  field.layout = read_layout(in);
  field.sigma = read_values(in, field.layout.dims.count());
  field.validate();
  return field;
}

void write_density_grid(const std::string& path, const DensityField& field) {
  field.validate();
  std::ofstream out(path, std::ios::binary);
  require(bool(out), ErrorCode::io, "cannot write " + path);
  out.write(kDensityMagic, 4);
  write_layout(out, field.layout);
  write_values(out, field.sigma);
  require(bool(out), ErrorCode::io, "short write to " + path);
}

MaskField read_mask_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(bool(in), ErrorCode::io, "cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  require(bool(in) && std::memcmp(magic, kMaskMagic, 4) == 0, ErrorCode::bad_format,
          "not a mask field file: " + path);
  const uint32_t n_objects = get<uint32_t>(in);
  require(n_objects > 0, ErrorCode::bad_format, "mask field file has zero objects");
  MaskField field;
  field.layout = read_layout(in);
  field.scores.reserve(n_objects);
  for (uint32_t i = 0; i < n_objects; ++i)
    field.scores.push_back(read_values(in, field.layout.dims.count()));
  field.validate();
  return field;
}

void write_mask_field(const std::string& path, const MaskField& field) {
  field.validate();
  std::ofstream out(path, std::ios::binary);
  require(bool(out), ErrorCode::io, "cannot write " + path);
  out.write(kMaskMagic, 4);
  put<uint32_t>(out, static_cast<uint32_t>(field.scores.size()));
  write_layout(out, field.layout);
  for (const auto& grid : field.scores) write_values(out, grid);
  require(bool(out), ErrorCode::io, "short write to " + path);
}

}  // namespace ipens
