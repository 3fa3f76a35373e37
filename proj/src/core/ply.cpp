#include "core/ply.hpp"

#include <cstring>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace ipens {

namespace {

enum class Scalar { i8, u8, i16, u16, i32, u32, f32, f64 };

Scalar parse_scalar(const std::string& name) {
  static const std::map<std::string, Scalar> table = {
      {"char", Scalar::i8},    {"int8", Scalar::i8},    {"uchar", Scalar::u8},
      {"uint8", Scalar::u8},   {"short", Scalar::i16},  {"int16", Scalar::i16},
      {"ushort", Scalar::u16}, {"uint16", Scalar::u16}, {"int", Scalar::i32},
      {"int32", Scalar::i32},  {"uint", Scalar::u32},   {"uint32", Scalar::u32},
      {"float", Scalar::f32},  {"float32", Scalar::f32},{"double", Scalar::f64},
      {"float64", Scalar::f64}};
  auto it = table.find(name);
  require(it != table.end(), ErrorCode::bad_format, "unknown ply scalar type: " + name);
  return it->second;
}

std::size_t scalar_size(Scalar s) {
  switch (s) {
    case Scalar::i8:
    case Scalar::u8: return 1;
    case Scalar::i16:
    case Scalar::u16: return 2;
    case Scalar::i32:
    case Scalar::u32:
    case Scalar::f32: return 4;
    case Scalar::f64: return 8;
  }
  return 0;
}

struct Property {
  std::string name;
  bool is_list = false;
  Scalar count_type = Scalar::u8;
  Scalar value_type = Scalar::f32;
};

struct Element {
  std::string name;
  std::size_t count = 0;
  std::vector<Property> properties;
};

struct Header {
  bool binary = false;
  std::vector<Element> elements;
  std::size_t body_offset = 0;
};

Header parse_header(std::istream& in) {
  Header header;
  std::string line;
  std::getline(in, line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  require(line == "ply", ErrorCode::bad_format, "missing ply magic");
  bool have_format = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string keyword;
    ls >> keyword;
    if (keyword == "comment" || keyword == "obj_info" || keyword.empty()) continue;
    if (keyword == "format") {
      std::string fmt, version;
      ls >> fmt >> version;
      if (fmt == "ascii") header.binary = false;
      else if (fmt == "binary_little_endian") header.binary = true;
      else fail(ErrorCode::bad_format, "unsupported ply format: " + fmt);
      have_format = true;
    } else if (keyword == "element") {
      Element el;
      ls >> el.name >> el.count;
      header.elements.push_back(el);
    } else if (keyword == "property") {
      require(!header.elements.empty(), ErrorCode::bad_format, "property before element");
      Property prop;
      std::string t;
      ls >> t;
      if (t == "list") {
        std::string ct, vt;
        ls >> ct >> vt >> prop.name;
        prop.is_list = true;
        prop.count_type = parse_scalar(ct);
        prop.value_type = parse_scalar(vt);
      } else {
        prop.value_type = parse_scalar(t);
        ls >> prop.name;
      }
      header.elements.back().properties.push_back(prop);
    } else if (keyword == "end_header") {
      require(have_format, ErrorCode::bad_format, "ply header missing format line");
      header.body_offset = static_cast<std::size_t>(in.tellg());
      return header;
    } else {
      fail(ErrorCode::bad_format, "unexpected ply header keyword: " + keyword);
    }
  }
  fail(ErrorCode::bad_format, "ply header not terminated");
}

double read_binary_scalar(std::istream& in, Scalar type) {
  unsigned char buf[8];
  in.read(reinterpret_cast<char*>(buf), scalar_size(type));
  require(bool(in), ErrorCode::bad_format, "truncated ply body");
  switch (type) {
    case Scalar::i8: return static_cast<int8_t>(buf[0]);
    case Scalar::u8: return buf[0];
    case Scalar::i16: { int16_t v; std::memcpy(&v, buf, 2); return v; }
    case Scalar::u16: { uint16_t v; std::memcpy(&v, buf, 2); return v; }
    case Scalar::i32: { int32_t v; std::memcpy(&v, buf, 4); return v; }
    case Scalar::u32: { uint32_t v; std::memcpy(&v, buf, 4); return v; }
    case Scalar::f32: { float v; std::memcpy(&v, buf, 4); return v; }
    case Scalar::f64: { double v; std::memcpy(&v, buf, 8); return v; }
  }
  return 0;
}

double read_ascii_scalar(std::istream& in) {
  double v;
  in >> v;
  require(bool(in), ErrorCode::bad_format, "truncated ply body");
  return v;
}

// Visits every element row; cb(element_index, property_index, values).
void scan_body(std::istream& in, const Header& header,
               const std::function<void(std::size_t, std::size_t, const std::vector<double>&)>& cb) {
  std::vector<double> values;
  for (std::size_t e = 0; e < header.elements.size(); ++e) {
    const Element& el = header.elements[e];
    for (std::size_t row = 0; row < el.count; ++row) {
      for (std::size_t p = 0; p < el.properties.size(); ++p) {
        const Property& prop = el.properties[p];
        values.clear();
        if (prop.is_list) {
          const std::size_t n = static_cast<std::size_t>(
              header.binary ? read_binary_scalar(in, prop.count_type) : read_ascii_scalar(in));
          for (std::size_t i = 0; i < n; ++i)
            values.push_back(header.binary ? read_binary_scalar(in, prop.value_type)
                                           : read_ascii_scalar(in));
        } else {
          values.push_back(header.binary ? read_binary_scalar(in, prop.value_type)
                                         : read_ascii_scalar(in));
        }
        cb(e, p, values);
      }
    }
  }
}

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(bool(in), ErrorCode::io, "cannot open " + path);
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  require(bool(out), ErrorCode::io, "cannot write " + path);
  return out;
}

}  // namespace

LabeledPointCloud read_cloud_ply(const std::string& path) {
  std::ifstream in = open_input(path);
  const Header header = parse_header(in);

  LabeledPointCloud cloud;
  const Element* vertex_el = nullptr;
  std::size_t vertex_index = 0;
  for (std::size_t i = 0; i < header.elements.size(); ++i)
    if (header.elements[i].name == "vertex") {
      vertex_el = &header.elements[i];
      vertex_index = i;
    }
  require(vertex_el != nullptr, ErrorCode::bad_format, "ply has no vertex element");

  bool has_rgb = false, has_id = false, has_orig = false;
  for (const Property& p : vertex_el->properties) {
    if (p.name == "red") has_rgb = true;
    if (p.name == "instance_id") has_id = true;
    if (p.name == "orig_red") has_orig = true;
  }
  cloud.points.resize(vertex_el->count, Vec3::Zero());
  if (has_rgb) cloud.colors.resize(vertex_el->count, Rgb{0, 0, 0});
  if (has_orig) cloud.original_colors.resize(vertex_el->count, Rgb{0, 0, 0});
  if (has_id) cloud.instance_ids.resize(vertex_el->count, kUnlabeled);

  std::vector<std::size_t> row_of(header.elements.size(), 0);
  scan_body(in, header, [&](std::size_t e, std::size_t p, const std::vector<double>& values) {
    if (e != vertex_index) return;
    const Element& el = header.elements[e];
    const std::size_t row = row_of[e];
    const std::string& name = el.properties[p].name;
    const double v = values.empty() ? 0.0 : values[0];
    if (name == "x") cloud.points[row].x() = v;
    else if (name == "y") cloud.points[row].y() = v;
    else if (name == "z") cloud.points[row].z() = v;
    else if (name == "red") cloud.colors[row][0] = static_cast<uint8_t>(v);
    else if (name == "green") cloud.colors[row][1] = static_cast<uint8_t>(v);
    else if (name == "blue") cloud.colors[row][2] = static_cast<uint8_t>(v);
    else if (name == "orig_red") cloud.original_colors[row][0] = static_cast<uint8_t>(v);
    else if (name == "orig_green") cloud.original_colors[row][1] = static_cast<uint8_t>(v);
    else if (name == "orig_blue") cloud.original_colors[row][2] = static_cast<uint8_t>(v);
    else if (name == "instance_id") cloud.instance_ids[row] = static_cast<int32_t>(v);
    if (p + 1 == el.properties.size()) ++row_of[e];
  });
  cloud.validate();
  return cloud;
}

void write_cloud_ply(const std::string& path, const LabeledPointCloud& cloud) {
  cloud.validate();
  std::ofstream out = open_output(path);
  out << "ply\nformat binary_little_endian 1.0\n";
  out << "element vertex " << cloud.points.size() << "\n";
  out << "property float x\nproperty float y\nproperty float z\n";
  if (cloud.has_colors())
    out << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
  if (!cloud.original_colors.empty())
    out << "property uchar orig_red\nproperty uchar orig_green\nproperty uchar orig_blue\n";
  if (cloud.has_ids()) out << "property int instance_id\n";
  out << "end_header\n";
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    put(out, static_cast<float>(cloud.points[i].x()));
    put(out, static_cast<float>(cloud.points[i].y()));
    put(out, static_cast<float>(cloud.points[i].z()));
    if (cloud.has_colors())
      for (uint8_t c : cloud.colors[i]) put(out, c);
    if (!cloud.original_colors.empty())
      for (uint8_t c : cloud.original_colors[i]) put(out, c);
    if (cloud.has_ids()) put(out, cloud.instance_ids[i]);
  }
  require(bool(out), ErrorCode::io, "short write to " + path);
}

TriMesh read_mesh_ply(const std::string& path) {
  std::ifstream in = open_input(path);
  const Header header = parse_header(in);

  TriMesh mesh;
  std::size_t vertex_index = header.elements.size(), face_index = header.elements.size();
  for (std::size_t i = 0; i < header.elements.size(); ++i) {
    if (header.elements[i].name == "vertex") vertex_index = i;
    if (header.elements[i].name == "face") face_index = i;
  }
  require(vertex_index < header.elements.size(), ErrorCode::bad_format, "ply has no vertex element");
  require(face_index < header.elements.size(), ErrorCode::bad_format, "ply has no face element");
  mesh.vertices.resize(header.elements[vertex_index].count, Vec3::Zero());

  std::vector<std::size_t> row_of(header.elements.size(), 0);
  scan_body(in, header, [&](std::size_t e, std::size_t p, const std::vector<double>& values) {
    const Element& el = header.elements[e];
    const std::size_t row = row_of[e];
    const std::string& name = el.properties[p].name;
    if (e == vertex_index) {
      const double v = values.empty() ? 0.0 : values[0];
      if (name == "x") mesh.vertices[row].x() = v;
      else if (name == "y") mesh.vertices[row].y() = v;
      else if (name == "z") mesh.vertices[row].z() = v;
    } else if (e == face_index && (name == "vertex_indices" || name == "vertex_index")) {
      require(values.size() == 3, ErrorCode::bad_format, "non-triangular ply face");
      mesh.faces.push_back({static_cast<int>(values[0]), static_cast<int>(values[1]),
                            static_cast<int>(values[2])});
    }
    if (p + 1 == el.properties.size()) ++row_of[e];
  });
  mesh.validate();
  return mesh;
}

void write_mesh_ply(const std::string& path, const TriMesh& mesh) {
  mesh.validate();
  std::ofstream out = open_output(path);
  out << "ply\nformat binary_little_endian 1.0\n";
  out << "element vertex " << mesh.vertices.size() << "\n";
  out << "property float x\nproperty float y\nproperty float z\n";
  out << "element face " << mesh.faces.size() << "\n";
  out << "property list uchar int vertex_indices\n";
  out << "end_header\n";
  for (const Vec3& v : mesh.vertices) {
    put(out, static_cast<float>(v.x()));
    put(out, static_cast<float>(v.y()));
    put(out, static_cast<float>(v.z()));
  }
  for (const auto& f : mesh.faces) {
    put(out, static_cast<uint8_t>(3));
    for (int idx : f) put(out, static_cast<int32_t>(idx));
  }
  require(bool(out), ErrorCode::io, "short write to " + path);
}

}  // namespace ipens
