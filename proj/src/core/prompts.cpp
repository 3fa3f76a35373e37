#include "core/prompts.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

namespace ipens {

namespace {

bool on_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const Vec2 ap = p - a;
  const double cross = ab.x() * ap.y() - ab.y() * ap.x();
  if (cross != 0.0) return false;
  const double dot = ap.dot(ab);
  return dot >= 0.0 && dot <= ab.squaredNorm();
}

}  // namespace

bool point_in_polygon(const Vec2& p, const std::vector<Vec2>& polygon) {
  require(polygon.size() >= 3, ErrorCode::invalid_argument, "polygon needs at least 3 vertices");
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i)
    if (on_segment(p, polygon[i], polygon[(i + 1) % n])) return true;

  // even-odd ray crossing toward +x
  bool inside = false;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = polygon[i];
    const Vec2& b = polygon[(i + 1) % n];
    if ((a.y() > p.y()) == (b.y() > p.y())) continue;
    const double x_cross = a.x() + (p.y() - a.y()) / (b.y() - a.y()) * (b.x() - a.x());
    if (p.x() < x_cross) inside = !inside;
  }
  return inside;
}

std::vector<PromptSet> generate_pnp_prompts(const std::vector<InstanceDetection>& detections,
                                            int grid, int radius) {
  require(!detections.empty(), ErrorCode::invalid_argument, "no detections");
  require(grid > 0 && radius > 0, ErrorCode::invalid_argument, "grid and radius must be positive");
  for (const auto& det : detections) {
    require(det.polygon.size() >= 3, ErrorCode::invalid_argument, "detection polygon too small");
    require(det.center.allFinite(), ErrorCode::invalid_argument, "detection center not finite");
  }

  // input-order independence: work on an obj_id-sorted copy
  std::vector<InstanceDetection> sorted = detections;
  std::sort(sorted.begin(), sorted.end(),
            [](const InstanceDetection& a, const InstanceDetection& b) {
              if (a.obj_id != b.obj_id) return a.obj_id < b.obj_id;
              return a.frame < b.frame;
            });

  std::vector<PromptSet> out;
  out.reserve(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const InstanceDetection& det = sorted[i];
    PromptSet prompts;
    prompts.frame_index = det.frame;
    prompts.obj_id = det.obj_id;

    // negatives: the 5 nearest other centers (all of them when fewer exist)
    std::vector<std::pair<double, std::size_t>> others;
    for (std::size_t j = 0; j < sorted.size(); ++j) {
      if (j == i) continue;
      others.emplace_back((sorted[j].center - det.center).squaredNorm(), j);
    }
    std::sort(others.begin(), others.end(),
              [&](const auto& a, const auto& b) {
                if (a.first != b.first) return a.first < b.first;
                return sorted[a.second].obj_id < sorted[b.second].obj_id;
              });
    const std::size_t n_neg = std::min<std::size_t>(5, others.size());
    for (std::size_t j = 0; j < n_neg; ++j)
      prompts.negatives.push_back(sorted[others[j].second].center);

    // positives: center unconditionally, then grid offsets filtered by the polygon
    prompts.positives.push_back(det.center);
    for (int k = -radius; k <= radius; ++k) {
      if (k == 0) continue;
      const Vec2 candidates[2] = {det.center + Vec2(k * grid, 0.0),
                                  det.center + Vec2(0.0, k * grid)};
      for (const Vec2& c : candidates)
        if (point_in_polygon(c, det.polygon)) prompts.positives.push_back(c);
    }
    out.push_back(std::move(prompts));
  }
  return out;
}

std::vector<InstanceDetection> read_detections_json(const std::string& path) {
  std::ifstream in(path);
  require(bool(in), ErrorCode::io, "cannot open " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::bad_format, std::string("bad detections json: ") + e.what());
  }
  require(doc.is_array(), ErrorCode::bad_format, "detections json must be an array");
  std::vector<InstanceDetection> detections;
  for (const auto& item : doc) {
    InstanceDetection det;
    det.frame = item.at("frame").get<int>();
    det.obj_id = item.at("obj_id").get<int>();
    const auto& c = item.at("center");
    det.center = Vec2(c.at(0).get<double>(), c.at(1).get<double>());
    for (const auto& v : item.at("polygon"))
      det.polygon.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
    detections.push_back(std::move(det));
  }
  return detections;
}

void write_prompts_json(const std::string& path, const std::vector<PromptSet>& prompts) {
  nlohmann::json doc = nlohmann::json::array();
  for (const PromptSet& p : prompts) {
    nlohmann::json item;
    item["frame"] = p.frame_index;
    item["obj_id"] = p.obj_id;
    auto points = [](const std::vector<Vec2>& pts) {
      nlohmann::json arr = nlohmann::json::array();
      for (const Vec2& q : pts) arr.push_back({q.x(), q.y()});
      return arr;
    };
    item["positive"] = points(p.positives);
    item["negative"] = points(p.negatives);
    doc.push_back(std::move(item));
  }
  std::ofstream out(path);
  require(bool(out), ErrorCode::io, "cannot write " + path);
  out << doc.dump(2) << "\n";
}

}  // namespace ipens
