#pragma once

#include <string>
#include <vector>

#include "core/geometry.hpp"

namespace ipens {

struct InstanceDetection {
  int frame = 0;
  int obj_id = 0;
  Vec2 center = Vec2::Zero();
  std::vector<Vec2> polygon; // >= 3 vertices, implicitly closed
};

struct PromptSet {
  int frame_index = 0;
  int obj_id = 0;
  std::vector<Vec2> positives;
  std::vector<Vec2> negatives;
};

/// Even-odd rule; points on the boundary count as inside.
bool point_in_polygon(const Vec2& p, const std::vector<Vec2>& polygon);

/// For every detection: negatives are the centers of the five nearest other
/// detections; positives are the center plus axis offsets (k*grid, 0) and
/// (0, k*grid) for 0 < |k| <= radius that land inside the polygon.
std::vector<PromptSet> generate_pnp_prompts(const std::vector<InstanceDetection>& detections,
                                            int grid = 3, int radius = 1);

std::vector<InstanceDetection> read_detections_json(const std::string& path);
void write_prompts_json(const std::string& path, const std::vector<PromptSet>& prompts);

}  // namespace ipens
