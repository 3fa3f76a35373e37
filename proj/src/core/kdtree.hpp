#pragma once

#include <vector>

#include "core/geometry.hpp"

namespace ipens {

/// Static KD-tree over a copied point list. Queries match exhaustive search
/// exactly: results ascend by distance, equal distances break by point index.
class NnIndex {
public:
  explicit NnIndex(std::vector<Vec3> points);

  std::size_t size() const { return points_.size(); }
  const std::vector<Vec3>& points() const { return points_; }

  std::vector<int> knn(const Vec3& query, int k) const;

  /// Indices of all points with |p - query| <= radius, ascending by index.
  std::vector<int> radius(const Vec3& query, double r) const;

private:
  struct Node {
    int axis = -1;        // -1 marks a leaf
    double split = 0.0;
    int left = -1, right = -1;
    int begin = 0, end = 0; // leaf payload range in order_
  };

  int build(int begin, int end, int depth);

  std::vector<Vec3> points_;
  std::vector<int> order_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace ipens
