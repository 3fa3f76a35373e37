#include "core/kdtree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

namespace ipens {

namespace {
constexpr int kLeafSize = 16;

struct HeapEntry {
  double dist2;
  int index;
  // worst candidate on top: larger distance first, then larger index
  bool operator<(const HeapEntry& o) const {
    if (dist2 != o.dist2) return dist2 < o.dist2;
    return index < o.index;
  }
};
}  // namespace

NnIndex::NnIndex(std::vector<Vec3> points) : points_(std::move(points)) {
  for (const Vec3& p : points_)
    require(p.allFinite(), ErrorCode::invalid_argument, "non-finite point in index");
  order_.resize(points_.size());
  std::iota(order_.begin(), order_.end(), 0);
  if (!points_.empty()) root_ = build(0, static_cast<int>(points_.size()), 0);
}

int NnIndex::build(int begin, int end, int depth) {
  Node node;
  if (end - begin <= kLeafSize) {
    node.begin = begin;
    node.end = end;
    nodes_.push_back(node);
    return static_cast<int>(nodes_.size()) - 1;
  }
  // split on the widest axis
  Vec3 lo = points_[order_[begin]], hi = lo;
  for (int i = begin; i < end; ++i) {
    lo = lo.cwiseMin(points_[order_[i]]);
    hi = hi.cwiseMax(points_[order_[i]]);
  }
  int axis = 0;
  (hi - lo).maxCoeff(&axis);
  const int mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](int a, int b) {
                     const double va = points_[a][axis], vb = points_[b][axis];
                     if (va != vb) return va < vb;
                     return a < b;
                   });
  node.axis = axis;
  node.split = points_[order_[mid]][axis];
  const int self = static_cast<int>(nodes_.size());
  nodes_.push_back(node);
  const int left = build(begin, mid, depth + 1);
  const int right = build(mid, end, depth + 1);
  nodes_[self].left = left;
  nodes_[self].right = right;
  return self;
}

std::vector<int> NnIndex::knn(const Vec3& query, int k) const {
  require(k > 0, ErrorCode::invalid_argument, "knn requires k > 0");
  require(!points_.empty(), ErrorCode::invalid_argument, "knn on empty index");
  require(static_cast<std::size_t>(k) <= points_.size(), ErrorCode::invalid_argument,
          "knn k exceeds indexed point count");

  std::priority_queue<HeapEntry> heap;
  auto consider = [&](int idx) {
    const double d2 = (points_[idx] - query).squaredNorm();
    HeapEntry e{d2, idx};
    if (static_cast<int>(heap.size()) < k) {
      heap.push(e);
    } else if (e < heap.top()) {
      heap.pop();
      heap.push(e);
    }
  };

  // iterative depth-first descent, nearer child first
  std::vector<std::pair<int, double>> stack; // node, lower-bound distance
  stack.emplace_back(root_, 0.0);
  while (!stack.empty()) {
    const auto [ni, bound] = stack.back();
    stack.pop_back();
    if (static_cast<int>(heap.size()) == k && bound * bound > heap.top().dist2) continue;
    const Node& node = nodes_[ni];
    if (node.axis < 0) {
      for (int i = node.begin; i < node.end; ++i) consider(order_[i]);
      continue;
    }
    const double delta = query[node.axis] - node.split;
    const int near = delta <= 0 ? node.left : node.right;
    const int far = delta <= 0 ? node.right : node.left;
    stack.emplace_back(far, std::max(bound, std::abs(delta)));
    stack.emplace_back(near, bound);
  }

  std::vector<HeapEntry> out;
  out.reserve(heap.size());
  while (!heap.empty()) {
    out.push_back(heap.top());
    heap.pop();
  }
  std::sort(out.begin(), out.end());
  std::vector<int> indices;
  indices.reserve(out.size());
  for (const HeapEntry& e : out) indices.push_back(e.index);
  return indices;
}

std::vector<int> NnIndex::radius(const Vec3& query, double r) const {
  require(r >= 0, ErrorCode::invalid_argument, "negative search radius");
  std::vector<int> result;
  if (points_.empty()) return result;
  const double r2 = r * r;
  std::vector<int> stack{root_};
  while (!stack.empty()) {
    const Node& node = nodes_[stack.back()];
    stack.pop_back();
    if (node.axis < 0) {
      for (int i = node.begin; i < node.end; ++i) {
        const int idx = order_[i];
        if ((points_[idx] - query).squaredNorm() <= r2) result.push_back(idx);
      }
      continue;
    }
    const double delta = query[node.axis] - node.split;
    const int near = delta <= 0 ? node.left : node.right;
    const int far = delta <= 0 ? node.right : node.left;
    stack.push_back(near);
    if (std::abs(delta) <= r) stack.push_back(far);
  }
  std::sort(result.begin(), result.end());
  return result;
}

}  // namespace ipens
