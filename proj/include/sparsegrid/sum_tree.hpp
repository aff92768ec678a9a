#pragma once

#include <cstddef>
#include <vector>

namespace sparsegrid {

// Complete binary tree of partial sums over n leaves. Parents are recomputed
// from their children on every update, so rounding does not accumulate.
template <typename T>
class SumTree {
 public:
  explicit SumTree(std::size_t n = 0, T init = T{}) : size_(n) {
    leaves_ = 1;
    while (leaves_ < n) leaves_ <<= 1;
    nodes_.assign(2 * leaves_, T{});
    for (std::size_t i = 0; i < n; ++i) nodes_[leaves_ + i] = init;
    for (std::size_t i = leaves_ - 1; i >= 1; --i) nodes_[i] = nodes_[2 * i] + nodes_[2 * i + 1];
  }

  std::size_t size() const { return size_; }
  T total() const { return nodes_[1]; }
  T get(std::size_t i) const { return nodes_[leaves_ + i]; }

  void set(std::size_t i, T value) {
    std::size_t node = leaves_ + i;
    nodes_[node] = value;
    for (node >>= 1; node >= 1; node >>= 1) nodes_[node] = nodes_[2 * node] + nodes_[2 * node + 1];
  }

  // Leaf whose cumulative interval contains target, for 0 <= target < total().
  // Never returns a leaf holding zero while the total is positive.
  std::size_t find(T target) const {
    std::size_t node = 1;
    while (node < leaves_) {
      const T left = nodes_[2 * node];
      const T right = nodes_[2 * node + 1];
      if ((target < left && left > T{}) || !(right > T{})) {
        node = 2 * node;
      } else {
        target -= left;
        node = 2 * node + 1;
      }
    }
    return node - leaves_;
  }

 private:
  std::size_t size_ = 0;
  std::size_t leaves_ = 1;
  std::vector<T> nodes_;
};

}  // namespace sparsegrid
