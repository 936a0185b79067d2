#pragma once

// Internal helpers shared by the library sources.

#include <cstddef>
#include <map>
#include <numeric>
#include <string>
#include <vector>

namespace dcat::detail {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), components_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  /// Merges the classes of x and y, keeping the smaller root.
  void unite(std::size_t x, std::size_t y) {
    x = find(x);
    y = find(y);
    if (x == y) return;
    if (y < x) std::swap(x, y);
    parent_[y] = x;
    --components_;
  }

  std::size_t count() const { return components_; }

 private:
  std::vector<std::size_t> parent_;
  std::size_t components_;
};

/// Appends "#2", "#3", ... to repeated names, in order of appearance.
inline void make_unique_names(std::vector<std::string>& names) {
  std::map<std::string, int> seen;
  for (const auto& n : names) ++seen[n];
  std::map<std::string, int> next;
  for (auto& n : names) {
    if (seen[n] > 1) {
      const int k = ++next[n];
      if (k > 1) n += "#" + std::to_string(k);
    }
  }
}

}  // namespace dcat::detail
