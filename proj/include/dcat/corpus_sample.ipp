#pragma once

#include <algorithm>
#include <numeric>
#include <random>

namespace dcat {

template <class T>
std::vector<T> sample(const std::vector<T>& items, std::size_t n, std::uint64_t seed) {
  if (items.size() <= n) return items;
  std::vector<std::size_t> idx(items.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(n);
  std::sort(idx.begin(), idx.end());
  std::vector<T> out;
  out.reserve(n);
  for (auto i : idx) out.push_back(items[i]);
  return out;
}

}  // namespace dcat
