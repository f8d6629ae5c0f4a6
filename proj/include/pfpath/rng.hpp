#pragma once

#include <random>
#include <vector>

namespace pfpath {

/// In-place Fisher-Yates; spelled out so shuffles are reproducible across
/// standard libraries, not just across runs.
template <class T, class Rng>
void fisher_yates(std::vector<T>& v, Rng& rng) {
  for (size_t i = v.size(); i > 1; --i) {
    std::uniform_int_distribution<size_t> d(0, i - 1);
    std::swap(v[i - 1], v[d(rng)]);
  }
}

/// n distinct indices from [0, total), order randomized.
template <class Rng>
std::vector<size_t> sample_indices(size_t total, size_t n, Rng& rng) {
  std::vector<size_t> idx(total);
  for (size_t i = 0; i < total; ++i) idx[i] = i;
  if (n >= total) {
    fisher_yates(idx, rng);
    return idx;
  }
  // partial Fisher-Yates: first n entries end up random and distinct
  for (size_t i = 0; i < n; ++i) {
    std::uniform_int_distribution<size_t> d(i, total - 1);
    std::swap(idx[i], idx[d(rng)]);
  }
  idx.resize(n);
  return idx;
}

}  // namespace pfpath
