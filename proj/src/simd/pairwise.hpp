#pragma once

#include <cstddef>

namespace ssv::simd::detail {

// Shared pairwise-reduction skeleton. Splitting is by fixed halving with a
// fixed leaf size, so the summation tree depends only on n: results are
// reproducible across runs and independent of any outer parallelism.
inline constexpr std::size_t kPairwiseLeaf = 128;

template <class Leaf>
double pairwise_reduce(std::size_t offset, std::size_t n, const Leaf& leaf) {
  if (n <= kPairwiseLeaf) return leaf(offset, n);
  const std::size_t half = n / 2;
  return pairwise_reduce(offset, half, leaf) +
         pairwise_reduce(offset + half, n - half, leaf);
}

}  // namespace ssv::simd::detail
