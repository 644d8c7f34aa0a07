#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include <omp.h>

namespace qflat {

enum class Exec { serial, parallel };

namespace detail {
inline constexpr std::size_t kLeaf = 16;
inline constexpr int kSplitDepth = 6;

template <class T, class Term>
T pairwise_range(std::size_t begin, std::size_t end, const T& zero, Term& term) {
  if (end - begin <= kLeaf) {
    T acc = zero;
    for (std::size_t i = begin; i < end; ++i) acc += term(i);
    return acc;
  }
  const std::size_t mid = begin + (end - begin) / 2;
  T left = pairwise_range(begin, mid, zero, term);
  T right = pairwise_range(mid, end, zero, term);
  return left + right;
}
}  // namespace detail

// Sum of term(i) over [0, n) along a fixed binary tree. The tree depends only on n,
// so serial and parallel execution give bitwise identical results for any thread count.
template <class T, class Term>
T tree_sum(std::size_t n, const T& zero, Term&& term, Exec exec = Exec::parallel) {
  constexpr std::size_t subtrees = std::size_t{1} << detail::kSplitDepth;
  if (exec == Exec::serial || n <= 2 * subtrees * detail::kLeaf) {
    return detail::pairwise_range(0, n, zero, term);
  }
  std::vector<std::pair<std::size_t, std::size_t>> ranges{{0, n}};
  for (int d = 0; d < detail::kSplitDepth; ++d) {
    std::vector<std::pair<std::size_t, std::size_t>> next;
    next.reserve(ranges.size() * 2);
    for (const auto& [b, e] : ranges) {
      const std::size_t mid = b + (e - b) / 2;
      next.emplace_back(b, mid);
      next.emplace_back(mid, e);
    }
    ranges.swap(next);
  }
  std::vector<T> partial(ranges.size(), zero);
  const long count = static_cast<long>(ranges.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < count; ++i) {
    partial[i] = detail::pairwise_range(ranges[i].first, ranges[i].second, zero, term);
  }
  while (partial.size() > 1) {
    std::vector<T> up;
    up.reserve(partial.size() / 2);
    for (std::size_t i = 0; i < partial.size(); i += 2) up.push_back(partial[i] + partial[i + 1]);
    partial.swap(up);
  }
  return partial.front();
}

// Applies a thread count; values < 1 leave the runtime default.
inline void set_thread_count(int threads) {
  if (threads >= 1) omp_set_num_threads(threads);
}

}  // namespace qflat
