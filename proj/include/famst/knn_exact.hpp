#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "famst/error.hpp"
#include "famst/neighbor_graph.hpp"
#include "famst/parallel.hpp"
#include "famst/point_set.hpp"

namespace famst {

/// Brute-force kNN graph, O(n^2 d). Ties are broken by ascending id, so the
/// result is unique. Also serves as the recall oracle for approximate builders.
template <class Scalar>
NeighborGraph build_knn_exact(const BasicPointSet<Scalar>& x, std::size_t k, unsigned workers = 1) {
  const std::size_t n = x.size();
  if (k < 1 || k >= n)
    throw UsageError("exact kNN needs 1 <= k <= n-1 (k = " + std::to_string(k) +
                     ", n = " + std::to_string(n) + ")");
  std::vector<VertexId> ids(n * k);
  std::vector<double> dists(n * k);

  parallel_for_blocks(n, workers, [&](std::size_t lo, std::size_t hi) {
    std::vector<std::pair<double, VertexId>> cand;
    cand.reserve(n - 1);
    for (std::size_t i = lo; i < hi; ++i) {
      cand.clear();
      const auto vi = static_cast<VertexId>(i);
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const auto vj = static_cast<VertexId>(j);
        cand.emplace_back(x.distance_unchecked(vi, vj), vj);
      }
      std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k), cand.end());
      for (std::size_t j = 0; j < k; ++j) {
        dists[i * k + j] = cand[j].first;
        ids[i * k + j] = cand[j].second;
      }
    }
  });
  return NeighborGraph(n, k, std::move(ids), std::move(dists));
}

}  // namespace famst
