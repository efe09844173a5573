#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

#include "famst/connectivity.hpp"
#include "famst/error.hpp"
#include "famst/parallel.hpp"
#include "famst/point_set.hpp"
#include "famst/random.hpp"

namespace famst {

/// Inter-component edge. `u` lies in component `ci`, `v` in `cj`, ci < cj.
struct BridgeEdge {
  VertexId u = 0;
  VertexId v = 0;
  double d = 0.0;
  ComponentId ci = 0;
  ComponentId cj = 0;

  friend bool operator==(const BridgeEdge&, const BridgeEdge&) = default;
};

using BridgeEdgeSet = std::vector<BridgeEdge>;

/// Number of unordered component pairs, t(t-1)/2.
constexpr std::uint64_t pair_count(std::uint64_t t) noexcept {
  return t < 2 ? 0 : t * (t - 1) / 2;
}

namespace detail {

// Shortest `lambda` bridges between components `ci` and `cj`, appended to `out`.
template <class Scalar>
void bridge_pair(const BasicPointSet<Scalar>& x, const ComponentLabeling& c, ComponentId ci,
                 ComponentId cj, std::size_t lambda, std::uint64_t seed,
                 std::vector<BridgeEdge>& out) {
  const auto& a = c.components[ci];
  const auto& b = c.components[cj];
  const std::uint64_t budget = static_cast<std::uint64_t>(lambda) * lambda;
  std::vector<std::tuple<double, VertexId, VertexId>> cand;
  if (static_cast<std::uint64_t>(a.size()) * b.size() <= budget) {
    cand.reserve(a.size() * b.size());
    for (VertexId u : a)
      for (VertexId v : b) cand.emplace_back(x.distance_unchecked(u, v), u, v);
  } else {
    Rng rng(derive_seed(seed, ci, cj));
    cand.reserve(budget);
    for (std::uint64_t s = 0; s < budget; ++s) {
      const VertexId u = a[uniform_index(rng, a.size())];
      const VertexId v = b[uniform_index(rng, b.size())];
      cand.emplace_back(x.distance_unchecked(u, v), u, v);
    }
  }
  std::sort(cand.begin(), cand.end());
  // identical (u, v) samples sort adjacent because they share a distance
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  const std::size_t keep = std::min(lambda, cand.size());
  for (std::size_t i = 0; i < keep; ++i) {
    const auto& [d, u, v] = cand[i];
    out.push_back(BridgeEdge{u, v, d, ci, cj});
  }
}

}  // namespace detail

/// For every pair of components draws lambda^2 random cross pairs (or all of
/// them when that is no more than lambda^2), and keeps the lambda shortest
/// distinct ones ordered by (d, u, v). Pairs are emitted in lexicographic
/// (ci, cj) order. Each pair derives its own RNG stream from `seed`, so the
/// result does not depend on `workers`.
template <class Scalar>
BridgeEdgeSet sample_bridges(const BasicPointSet<Scalar>& x, const ComponentLabeling& c,
                             std::size_t lambda, std::uint64_t seed, unsigned workers = 1) {
  if (lambda < 1) throw UsageError("lambda must be >= 1");
  const std::size_t t = c.count();
  if (t < 2) return {};
  const std::uint64_t pairs = pair_count(t);

  std::vector<std::pair<ComponentId, ComponentId>> index;
  index.reserve(pairs);
  for (std::size_t i = 0; i < t; ++i)
    for (std::size_t j = i + 1; j < t; ++j)
      index.emplace_back(static_cast<ComponentId>(i), static_cast<ComponentId>(j));

  std::vector<std::vector<BridgeEdge>> per_pair(index.size());
  parallel_for_blocks(index.size(), workers, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t p = lo; p < hi; ++p)
      detail::bridge_pair(x, c, index[p].first, index[p].second, lambda, seed, per_pair[p]);
  });

  BridgeEdgeSet out;
  out.reserve(pairs * lambda);
  for (const auto& group : per_pair) out.insert(out.end(), group.begin(), group.end());
  return out;
}

}  // namespace famst
