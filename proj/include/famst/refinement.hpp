#pragma once

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "famst/bridging.hpp"
#include "famst/connectivity.hpp"
#include "famst/error.hpp"
#include "famst/parallel.hpp"
#include "famst/point_set.hpp"

namespace famst {

struct BridgeChange {
  BridgeEdge before;
  BridgeEdge after;
};

using RefinementDelta = std::vector<BridgeChange>;

struct RefinementReport {
  std::size_t rounds = 0;
  std::size_t total_changes = 0;
  bool converged = false;
  /// Sum of bridge distances before the first round and after each round.
  std::vector<double> weight_history;
};

inline double total_distance(const BridgeEdgeSet& e) {
  double s = 0.0;
  for (const auto& b : e) s += b.d;
  return s;
}

namespace detail {

// Greedy endpoint search: best u' among u's neighbors, then best v' among
// v's neighbors measured from the updated u*.
template <class Scalar>
BridgeEdge refine_edge(const BasicPointSet<Scalar>& x, const UndirectedGraph& g,
                       const ComponentLabeling& c, const BridgeEdge& e) {
  if (e.u >= c.label.size() || e.v >= c.label.size() || c.label[e.u] != e.ci ||
      c.label[e.v] != e.cj || e.ci == e.cj)
    throw InternalError("bridge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                        ") disagrees with its component tag (" + std::to_string(e.ci) + "," +
                        std::to_string(e.cj) + ")");
  BridgeEdge best = e;
  // G holds only ANN edges and components are G's components, so every
  // neighbor of u already lies in ci (and of v in cj).
  for (VertexId cand : g.adjacency(e.u)) {
    assert(c.label[cand] == e.ci);
    if (cand == e.v) continue;
    const double d = x.distance_unchecked(cand, e.v);
    if (d < best.d) {
      best.u = cand;
      best.d = d;
    }
  }
  for (VertexId cand : g.adjacency(e.v)) {
    assert(c.label[cand] == e.cj);
    if (cand == e.u) continue;
    const double d = x.distance_unchecked(best.u, cand);
    if (d < best.d) {
      best.v = cand;
      best.d = d;
    }
  }
  return best;
}

}  // namespace detail

/// One refinement pass over every bridge, in input order. Changes are
/// recorded only when an endpoint moved, which implies a strictly shorter edge.
template <class Scalar>
std::pair<BridgeEdgeSet, RefinementDelta> refine_once(const BasicPointSet<Scalar>& x,
                                                      const UndirectedGraph& g,
                                                      const ComponentLabeling& c,
                                                      const BridgeEdgeSet& e,
                                                      unsigned workers = 1) {
  BridgeEdgeSet refined(e.size());
  parallel_for_blocks(e.size(), workers, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) refined[i] = detail::refine_edge(x, g, c, e[i]);
  });
  RefinementDelta delta;
  for (std::size_t i = 0; i < e.size(); ++i)
    if (refined[i].u != e[i].u || refined[i].v != e[i].v) delta.push_back({e[i], refined[i]});
  return {std::move(refined), std::move(delta)};
}

/// Repeats refine_once until a pass makes no change or `max_rounds` passes
/// have run. The confirming pass with zero changes counts as a round.
template <class Scalar>
std::pair<BridgeEdgeSet, RefinementReport> refine_until_converged(
    const BasicPointSet<Scalar>& x, const UndirectedGraph& g, const ComponentLabeling& c,
    BridgeEdgeSet e, std::size_t max_rounds = 100, unsigned workers = 1) {
  if (max_rounds < 1) throw UsageError("max_rounds must be >= 1");
  RefinementReport report;
  report.weight_history.push_back(total_distance(e));
  while (report.rounds < max_rounds) {
    auto [next, delta] = refine_once(x, g, c, e, workers);
    ++report.rounds;
    report.total_changes += delta.size();
    e = std::move(next);
    report.weight_history.push_back(total_distance(e));
    if (delta.empty()) {
      report.converged = true;
      break;
    }
  }
  return {std::move(e), std::move(report)};
}

/// One edge per unordered endpoint pair, keeping the shortest. Each survivor
/// sits where its pair first appeared.
inline BridgeEdgeSet dedupe_bridges(const BridgeEdgeSet& e) {
  std::unordered_map<std::uint64_t, std::size_t> slot;
  slot.reserve(e.size());
  BridgeEdgeSet out;
  out.reserve(e.size());
  for (const auto& b : e) {
    const VertexId lo = std::min(b.u, b.v);
    const VertexId hi = std::max(b.u, b.v);
    const std::uint64_t key = (static_cast<std::uint64_t>(lo) << 32) | hi;
    auto [it, inserted] = slot.try_emplace(key, out.size());
    if (inserted)
      out.push_back(b);
    else if (b.d < out[it->second].d)
      out[it->second] = b;
  }
  return out;
}

}  // namespace famst
