#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iterator>
#include <limits>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "famst/bridging.hpp"
#include "famst/connectivity.hpp"
#include "famst/error.hpp"
#include "famst/neighbor_graph.hpp"
#include "famst/point_set.hpp"
#include "famst/union_find.hpp"

namespace famst {

/// Undirected weighted edge in canonical orientation (u < v).
struct WeightedEdge {
  VertexId u = 0;
  VertexId v = 0;
  double w = 0.0;

  friend bool operator==(const WeightedEdge&, const WeightedEdge&) = default;
};

inline WeightedEdge make_edge(VertexId a, VertexId b, double w) {
  return a < b ? WeightedEdge{a, b, w} : WeightedEdge{b, a, w};
}

struct SpanningTree {
  std::size_t vertex_count = 0;
  std::vector<WeightedEdge> edges;  ///< in insertion order
  double total_weight = 0.0;

  friend bool operator==(const SpanningTree&, const SpanningTree&) = default;
};

/// Kruskal was handed a graph that does not span all vertices.
class DisconnectedGraphError : public InternalError {
public:
  DisconnectedGraphError(std::size_t components)
      : InternalError("candidate graph is disconnected: " + std::to_string(components) +
                      " components remain after consuming every edge"),
        components_(components) {}
  std::size_t components() const noexcept { return components_; }

private:
  std::size_t components_;
};

/// Throws InternalError unless `tree` has n-1 canonical edges forming an
/// acyclic connected graph whose weights sum to total_weight.
inline void validate_spanning_tree(const SpanningTree& tree, std::size_t n,
                                   double rel_tol = 1e-9) {
  if (tree.vertex_count != n)
    throw InternalError("tree covers " + std::to_string(tree.vertex_count) + " vertices, expected " +
                        std::to_string(n));
  if (n == 0) return;
  if (tree.edges.size() != n - 1)
    throw InternalError("tree has " + std::to_string(tree.edges.size()) + " edges, expected " +
                        std::to_string(n - 1));
  UnionFind uf(n);
  double sum = 0.0;
  for (const auto& e : tree.edges) {
    if (e.u >= e.v || e.v >= n) throw InternalError("tree edge is not canonical or out of range");
    if (!(e.w >= 0.0)) throw InternalError("tree edge has negative weight");
    if (!uf.unite(e.u, e.v)) throw InternalError("tree contains a cycle");
    sum += e.w;
  }
  if (uf.set_count() != 1) throw InternalError("tree is not connected");
  if (std::abs(sum - tree.total_weight) > rel_tol * std::max(1.0, std::abs(sum)))
    throw InternalError("tree total weight does not match its edges");
}

/// Canonical union of the symmetrized ANN edges and the bridges; one edge per
/// endpoint pair, keeping the smaller weight. Sorted by (u, v).
inline std::vector<WeightedEdge> assemble_candidate_edges(const NeighborGraph& g,
                                                          const BridgeEdgeSet& bridges) {
  std::vector<std::tuple<VertexId, VertexId, double>> all;
  all.reserve(g.size() * g.k() + bridges.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    auto ids = g.neighbors(i);
    auto ds = g.distances(i);
    for (std::size_t j = 0; j < g.k(); ++j) {
      const auto e = make_edge(static_cast<VertexId>(i), ids[j], ds[j]);
      all.emplace_back(e.u, e.v, e.w);
    }
  }
  for (const auto& b : bridges) {
    const auto e = make_edge(b.u, b.v, b.d);
    all.emplace_back(e.u, e.v, e.w);
  }
  // bucket by smaller endpoint, then sort each row by (v, w)
  const std::size_t n = g.size();
  std::vector<std::size_t> start(n + 1, 0);
  for (const auto& [u, v, w] : all) {
    if (u == v) throw UsageError("self-loop on vertex " + std::to_string(u));
    if (v >= n) throw UsageError("edge endpoint out of range");
    ++start[u + 1];
  }
  for (std::size_t i = 0; i < n; ++i) start[i + 1] += start[i];
  std::vector<std::pair<VertexId, double>> bucket(all.size());
  {
    std::vector<std::size_t> cursor(start.begin(), start.end() - 1);
    for (const auto& [u, v, w] : all) bucket[cursor[u]++] = {v, w};
  }
  std::vector<WeightedEdge> out;
  out.reserve(all.size());
  for (std::size_t u = 0; u < n; ++u) {
    const auto lo = bucket.begin() + static_cast<std::ptrdiff_t>(start[u]);
    const auto hi = bucket.begin() + static_cast<std::ptrdiff_t>(start[u + 1]);
    std::sort(lo, hi);
    for (auto it = lo; it != hi; ++it)
      if (it == lo || it->first != std::prev(it)->first)
        out.push_back({static_cast<VertexId>(u), it->first, it->second});
  }
  return out;
}

/// Minimum spanning tree by Kruskal. Edges are processed in (w, u, v) order,
/// so the chosen edge set is deterministic under weight ties.
inline SpanningTree kruskal(std::size_t n, std::span<const WeightedEdge> edges) {
  std::vector<WeightedEdge> sorted(edges.begin(), edges.end());
  for (auto& e : sorted) {
    if (e.v >= n || e.u >= n) throw UsageError("edge endpoint out of range");
    if (e.u == e.v) throw UsageError("self-loop on vertex " + std::to_string(e.u));
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(sorted.begin(), sorted.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
    return std::tie(a.w, a.u, a.v) < std::tie(b.w, b.u, b.v);
  });
  SpanningTree tree;
  tree.vertex_count = n;
  if (n == 0) return tree;
  tree.edges.reserve(n - 1);
  UnionFind uf(n);
  for (const auto& e : sorted) {
    if (!uf.unite(e.u, e.v)) continue;
    tree.edges.push_back(e);
    tree.total_weight += e.w;
    if (tree.edges.size() == n - 1) break;
  }
  if (tree.edges.size() != n - 1) throw DisconnectedGraphError(uf.set_count());
  return tree;
}

/// Exact Euclidean MST by dense Prim: O(n^2 d) time, O(n) extra memory.
/// Keys are squared distances; the reported weights are their roots.
template <class Scalar>
SpanningTree exact_mst_prim(const BasicPointSet<Scalar>& x) {
  const std::size_t n = x.size();
  SpanningTree tree;
  tree.vertex_count = n;
  if (n < 2) return tree;
  tree.edges.reserve(n - 1);

  std::vector<double> key(n, std::numeric_limits<double>::infinity());
  std::vector<VertexId> parent(n, 0);
  std::vector<VertexId> remaining(n - 1);
  for (std::size_t i = 1; i < n; ++i) remaining[i - 1] = static_cast<VertexId>(i);

  VertexId current = 0;
  while (!remaining.empty()) {
    const Scalar* cur = x.row_ptr(current);
    std::size_t best = 0;
    for (std::size_t r = 0; r < remaining.size(); ++r) {
      const VertexId w = remaining[r];
      const double d2 = detail::squared_l2(cur, x.row_ptr(w), x.dim());
      if (d2 < key[w]) {
        key[w] = d2;
        parent[w] = current;
      }
      const VertexId b = remaining[best];
      if (key[w] < key[b] || (key[w] == key[b] && w < b)) best = r;
    }
    const VertexId chosen = remaining[best];
    remaining[best] = remaining.back();
    remaining.pop_back();
    const double w = std::sqrt(key[chosen]);
    tree.edges.push_back(make_edge(parent[chosen], chosen, w));
    tree.total_weight += w;
    current = chosen;
  }
  return tree;
}

/// (w_approx - w_exact) / w_exact.
inline double relative_error(double w_approx, double w_exact) {
  if (!(w_exact > 0.0)) throw UsageError("relative error needs a positive exact weight");
  return (w_approx - w_exact) / w_exact;
}

}  // namespace famst
