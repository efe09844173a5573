#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "famst/error.hpp"
#include "famst/neighbor_graph.hpp"
#include "famst/point_set.hpp"

namespace famst {

using ComponentId = std::uint32_t;

/// Symmetric weighted adjacency in CSR form. Each vertex's neighbor list is
/// sorted by id and free of self-loops and duplicates.
class UndirectedGraph {
public:
  UndirectedGraph() = default;
  UndirectedGraph(std::vector<std::size_t> offsets, std::vector<VertexId> targets,
                  std::vector<double> weights)
      : offsets_(std::move(offsets)), targets_(std::move(targets)), weights_(std::move(weights)) {}

  std::size_t size() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const noexcept { return targets_.size() / 2; }

  std::span<const VertexId> adjacency(std::size_t v) const noexcept {
    return {targets_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::span<const double> weights(std::size_t v) const noexcept {
    return {weights_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }

  bool has_edge(VertexId a, VertexId b) const noexcept {
    auto adj = adjacency(a);
    return std::binary_search(adj.begin(), adj.end(), b);
  }

private:
  std::vector<std::size_t> offsets_;
  std::vector<VertexId> targets_;
  std::vector<double> weights_;
};

/// Partition of the vertex set into connected components. Components are
/// ordered by their smallest vertex; vertices inside a component are sorted.
struct ComponentLabeling {
  std::vector<std::vector<VertexId>> components;
  std::vector<ComponentId> label;

  std::size_t count() const noexcept { return components.size(); }
};

namespace detail {

// Builds CSR from directed arcs; duplicate (src, dst) arcs keep the min weight.
inline UndirectedGraph from_arcs(std::size_t n,
                                 std::vector<std::tuple<VertexId, VertexId, double>> arcs) {
  // bucket by source, then sort each short row by (target, weight)
  std::vector<std::size_t> start(n + 1, 0);
  for (const auto& a : arcs) ++start[std::get<0>(a) + 1];
  for (std::size_t i = 0; i < n; ++i) start[i + 1] += start[i];
  std::vector<std::pair<VertexId, double>> bucket(arcs.size());
  {
    std::vector<std::size_t> cursor(start.begin(), start.end() - 1);
    for (const auto& [src, dst, w] : arcs) bucket[cursor[src]++] = {dst, w};
  }
  arcs.clear();
  arcs.shrink_to_fit();

  std::vector<std::size_t> offsets(n + 1, 0);
  std::vector<VertexId> targets;
  std::vector<double> weights;
  targets.reserve(bucket.size());
  weights.reserve(bucket.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto lo = bucket.begin() + static_cast<std::ptrdiff_t>(start[i]);
    const auto hi = bucket.begin() + static_cast<std::ptrdiff_t>(start[i + 1]);
    std::sort(lo, hi);
    for (auto it = lo; it != hi; ++it) {
      if (it != lo && it->first == std::prev(it)->first) continue;  // keep the lightest copy
      targets.push_back(it->first);
      weights.push_back(it->second);
    }
    offsets[i + 1] = targets.size();
  }
  return UndirectedGraph(std::move(offsets), std::move(targets), std::move(weights));
}

}  // namespace detail

/// Undirected graph over n vertices from an explicit edge list; self-loops are rejected.
inline UndirectedGraph make_undirected(
    std::size_t n, std::span<const std::tuple<VertexId, VertexId, double>> edges) {
  std::vector<std::tuple<VertexId, VertexId, double>> arcs;
  arcs.reserve(2 * edges.size());
  for (const auto& [a, b, w] : edges) {
    if (a >= n || b >= n) throw UsageError("edge endpoint out of range");
    if (a == b) throw UsageError("self-loop on vertex " + std::to_string(a));
    arcs.emplace_back(a, b, w);
    arcs.emplace_back(b, a, w);
  }
  return detail::from_arcs(n, std::move(arcs));
}

/// Undirected graph whose edges are {i, j} for every j in N[i]. Weights are
/// carried over from the neighbor distances.
inline UndirectedGraph symmetrize(const NeighborGraph& g) {
  const std::size_t n = g.size();
  std::vector<std::tuple<VertexId, VertexId, double>> arcs;
  arcs.reserve(2 * n * g.k());
  for (std::size_t i = 0; i < n; ++i) {
    auto ids = g.neighbors(i);
    auto ds = g.distances(i);
    for (std::size_t j = 0; j < g.k(); ++j) {
      if (ids[j] == i) throw UsageError("neighbor graph row " + std::to_string(i) + " lists itself");
      arcs.emplace_back(static_cast<VertexId>(i), ids[j], ds[j]);
      arcs.emplace_back(ids[j], static_cast<VertexId>(i), ds[j]);
    }
  }
  return detail::from_arcs(n, std::move(arcs));
}

/// Checks every carried-over edge weight against a fresh distance computation.
template <class Scalar>
void validate_weights(const UndirectedGraph& g, const BasicPointSet<Scalar>& x,
                      double rel_tol = 1e-9) {
  for (std::size_t v = 0; v < g.size(); ++v) {
    auto adj = g.adjacency(v);
    auto ws = g.weights(v);
    for (std::size_t j = 0; j < adj.size(); ++j) {
      const double truth = x.distance(static_cast<VertexId>(v), adj[j]);
      if (std::abs(truth - ws[j]) > rel_tol * std::max(1.0, truth))
        throw InternalError("edge weight mismatch on {" + std::to_string(v) + "," +
                            std::to_string(adj[j]) + "}");
    }
  }
}

/// Connected components by iterative DFS with an explicit stack.
inline ComponentLabeling find_components(const UndirectedGraph& g) {
  const std::size_t n = g.size();
  constexpr ComponentId kUnvisited = ~ComponentId{0};
  ComponentLabeling out;
  out.label.assign(n, kUnvisited);
  std::vector<VertexId> stack;
  for (std::size_t root = 0; root < n; ++root) {
    if (out.label[root] != kUnvisited) continue;
    const auto id = static_cast<ComponentId>(out.components.size());
    auto& members = out.components.emplace_back();
    stack.push_back(static_cast<VertexId>(root));
    out.label[root] = id;
    while (!stack.empty()) {
      const VertexId u = stack.back();
      stack.pop_back();
      members.push_back(u);
      for (VertexId w : g.adjacency(u)) {
        if (out.label[w] == kUnvisited) {
          out.label[w] = id;
          stack.push_back(w);
        }
      }
    }
    std::sort(members.begin(), members.end());
  }
  return out;
}

}  // namespace famst
