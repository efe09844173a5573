#pragma once

// Independent reference implementations used only by tests. Nothing here
// calls into the library's algorithm code.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

#include "famst/point_set.hpp"

namespace oracle {

using famst::VertexId;

// Plain left-to-right sum of squared differences.
template <class Scalar>
double naive_distance(const famst::BasicPointSet<Scalar>& x, std::size_t a, std::size_t b) {
  double s = 0.0;
  for (std::size_t j = 0; j < x.dim(); ++j) {
    const double t = static_cast<double>(x.row(a)[j]) - static_cast<double>(x.row(b)[j]);
    s += t * t;
  }
  return std::sqrt(s);
}

template <class Scalar>
std::vector<std::vector<double>> distance_matrix(const famst::BasicPointSet<Scalar>& x) {
  const std::size_t n = x.size();
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i][j] = naive_distance(x, i, j);
  return m;
}

// Row i: all other ids argsorted by (distance, id), truncated to k.
template <class Scalar>
std::vector<std::vector<VertexId>> knn_by_argsort(const famst::BasicPointSet<Scalar>& x,
                                                  std::size_t k) {
  const auto m = distance_matrix(x);
  std::vector<std::vector<VertexId>> rows(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::vector<VertexId> idx(x.size());
    std::iota(idx.begin(), idx.end(), VertexId{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&](VertexId a, VertexId b) { return m[i][a] < m[i][b]; });
    for (VertexId j : idx)
      if (j != i && rows[i].size() < k) rows[i].push_back(j);
  }
  return rows;
}

// Quick-union without any balancing; labels vertices by root.
inline std::vector<std::size_t> union_find_roots(
    std::size_t n, const std::vector<std::pair<VertexId, VertexId>>& edges) {
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  std::function<std::size_t(std::size_t)> root = [&](std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (auto [a, b] : edges) parent[root(a)] = root(b);
  std::vector<std::size_t> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = root(i);
  return out;
}

inline std::size_t count_components(std::size_t n,
                                    const std::vector<std::pair<VertexId, VertexId>>& edges) {
  auto roots = union_find_roots(n, edges);
  std::sort(roots.begin(), roots.end());
  return static_cast<std::size_t>(std::unique(roots.begin(), roots.end()) - roots.begin());
}

// Two labelings describe the same partition iff the label pairs form a bijection.
template <class A, class B>
bool same_partition(const std::vector<A>& a, const std::vector<B>& b) {
  if (a.size() != b.size()) return false;
  std::map<A, B> fwd;
  std::map<B, A> bwd;
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto [f, fi] = fwd.emplace(a[i], b[i]);
    auto [r, ri] = bwd.emplace(b[i], a[i]);
    if (f->second != b[i] || r->second != a[i]) return false;
  }
  return true;
}

// Minimum spanning tree weight of the complete graph on n <= 9 vertices by
// decoding every Prüfer sequence (n^(n-2) labeled trees).
inline double mst_by_pruefer(const std::vector<std::vector<double>>& w) {
  const std::size_t n = w.size();
  if (n < 2) return 0.0;
  if (n == 2) return w[0][1];
  const std::size_t len = n - 2;
  std::vector<std::size_t> seq(len, 0);
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> degree(n);
  while (true) {
    std::fill(degree.begin(), degree.end(), 1);
    for (std::size_t s : seq) ++degree[s];
    double total = 0.0;
    for (std::size_t s : seq) {
      std::size_t leaf = 0;
      while (degree[leaf] != 1) ++leaf;
      total += w[leaf][s];
      --degree[leaf];
      --degree[s];
    }
    std::size_t u = n, v = n;
    for (std::size_t i = 0; i < n; ++i)
      if (degree[i] == 1) (u == n ? u : v) = i;
    total += w[u][v];
    best = std::min(best, total);
    std::size_t pos = 0;
    while (pos < len && ++seq[pos] == n) seq[pos++] = 0;
    if (pos == len) break;
  }
  return best;
}

// Exact minimum spanning tree weight by depth-first include/exclude search
// over all edges with an admissible lower bound (sum of the cheapest edges
// still available). Explores every spanning tree not provably worse.
inline double mst_by_branch_and_bound(const std::vector<std::vector<double>>& w) {
  const std::size_t n = w.size();
  std::vector<std::tuple<double, std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) edges.emplace_back(w[i][j], i, j);
  std::sort(edges.begin(), edges.end());
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> comp(n);
  std::iota(comp.begin(), comp.end(), std::size_t{0});

  std::function<void(std::size_t, std::size_t, double)> search = [&](std::size_t idx,
                                                                      std::size_t chosen,
                                                                      double weight) {
    if (chosen == n - 1) {
      best = std::min(best, weight);
      return;
    }
    const std::size_t need = n - 1 - chosen;
    if (edges.size() - idx < need) return;
    double bound = weight;
    for (std::size_t i = idx; i < idx + need; ++i) bound += std::get<0>(edges[i]);
    if (bound >= best) return;
    const auto [ew, a, b] = edges[idx];
    if (comp[a] != comp[b]) {
      const auto saved = comp;
      const std::size_t from = comp[b], to = comp[a];
      for (auto& c : comp)
        if (c == from) c = to;
      search(idx + 1, chosen + 1, weight + ew);
      comp = saved;
    }
    search(idx + 1, chosen, weight);
  };
  search(0, 0, 0.0);
  return best;
}

inline double exhaustive_mst_weight(const std::vector<std::vector<double>>& w) {
  return w.size() <= 8 ? mst_by_pruefer(w) : mst_by_branch_and_bound(w);
}

}  // namespace oracle
