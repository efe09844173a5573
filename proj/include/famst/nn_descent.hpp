#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "famst/error.hpp"
#include "famst/knn_exact.hpp"
#include "famst/neighbor_graph.hpp"
#include "famst/parallel.hpp"
#include "famst/point_set.hpp"
#include "famst/random.hpp"

namespace famst {

struct AnnParams {
  double rho = 0.5;      ///< fraction of each list sampled for the local join
  double delta = 0.001;  ///< stop once updates < delta * n * k
  int max_iters = 20;
  std::uint64_t seed = 0x5eed;
  /// Random-projection trees used to seed the pools before the first join;
  /// 0 keeps the purely random initial neighborhoods.
  int rp_trees = 8;
  /// Largest leaf of a projection tree (all leaf pairs are compared). 0 = max(10, k).
  std::size_t rp_leaf_size = 0;
};

inline void validate(const AnnParams& p) {
  if (!(p.rho > 0.0 && p.rho <= 1.0)) throw UsageError("NN-Descent rho must lie in (0, 1]");
  if (!(p.delta >= 0.0) || !std::isfinite(p.delta))
    throw UsageError("NN-Descent delta must be >= 0");
  if (p.max_iters < 1) throw UsageError("NN-Descent max_iters must be >= 1");
  if (p.rp_trees < 0) throw UsageError("NN-Descent rp_trees must be >= 0");
}

namespace detail {

struct PoolEntry {
  double dist;
  VertexId id;
};

// Fixed-capacity neighbor pools: per vertex, k ids sorted by (dist, id) plus
// their distances and "not yet joined" flags, each in its own array so the
// insertion test touches as few cache lines as possible.
class NeighborPools {
public:
  NeighborPools(std::size_t n, std::size_t k) : k_(k), ids_(n * k), dists_(n * k), fresh_(n * k) {}

  VertexId* ids(std::size_t i) noexcept { return ids_.data() + i * k_; }
  double* dists(std::size_t i) noexcept { return dists_.data() + i * k_; }
  std::uint8_t* fresh(std::size_t i) noexcept { return fresh_.data() + i * k_; }

  // Row i from k entries already sorted by (dist, id), all marked fresh.
  void assign(std::size_t i, const PoolEntry* sorted) noexcept {
    for (std::size_t j = 0; j < k_; ++j) {
      ids(i)[j] = sorted[j].id;
      dists(i)[j] = sorted[j].dist;
      fresh(i)[j] = 1;
    }
  }

  // Inserts (id, dist) into row i if it beats the current worst entry and is
  // not already present. Returns 1 on insertion, 0 otherwise.
  int try_insert(std::size_t i, VertexId id, double dist) noexcept {
    double* d = dists(i);
    VertexId* r = ids(i);
    const std::size_t last = k_ - 1;
    if (dist > d[last] || (dist == d[last] && id >= r[last])) return 0;
    for (std::size_t j = 0; j < k_; ++j)
      if (r[j] == id) return 0;
    std::uint8_t* f = fresh(i);
    std::size_t pos = last;
    while (pos > 0 && (dist < d[pos - 1] || (dist == d[pos - 1] && id < r[pos - 1]))) {
      r[pos] = r[pos - 1];
      d[pos] = d[pos - 1];
      f[pos] = f[pos - 1];
      --pos;
    }
    r[pos] = id;
    d[pos] = dist;
    f[pos] = 1;
    return 1;
  }

  std::vector<VertexId> take_ids() noexcept { return std::move(ids_); }
  std::vector<double> take_dists() noexcept { return std::move(dists_); }

private:
  std::size_t k_;
  std::vector<VertexId> ids_;
  std::vector<double> dists_;
  std::vector<std::uint8_t> fresh_;
};

// Moves a uniformly random subset of at most `keep` of v[0..size) to the
// front (partial shuffle) and returns its length.
inline std::size_t sample_in_place(VertexId* v, std::size_t size, std::size_t keep,
                                   Rng& rng) noexcept {
  if (size <= keep) return size;
  for (std::size_t i = 0; i < keep; ++i) std::swap(v[i], v[i + uniform_index(rng, size - i)]);
  return keep;
}

inline void sample_in_place(std::vector<VertexId>& v, std::size_t keep, Rng& rng) {
  v.resize(sample_in_place(v.data(), v.size(), keep, rng));
}

// Per-vertex id lists of bounded length in one flat buffer.
class FlatLists {
public:
  FlatLists(std::size_t n, std::size_t cap) : cap_(cap), data_(n * cap), len_(n, 0) {}

  void clear() noexcept { std::fill(len_.begin(), len_.end(), 0u); }
  VertexId* begin(std::size_t i) noexcept { return data_.data() + i * cap_; }
  const VertexId* begin(std::size_t i) const noexcept { return data_.data() + i * cap_; }
  std::size_t size(std::size_t i) const noexcept { return len_[i]; }
  void push(std::size_t i, VertexId v) noexcept { data_[i * cap_ + len_[i]++] = v; }
  void resize(std::size_t i, std::size_t len) noexcept { len_[i] = static_cast<std::uint32_t>(len); }

  // Sorts list i and drops duplicates.
  void sort_unique(std::size_t i) {
    VertexId* b = begin(i);
    std::sort(b, b + len_[i]);
    len_[i] = static_cast<std::uint32_t>(std::unique(b, b + len_[i]) - b);
  }

private:
  std::size_t cap_;
  std::vector<VertexId> data_;
  std::vector<std::uint32_t> len_;
};

// Reverse adjacency of a FlatLists in CSR form: for every target u, the
// sources i that list u, in ascending i.
class ReverseLists {
public:
  explicit ReverseLists(std::size_t n) : offset_(n + 1, 0) {}

  void build(const FlatLists& fwd, std::size_t n) {
    std::fill(offset_.begin(), offset_.end(), 0u);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < fwd.size(i); ++j) ++offset_[fwd.begin(i)[j] + 1];
    for (std::size_t u = 0; u < n; ++u) offset_[u + 1] += offset_[u];
    data_.resize(offset_[n]);
    cursor_.assign(offset_.begin(), offset_.end() - 1);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < fwd.size(i); ++j)
        data_[cursor_[fwd.begin(i)[j]]++] = static_cast<VertexId>(i);
  }

  VertexId* begin(std::size_t u) noexcept { return data_.data() + offset_[u]; }
  std::size_t size(std::size_t u) const noexcept { return offset_[u + 1] - offset_[u]; }

private:
  std::vector<std::size_t> offset_;
  std::vector<std::size_t> cursor_;
  std::vector<VertexId> data_;
};

// Splits vertex ids by random hyperplanes until every leaf holds at most
// `leaf_size` ids. On return `ids` is a permutation of 0..n-1 in which each
// leaf is contiguous; the leaf ranges are returned in order.
template <class Scalar>
std::vector<std::pair<std::size_t, std::size_t>> rp_partition(const BasicPointSet<Scalar>& x,
                                                              std::size_t leaf_size, Rng& rng,
                                                              std::vector<VertexId>& ids) {
  const std::size_t n = x.size();
  const std::size_t d = x.dim();
  ids.resize(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = static_cast<VertexId>(i);
  std::vector<std::pair<std::size_t, std::size_t>> leaves;
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, n}};
  std::vector<double> normal(d);
  while (!stack.empty()) {
    const auto [lo, hi] = stack.back();
    stack.pop_back();
    const std::size_t size = hi - lo;
    if (size <= leaf_size) {
      leaves.emplace_back(lo, hi);
      continue;
    }
    const VertexId pa = ids[lo + uniform_index(rng, size)];
    VertexId pb = ids[lo + uniform_index(rng, size - 1)];
    if (pb == pa) pb = ids[hi - 1];
    const Scalar* ra = x.row_ptr(pa);
    const Scalar* rb = x.row_ptr(pb);
    double offset = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      normal[j] = static_cast<double>(ra[j]) - static_cast<double>(rb[j]);
      offset += normal[j] * 0.5 * (static_cast<double>(ra[j]) + static_cast<double>(rb[j]));
    }
    auto mid = std::stable_partition(ids.begin() + static_cast<std::ptrdiff_t>(lo),
                                     ids.begin() + static_cast<std::ptrdiff_t>(hi), [&](VertexId v) {
                                       const Scalar* r = x.row_ptr(v);
                                       double dot = 0.0;
                                       for (std::size_t j = 0; j < d; ++j)
                                         dot += normal[j] * static_cast<double>(r[j]);
                                       return dot < offset;
                                     });
    std::size_t cut = static_cast<std::size_t>(mid - ids.begin());
    if (cut == lo || cut == hi) cut = lo + size / 2;  // degenerate split (duplicates)
    stack.emplace_back(cut, hi);
    stack.emplace_back(lo, cut);
  }
  return leaves;
}

// All pairs inside each leaf of one projection tree, in deterministic order.
template <class Scalar>
void rp_tree_leaf_pairs(const BasicPointSet<Scalar>& x, std::size_t leaf_size, Rng& rng,
                        std::vector<std::pair<VertexId, VertexId>>& pairs) {
  std::vector<VertexId> ids;
  for (const auto& [lo, hi] : rp_partition(x, leaf_size, rng, ids))
    for (std::size_t a = lo; a < hi; ++a)
      for (std::size_t b = a + 1; b < hi; ++b) pairs.emplace_back(ids[a], ids[b]);
}

// The descent itself, on ids as given. Expects validated params and n > k + 1.
template <class Scalar>
NeighborGraph descent_core(const BasicPointSet<Scalar>& x, std::size_t k, const AnnParams& params,
                           unsigned workers) {
  const std::size_t n = x.size();
  NeighborPools pools(n, k);

  // Random initial neighborhoods.
  {
    std::vector<VertexId> perm;
    std::vector<PoolEntry> row(k);
    for (std::size_t i = 0; i < n; ++i) {
      Rng rng(derive_seed(params.seed, 0x1, i));
      std::size_t filled = 0;
      if (2 * k > n) {
        perm.resize(n - 1);
        for (std::size_t j = 0, c = 0; j < n; ++j)
          if (j != i) perm[c++] = static_cast<VertexId>(j);
        sample_in_place(perm, k, rng);
        for (VertexId id : perm) row[filled++] = {0.0, id};
      } else {
        while (filled < k) {
          const auto id = static_cast<VertexId>(uniform_index(rng, n));
          if (id == i) continue;
          bool dup = false;
          for (std::size_t j = 0; j < filled; ++j) dup = dup || row[j].id == id;
          if (!dup) row[filled++] = {0.0, id};
        }
      }
      for (std::size_t j = 0; j < k; ++j)
        row[j].dist = x.distance_unchecked(static_cast<VertexId>(i), row[j].id);
      std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) {
        return std::pair(a.dist, a.id) < std::pair(b.dist, b.id);
      });
      pools.assign(i, row.data());
    }
  }

  if (params.rp_trees > 0) {
    const std::size_t leaf = params.rp_leaf_size > 0 ? std::max<std::size_t>(2, params.rp_leaf_size)
                                                       : std::max<std::size_t>(10, k);
    std::vector<std::pair<VertexId, VertexId>> leaf_pairs;
    std::vector<double> leaf_dist;
    for (int tree = 0; tree < params.rp_trees; ++tree) {
      Rng rng(derive_seed(params.seed, 0x2, static_cast<std::uint64_t>(tree)));
      leaf_pairs.clear();
      rp_tree_leaf_pairs(x, leaf, rng, leaf_pairs);
      leaf_dist.resize(leaf_pairs.size());
      parallel_for_blocks(leaf_pairs.size(), workers, [&](std::size_t b, std::size_t e) {
        for (std::size_t p = b; p < e; ++p)
          leaf_dist[p] = x.distance_unchecked(leaf_pairs[p].first, leaf_pairs[p].second);
      });
      for (std::size_t p = 0; p < leaf_pairs.size(); ++p) {
        pools.try_insert(leaf_pairs[p].first, leaf_pairs[p].second, leaf_dist[p]);
        pools.try_insert(leaf_pairs[p].second, leaf_pairs[p].first, leaf_dist[p]);
      }
    }
  }

  const std::size_t sample = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(params.rho * static_cast<double>(k))));
  const double stop_below = params.delta * static_cast<double>(n) * static_cast<double>(k);

  // Forward lists hold up to `sample` sampled fresh ids (new) or all k ids
  // (old); reverse samples then add up to `sample` more to each.
  FlatLists new_lists(n, 2 * sample), old_lists(n, k + sample);
  ReverseLists rev_new(n), rev_old(n);
  std::vector<VertexId> fresh;
  std::vector<std::pair<VertexId, VertexId>> pairs;
  std::vector<double> pair_dist;
  constexpr std::size_t kChunk = 1024;

  for (int iter = 0; iter < params.max_iters; ++iter) {
    new_lists.clear();
    old_lists.clear();

    // Forward lists: sample of fresh entries (which then become old) plus all old ones.
    for (std::size_t i = 0; i < n; ++i) {
      Rng rng(derive_seed(params.seed, 0x100 + static_cast<std::uint64_t>(iter), i));
      const VertexId* row = pools.ids(i);
      std::uint8_t* flag = pools.fresh(i);
      fresh.clear();
      for (std::size_t j = 0; j < k; ++j) {
        if (flag[j])
          fresh.push_back(row[j]);
        else
          old_lists.push(i, row[j]);
      }
      sample_in_place(fresh, sample, rng);
      for (std::size_t j = 0; j < k; ++j)
        if (flag[j] && std::find(fresh.begin(), fresh.end(), row[j]) != fresh.end()) flag[j] = 0;
      for (VertexId v : fresh) new_lists.push(i, v);
    }
    rev_new.build(new_lists, n);
    rev_old.build(old_lists, n);
    for (std::size_t i = 0; i < n; ++i) {
      Rng rng(derive_seed(params.seed, 0x10000 + static_cast<std::uint64_t>(iter), i));
      const std::size_t rn = sample_in_place(rev_new.begin(i), rev_new.size(i), sample, rng);
      const std::size_t ro = sample_in_place(rev_old.begin(i), rev_old.size(i), sample, rng);
      for (std::size_t j = 0; j < rn; ++j) new_lists.push(i, rev_new.begin(i)[j]);
      for (std::size_t j = 0; j < ro; ++j) old_lists.push(i, rev_old.begin(i)[j]);
      new_lists.sort_unique(i);
      old_lists.sort_unique(i);
    }

    // Local join, chunked so the pending pair buffer stays bounded.
    std::size_t updates = 0;
    for (std::size_t lo = 0; lo < n; lo += kChunk) {
      const std::size_t hi = std::min(n, lo + kChunk);
      pairs.clear();
      for (std::size_t i = lo; i < hi; ++i) {
        const VertexId* nl = new_lists.begin(i);
        const VertexId* ol = old_lists.begin(i);
        const std::size_t nn = new_lists.size(i), no = old_lists.size(i);
        for (std::size_t a = 0; a < nn; ++a) {
          for (std::size_t b = a + 1; b < nn; ++b) pairs.emplace_back(nl[a], nl[b]);
          for (std::size_t b = 0; b < no; ++b)
            if (ol[b] != nl[a]) pairs.emplace_back(nl[a], ol[b]);
        }
      }
      pair_dist.resize(pairs.size());
      parallel_for_blocks(pairs.size(), workers, [&](std::size_t b, std::size_t e) {
        for (std::size_t p = b; p < e; ++p)
          pair_dist[p] = x.distance_unchecked(pairs[p].first, pairs[p].second);
      });
      for (std::size_t p = 0; p < pairs.size(); ++p) {
        updates += pools.try_insert(pairs[p].first, pairs[p].second, pair_dist[p]);
        updates += pools.try_insert(pairs[p].second, pairs[p].first, pair_dist[p]);
      }
    }
    if (static_cast<double>(updates) <= stop_below) break;
  }

  return NeighborGraph(n, k, pools.take_ids(), pools.take_dists());
}

}  // namespace detail

/// Approximate kNN graph by NN-Descent local joins over sampled new/old
/// neighbor lists (with reverse neighbors). All reported distances are
/// recomputed from coordinates. The result depends only on (x, k, params):
/// distance evaluation is parallel, pool updates are applied sequentially.
template <class Scalar>
NeighborGraph build_knn_descent(const BasicPointSet<Scalar>& x, std::size_t k,
                                const AnnParams& params = {}, unsigned workers = 1) {
  validate(params);
  const std::size_t n = x.size();
  if (n < 2) throw UsageError("NN-Descent needs n >= 2");
  if (k < 1 || k >= n)
    throw UsageError("NN-Descent needs 1 <= k <= n-1 (k = " + std::to_string(k) +
                     ", n = " + std::to_string(n) + ")");
  // Every vertex sees every other one; the answer is the exact graph.
  if (n <= k + 1) return build_knn_exact(x, k, workers);
  return detail::descent_core(x, k, params, workers);
}

}  // namespace famst
