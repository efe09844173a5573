#pragma once

#include <cstddef>
#include <numeric>
#include <utility>
#include <vector>

#include "famst/point_set.hpp"

namespace famst {

/// Disjoint-set forest with path compression and union by size.
class UnionFind {
public:
  explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1), sets_(n) {
    std::iota(parent_.begin(), parent_.end(), VertexId{0});
  }

  VertexId find(VertexId v) noexcept {
    VertexId root = v;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[v] != root) v = std::exchange(parent_[v], root);
    return root;
  }

  /// Returns false if a and b were already in the same set.
  bool unite(VertexId a, VertexId b) noexcept {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    --sets_;
    return true;
  }

  bool same(VertexId a, VertexId b) noexcept { return find(a) == find(b); }
  std::size_t set_count() const noexcept { return sets_; }
  std::size_t size() const noexcept { return parent_.size(); }

private:
  std::vector<VertexId> parent_;
  std::vector<std::size_t> size_;
  std::size_t sets_;
};

}  // namespace famst
