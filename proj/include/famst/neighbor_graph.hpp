#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "famst/error.hpp"
#include "famst/point_set.hpp"

namespace famst {

/// Directed k-nearest-neighbor graph: row i holds k neighbor ids of vertex i
/// and their distances, sorted ascending by (distance, id).
class NeighborGraph {
public:
  NeighborGraph() = default;

  NeighborGraph(std::size_t n, std::size_t k, std::vector<VertexId> ids, std::vector<double> dists)
      : n_(n), k_(k), ids_(std::move(ids)), dists_(std::move(dists)) {
    if (ids_.size() != n_ * k_ || dists_.size() != n_ * k_)
      throw UsageError("neighbor graph arrays must hold n * k = " + std::to_string(n_ * k_) +
                       " entries");
    for (VertexId id : ids_)
      if (id >= n_) throw UsageError("neighbor id " + std::to_string(id) + " out of range");
  }

  std::size_t size() const noexcept { return n_; }
  std::size_t k() const noexcept { return k_; }

  std::span<const VertexId> neighbors(std::size_t i) const noexcept {
    return {ids_.data() + i * k_, k_};
  }
  std::span<const double> distances(std::size_t i) const noexcept {
    return {dists_.data() + i * k_, k_};
  }

  const std::vector<VertexId>& ids() const noexcept { return ids_; }
  const std::vector<double>& dists() const noexcept { return dists_; }

  friend bool operator==(const NeighborGraph&, const NeighborGraph&) = default;

private:
  std::size_t n_ = 0;
  std::size_t k_ = 0;
  std::vector<VertexId> ids_;
  std::vector<double> dists_;
};

/// Throws InternalError unless every row is self-free, duplicate-free and
/// sorted by (distance, id).
inline void validate_structure(const NeighborGraph& g) {
  for (std::size_t i = 0; i < g.size(); ++i) {
    auto ids = g.neighbors(i);
    auto ds = g.distances(i);
    for (std::size_t j = 0; j < g.k(); ++j) {
      if (ids[j] == i) throw InternalError("row " + std::to_string(i) + " lists itself");
      if (ds[j] < 0.0 || !std::isfinite(ds[j]))
        throw InternalError("row " + std::to_string(i) + " has an invalid distance");
      if (j > 0 && std::pair(ds[j], ids[j]) <= std::pair(ds[j - 1], ids[j - 1]))
        throw InternalError("row " + std::to_string(i) + " is not strictly sorted by (distance, id)");
    }
  }
}

/// Throws InternalError unless every stored distance matches the point set.
template <class Scalar>
void validate_distances(const NeighborGraph& g, const BasicPointSet<Scalar>& x,
                        double rel_tol = 1e-9) {
  if (g.size() != x.size()) throw InternalError("neighbor graph and point set disagree on n");
  for (std::size_t i = 0; i < g.size(); ++i) {
    auto ids = g.neighbors(i);
    auto ds = g.distances(i);
    for (std::size_t j = 0; j < g.k(); ++j) {
      const double truth = x.distance(static_cast<VertexId>(i), ids[j]);
      if (std::abs(truth - ds[j]) > rel_tol * std::max(1.0, truth))
        throw InternalError("stored distance mismatch at row " + std::to_string(i));
    }
  }
}

/// Mean over rows of |approx row ∩ exact row| / k.
inline double recall(const NeighborGraph& approx, const NeighborGraph& exact) {
  if (approx.size() != exact.size() || approx.k() != exact.k())
    throw UsageError("recall needs graphs of identical shape (got n=" +
                     std::to_string(approx.size()) + ",k=" + std::to_string(approx.k()) +
                     " vs n=" + std::to_string(exact.size()) + ",k=" + std::to_string(exact.k()) +
                     ")");
  if (approx.size() == 0 || approx.k() == 0) return 1.0;
  std::vector<VertexId> a, b, common;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < approx.size(); ++i) {
    auto ra = approx.neighbors(i);
    auto rb = exact.neighbors(i);
    a.assign(ra.begin(), ra.end());
    b.assign(rb.begin(), rb.end());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    common.clear();
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
    hits += common.size();
  }
  return static_cast<double>(hits) / static_cast<double>(approx.size() * approx.k());
}

}  // namespace famst
