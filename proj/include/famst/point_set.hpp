#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "famst/error.hpp"

namespace famst {

using VertexId = std::uint32_t;

namespace detail {

// Four independent accumulators give the compiler room to overlap the adds.
// Summation order is fixed, so the result is reproducible and symmetric in
// (a, b) because (a - b)^2 == (b - a)^2 exactly.
template <class T>
inline double squared_l2(const T* a, const T* b, std::size_t d) noexcept {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  std::size_t j = 0;
  for (; j + 4 <= d; j += 4) {
    const double t0 = static_cast<double>(a[j]) - static_cast<double>(b[j]);
    const double t1 = static_cast<double>(a[j + 1]) - static_cast<double>(b[j + 1]);
    const double t2 = static_cast<double>(a[j + 2]) - static_cast<double>(b[j + 2]);
    const double t3 = static_cast<double>(a[j + 3]) - static_cast<double>(b[j + 3]);
    s0 += t0 * t0;
    s1 += t1 * t1;
    s2 += t2 * t2;
    s3 += t3 * t3;
  }
  for (; j < d; ++j) {
    const double t = static_cast<double>(a[j]) - static_cast<double>(b[j]);
    s0 += t * t;
  }
  return (s0 + s1) + (s2 + s3);
}

}  // namespace detail

/// Immutable n x d row-major coordinate matrix. `Scalar` is the storage
/// precision (float or double); all distance arithmetic is done in double.
template <class Scalar>
class BasicPointSet {
  static_assert(std::is_floating_point_v<Scalar>);

public:
  using value_type = Scalar;

  BasicPointSet(std::size_t n, std::size_t d, std::vector<Scalar> data)
      : n_(n), d_(d), data_(std::move(data)) {
    if (n_ < 1 || d_ < 1) throw UsageError("point set needs n >= 1 and d >= 1");
    if (data_.size() != n_ * d_)
      throw UsageError("point set payload has " + std::to_string(data_.size()) +
                       " values, expected " + std::to_string(n_ * d_));
    for (std::size_t i = 0; i < data_.size(); ++i) {
      if (!std::isfinite(data_[i]))
        throw DataError("non-finite coordinate at row " + std::to_string(i / d_) + ", column " +
                        std::to_string(i % d_));
    }
  }

  std::size_t size() const noexcept { return n_; }
  std::size_t dim() const noexcept { return d_; }

  std::span<const Scalar> row(std::size_t i) const noexcept {
    return {data_.data() + i * d_, d_};
  }
  const Scalar* row_ptr(std::size_t i) const noexcept { return data_.data() + i * d_; }
  std::span<const Scalar> data() const noexcept { return data_; }

  /// Squared Euclidean distance. Comparison use only; never sum these.
  double distance_squared(VertexId u, VertexId v) const {
    check(u);
    check(v);
    return detail::squared_l2(row_ptr(u), row_ptr(v), d_);
  }

  double distance(VertexId u, VertexId v) const { return std::sqrt(distance_squared(u, v)); }

  // Unchecked variants for hot loops where ids are known valid.
  double distance_squared_unchecked(VertexId u, VertexId v) const noexcept {
    return detail::squared_l2(row_ptr(u), row_ptr(v), d_);
  }
  double distance_unchecked(VertexId u, VertexId v) const noexcept {
    return std::sqrt(distance_squared_unchecked(u, v));
  }

  friend bool operator==(const BasicPointSet&, const BasicPointSet&) = default;

private:
  void check(VertexId v) const {
    if (v >= n_)
      throw UsageError("vertex id " + std::to_string(v) + " out of range for n = " +
                       std::to_string(n_));
  }

  std::size_t n_;
  std::size_t d_;
  std::vector<Scalar> data_;
};

using PointSet = BasicPointSet<float>;
using PointSetF64 = BasicPointSet<double>;

template <class Scalar>
double distance(const BasicPointSet<Scalar>& x, VertexId u, VertexId v) {
  return x.distance(u, v);
}

template <class Scalar>
double distance_squared(const BasicPointSet<Scalar>& x, VertexId u, VertexId v) {
  return x.distance_squared(u, v);
}

}  // namespace famst
