#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "famst/error.hpp"
#include "famst/point_set.hpp"
#include "famst/random.hpp"

namespace famst {

/// Isotropic Gaussian clusters around centers drawn uniformly from
/// [-box, box]^d. Sample counts per center follow the usual even split with
/// the remainder going to the first centers.
struct BlobSpec {
  std::size_t n = 1000;
  std::size_t d = 2;
  std::size_t centers = 10;
  double cluster_std = 1.0;
  double box = 10.0;
  std::uint64_t seed = 0;
};

template <class Scalar = float>
struct LabeledBlobs {
  BasicPointSet<Scalar> points;
  std::vector<std::uint32_t> labels;  ///< center index per point
  std::vector<double> centers;        ///< centers x d, row-major
};

inline void validate(const BlobSpec& s) {
  if (s.n < 1 || s.d < 1 || s.centers < 1) throw UsageError("blobs need n, d, centers >= 1");
  if (s.centers > s.n) throw UsageError("blobs need centers <= n");
  if (!(s.cluster_std >= 0.0)) throw UsageError("blob standard deviation must be >= 0");
  if (!(s.box > 0.0)) throw UsageError("blob box half-width must be > 0");
}

template <class Scalar = float>
LabeledBlobs<Scalar> gen_blobs_labeled(const BlobSpec& spec) {
  validate(spec);
  Rng rng(spec.seed);
  std::uniform_real_distribution<double> uniform(-spec.box, spec.box);
  std::normal_distribution<double> normal(0.0, 1.0);

  std::vector<double> centers(spec.centers * spec.d);
  for (double& c : centers) c = uniform(rng);

  std::vector<Scalar> data;
  data.reserve(spec.n * spec.d);
  std::vector<std::uint32_t> labels;
  labels.reserve(spec.n);
  const std::size_t base = spec.n / spec.centers;
  const std::size_t extra = spec.n % spec.centers;
  for (std::size_t c = 0; c < spec.centers; ++c) {
    const std::size_t count = base + (c < extra ? 1 : 0);
    for (std::size_t s = 0; s < count; ++s) {
      for (std::size_t j = 0; j < spec.d; ++j)
        data.push_back(
            static_cast<Scalar>(centers[c * spec.d + j] + spec.cluster_std * normal(rng)));
      labels.push_back(static_cast<std::uint32_t>(c));
    }
  }
  return {BasicPointSet<Scalar>(spec.n, spec.d, std::move(data)), std::move(labels),
          std::move(centers)};
}

template <class Scalar = float>
BasicPointSet<Scalar> gen_blobs(const BlobSpec& spec) {
  return gen_blobs_labeled<Scalar>(spec).points;
}

/// Points uniform in [0, 1)^d.
template <class Scalar = float>
BasicPointSet<Scalar> gen_uniform(std::size_t n, std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<Scalar> data(n * d);
  for (auto& v : data) v = static_cast<Scalar>(uniform(rng));
  return BasicPointSet<Scalar>(n, d, std::move(data));
}

}  // namespace famst
