#pragma once

#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iostream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "famst/bridging.hpp"
#include "famst/connectivity.hpp"
#include "famst/error.hpp"
#include "famst/knn_exact.hpp"
#include "famst/nn_descent.hpp"
#include "famst/parallel.hpp"
#include "famst/point_set.hpp"
#include "famst/refinement.hpp"
#include "famst/spanning_tree.hpp"

namespace famst {

enum class AnnBackend { descent, exact };

inline std::string_view to_string(AnnBackend b) noexcept {
  return b == AnnBackend::exact ? "exact" : "descent";
}

using WarningSink = std::function<void(std::string_view)>;

inline void warn_to_stderr(std::string_view msg) { std::cerr << "WARNING: " << msg << '\n'; }

struct FamstConfig {
  std::size_t k = 10;
  std::size_t lambda = 5;
  std::uint64_t seed = 0;
  AnnBackend backend = AnnBackend::descent;
  AnnParams ann{};  ///< ann.seed is overridden by `seed`
  std::size_t max_rounds = 100;
  unsigned workers = 1;  ///< 0 = auto (capped by FAMST_THREADS)
  std::size_t component_warning_threshold = 1000;
  bool warn_lambda_above_k = true;
  WarningSink on_warning = warn_to_stderr;
};

struct RunStats {
  std::size_t n = 0;
  std::size_t d = 0;
  std::size_t k = 0;
  std::size_t lambda = 0;
  std::uint64_t seed = 0;
  std::string backend;
  std::size_t components = 0;       ///< t
  std::size_t bridges = 0;          ///< after deduplication
  std::size_t refine_rounds = 0;    ///< r
  std::size_t refine_changes = 0;
  bool converged = false;
  double ann_seconds = 0.0;
  double connect_seconds = 0.0;
  double refine_seconds = 0.0;
  double mst_seconds = 0.0;
  double total_seconds = 0.0;
  double total_weight = 0.0;
  std::optional<double> relative_error;

  friend bool operator==(const RunStats&, const RunStats&) = default;
};

struct FamstResult {
  SpanningTree tree;
  RunStats stats;
};

inline void validate(const FamstConfig& cfg) {
  if (cfg.k < 1) throw UsageError("k must be >= 1");
  if (cfg.lambda < 1) throw UsageError("lambda must be >= 1");
  if (cfg.max_rounds < 1) throw UsageError("max_rounds must be >= 1");
  validate(cfg.ann);
}

namespace detail {

class Stopwatch {
public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }
  double since_start() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
  std::chrono::steady_clock::time_point last_ = start_;
};

}  // namespace detail

/// Approximate MST: kNN graph, component discovery, sampled bridges between
/// every component pair, bridge refinement to a fixed point, then Kruskal
/// over the union of kNN and bridge edges.
template <class Scalar>
FamstResult famst(const BasicPointSet<Scalar>& x, const FamstConfig& cfg) {
  validate(cfg);
  const std::size_t n = x.size();
  if (n < 2) throw UsageError("need at least 2 points");
  if (cfg.k >= n)
    throw UsageError("k = " + std::to_string(cfg.k) + " must be <= n-1 = " + std::to_string(n - 1));
  if (cfg.lambda > cfg.k && cfg.warn_lambda_above_k && cfg.on_warning)
    cfg.on_warning("lambda (" + std::to_string(cfg.lambda) + ") exceeds k (" +
                   std::to_string(cfg.k) +
                   "); keeping lambda <= k avoids excessive bridging cost");
  const unsigned workers = resolve_workers(cfg.workers);

  detail::Stopwatch clock;
  RunStats stats;
  stats.n = n;
  stats.d = x.dim();
  stats.k = cfg.k;
  stats.lambda = cfg.lambda;
  stats.seed = cfg.seed;
  stats.backend = std::string(to_string(cfg.backend));

  NeighborGraph ann;
  if (cfg.backend == AnnBackend::exact) {
    ann = build_knn_exact(x, cfg.k, workers);
  } else {
    AnnParams p = cfg.ann;
    p.seed = cfg.seed;
    ann = build_knn_descent(x, cfg.k, p, workers);
  }
  stats.ann_seconds = clock.lap();

  const UndirectedGraph graph = symmetrize(ann);
  const ComponentLabeling comps = find_components(graph);
  stats.components = comps.count();
  if (stats.components > cfg.component_warning_threshold && cfg.on_warning)
    cfg.on_warning(std::to_string(stats.components) +
                   " components in the kNN graph; bridging cost grows quadratically, "
                   "consider a larger k");
  BridgeEdgeSet bridges;
  if (stats.components > 1)
    bridges = sample_bridges(x, comps, cfg.lambda, derive_seed(cfg.seed, 0xb41d6e), workers);
  stats.connect_seconds = clock.lap();

  auto [refined, report] = refine_until_converged(x, graph, comps, std::move(bridges),
                                                  cfg.max_rounds, workers);
  refined = dedupe_bridges(refined);
  stats.refine_rounds = report.rounds;
  stats.refine_changes = report.total_changes;
  stats.converged = report.converged;
  stats.bridges = refined.size();
  stats.refine_seconds = clock.lap();

  const auto candidates = assemble_candidate_edges(ann, refined);
  SpanningTree tree = kruskal(n, candidates);
  stats.mst_seconds = clock.lap();
  stats.total_weight = tree.total_weight;
  stats.total_seconds = clock.since_start();
  return {std::move(tree), std::move(stats)};
}

struct EvalOptions {
  std::size_t exact_gate = 20000;  ///< largest n for which the exact MST is computed
  bool require_error = false;      ///< throw instead of skipping the error metric
};

/// Exact MST weight of `x` when n is within the gate, otherwise nullopt
/// (or UsageError when `require_error`).
template <class Scalar>
std::optional<double> exact_weight_within_gate(const BasicPointSet<Scalar>& x,
                                               const EvalOptions& opt) {
  if (x.size() > opt.exact_gate) {
    if (opt.require_error)
      throw UsageError("relative error requested but n = " + std::to_string(x.size()) +
                       " exceeds the exact-MST gate of " + std::to_string(opt.exact_gate) +
                       " and no exact weight was supplied");
    return std::nullopt;
  }
  return exact_mst_prim(x).total_weight;
}

/// One pipeline run with its relative error filled in when an exact weight is
/// supplied or can be computed within the gate.
template <class Scalar>
RunStats evaluate(const BasicPointSet<Scalar>& x, const FamstConfig& cfg,
                  std::optional<double> exact_weight = std::nullopt, EvalOptions opt = {}) {
  if (!exact_weight) exact_weight = exact_weight_within_gate(x, opt);
  RunStats stats = famst(x, cfg).stats;
  if (exact_weight) stats.relative_error = relative_error(stats.total_weight, *exact_weight);
  return stats;
}

template <class Scalar>
RunStats evaluate(const BasicPointSet<Scalar>& x, const FamstConfig& cfg,
                  const SpanningTree& exact) {
  return evaluate(x, cfg, exact.total_weight);
}

struct MeanStd {
  double mean = 0.0;
  double stdev = 0.0;  ///< sample standard deviation (n - 1)
};

inline MeanStd mean_std(std::span<const double> v) {
  MeanStd out;
  if (v.empty()) return out;
  for (double x : v) out.mean += x;
  out.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - out.mean) * (x - out.mean);
    out.stdev = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return out;
}

struct RunSummary {
  std::size_t runs = 0;
  MeanStd total_weight;
  std::optional<MeanStd> relative_error;
  MeanStd components;
  MeanStd refine_rounds;
  MeanStd ann_seconds, connect_seconds, refine_seconds, mst_seconds, total_seconds;
};

/// Mean and spread over repeated runs. The error summary is present only if
/// every run carries a relative error.
inline RunSummary summarize(std::span<const RunStats> runs) {
  RunSummary s;
  s.runs = runs.size();
  auto field = [&](auto get) {
    std::vector<double> v;
    v.reserve(runs.size());
    for (const auto& r : runs) v.push_back(static_cast<double>(get(r)));
    return mean_std(v);
  };
  s.total_weight = field([](const RunStats& r) { return r.total_weight; });
  s.components = field([](const RunStats& r) { return r.components; });
  s.refine_rounds = field([](const RunStats& r) { return r.refine_rounds; });
  s.ann_seconds = field([](const RunStats& r) { return r.ann_seconds; });
  s.connect_seconds = field([](const RunStats& r) { return r.connect_seconds; });
  s.refine_seconds = field([](const RunStats& r) { return r.refine_seconds; });
  s.mst_seconds = field([](const RunStats& r) { return r.mst_seconds; });
  s.total_seconds = field([](const RunStats& r) { return r.total_seconds; });
  bool all_have_error = !runs.empty();
  for (const auto& r : runs) all_have_error = all_have_error && r.relative_error.has_value();
  if (all_have_error) s.relative_error = field([](const RunStats& r) { return *r.relative_error; });
  return s;
}

/// `runs` pipeline runs with seeds cfg.seed, cfg.seed + 1, ...; the exact
/// weight is computed at most once.
template <class Scalar>
std::vector<RunStats> evaluate_runs(const BasicPointSet<Scalar>& x, FamstConfig cfg,
                                    std::size_t runs, std::optional<double> exact_weight = {},
                                    EvalOptions opt = {}) {
  if (runs < 1) throw UsageError("runs must be >= 1");
  if (!exact_weight) exact_weight = exact_weight_within_gate(x, opt);
  std::vector<RunStats> out;
  out.reserve(runs);
  const std::uint64_t base = cfg.seed;
  for (std::size_t r = 0; r < runs; ++r) {
    cfg.seed = base + r;
    out.push_back(evaluate(x, cfg, exact_weight, opt));
    cfg.warn_lambda_above_k = false;  // once per batch
  }
  return out;
}

}  // namespace famst
