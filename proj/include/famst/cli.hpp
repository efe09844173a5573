#pragma once

#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "CLI11.hpp"

#include "famst/error.hpp"
#include "famst/io/blobs.hpp"
#include "famst/io/csv.hpp"
#include "famst/io/matrix_file.hpp"
#include "famst/io/stats_file.hpp"
#include "famst/io/tree_file.hpp"
#include "famst/pipeline.hpp"

namespace famst::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kInternal = 3 };

/// FMAT files are recognized by their magic; anything else is read as CSV.
inline AnyPointSet load_points(const std::filesystem::path& path, int csv_precision = 4) {
  if (!std::filesystem::exists(path)) throw DataError("cannot open " + path.string());
  if (is_matrix_file(path)) return load_matrix(path);
  if (csv_precision == 8) return load_csv<double>(path);
  return load_csv<float>(path);
}

namespace detail {

inline std::string fmt(double v) { return famst::detail::shortest(v); }

struct CommonOptions {
  std::size_t k = 10;
  std::size_t lambda = 5;
  std::uint64_t seed = 0;
  std::string backend = "descent";
  std::size_t max_rounds = 100;
  unsigned threads = 0;
};

inline void add_common(CLI::App* app, CommonOptions& o) {
  app->add_option("--k", o.k, "neighbors per point")->capture_default_str();
  app->add_option("--lambda", o.lambda, "bridges kept per component pair")->capture_default_str();
  app->add_option("--seed", o.seed, "random seed")->capture_default_str();
  app->add_option("--backend", o.backend, "kNN builder")
      ->check(CLI::IsMember({"descent", "exact"}))
      ->capture_default_str();
  app->add_option("--max-rounds", o.max_rounds, "refinement round cap")->capture_default_str();
  app->add_option("--threads", o.threads, "worker threads (0 = auto, capped by FAMST_THREADS)")
      ->capture_default_str();
}

inline FamstConfig make_config(const CommonOptions& o, std::ostream& err) {
  FamstConfig cfg;
  cfg.k = o.k;
  cfg.lambda = o.lambda;
  cfg.seed = o.seed;
  cfg.backend = o.backend == "exact" ? AnnBackend::exact : AnnBackend::descent;
  cfg.max_rounds = o.max_rounds;
  cfg.workers = o.threads;
  cfg.on_warning = [&err](std::string_view msg) { err << "WARNING: " << msg << '\n'; };
  return cfg;
}

inline void write_report_header(std::ostream& out) {
  out << "run\tseed\tcomponents\trounds\ttotal_weight\trel_error_pct\tann_s\tconnect_s\trefine_s"
         "\tmst_s\ttotal_s\n";
}

inline void write_report_line(std::ostream& out, const std::string& label, std::uint64_t seed,
                              double components, double rounds, double weight,
                              std::optional<double> rel_pct, double ann, double connect,
                              double refine, double mst, double total) {
  out << label << '\t' << seed << '\t' << fmt(components) << '\t' << fmt(rounds) << '\t'
      << fmt(weight) << '\t' << (rel_pct ? fmt(*rel_pct) : std::string("NA")) << '\t' << fmt(ann)
      << '\t' << fmt(connect) << '\t' << fmt(refine) << '\t' << fmt(mst) << '\t' << fmt(total)
      << '\n';
}

inline std::optional<double> percent(std::optional<double> v) {
  if (v) return *v * 100.0;
  return std::nullopt;
}

}  // namespace detail

inline int cmd_build(const std::string& input, const std::string& output, const std::string& stats,
                     const detail::CommonOptions& o, int precision, std::ostream& out,
                     std::ostream& err) {
  const auto cfg = detail::make_config(o, err);
  const auto points = load_points(input, precision);
  const FamstResult res = std::visit([&](const auto& x) { return famst(x, cfg); }, points);
  write_tree(output, res.tree);
  if (!stats.empty()) write_stats(stats, res.stats);
  out << "n=" << res.stats.n << " d=" << res.stats.d << " components=" << res.stats.components
      << " rounds=" << res.stats.refine_rounds << " total_weight=" << detail::fmt(res.stats.total_weight)
      << " seconds=" << detail::fmt(res.stats.total_seconds) << '\n';
  return kOk;
}

inline int cmd_eval(const std::string& input, std::size_t runs, std::size_t gate,
                    const detail::CommonOptions& o, int precision, std::ostream& out,
                    std::ostream& err) {
  const auto cfg = detail::make_config(o, err);
  const auto points = load_points(input, precision);
  EvalOptions opt;
  opt.exact_gate = gate;
  const auto stats = std::visit(
      [&](const auto& x) { return evaluate_runs(x, cfg, runs, std::nullopt, opt); }, points);
  const auto& first = stats.front();
  out << "# n=" << first.n << " d=" << first.d << " k=" << first.k << " lambda=" << first.lambda
      << " backend=" << first.backend << " runs=" << runs << '\n';
  if (!first.relative_error)
    out << "# note: n = " << first.n << " exceeds the exact gate of " << gate
        << "; relative error not computed, timings only\n";
  detail::write_report_header(out);
  for (std::size_t r = 0; r < stats.size(); ++r) {
    const auto& s = stats[r];
    detail::write_report_line(out, std::to_string(r + 1), s.seed,
                              static_cast<double>(s.components),
                              static_cast<double>(s.refine_rounds), s.total_weight,
                              detail::percent(s.relative_error), s.ann_seconds, s.connect_seconds,
                              s.refine_seconds, s.mst_seconds, s.total_seconds);
  }
  const RunSummary sum = summarize(stats);
  std::optional<double> mean_err, sd_err;
  if (sum.relative_error) {
    mean_err = sum.relative_error->mean * 100.0;
    sd_err = sum.relative_error->stdev * 100.0;
  }
  detail::write_report_line(out, "mean", first.seed, sum.components.mean, sum.refine_rounds.mean,
                            sum.total_weight.mean, mean_err, sum.ann_seconds.mean,
                            sum.connect_seconds.mean, sum.refine_seconds.mean,
                            sum.mst_seconds.mean, sum.total_seconds.mean);
  detail::write_report_line(out, "stdev", first.seed, sum.components.stdev,
                            sum.refine_rounds.stdev, sum.total_weight.stdev, sd_err,
                            sum.ann_seconds.stdev, sum.connect_seconds.stdev,
                            sum.refine_seconds.stdev, sum.mst_seconds.stdev,
                            sum.total_seconds.stdev);
  return kOk;
}

struct BenchOptions {
  std::vector<std::size_t> sizes;
  std::vector<std::size_t> dims;
  std::size_t repeats = 1;
  std::size_t centers = 10;
  double cluster_std = 1.0;
  std::string output;
};

inline int cmd_bench(const BenchOptions& b, const detail::CommonOptions& o, std::ostream& out,
                     std::ostream& err) {
  auto cfg = detail::make_config(o, err);
  if (b.sizes.empty() || b.dims.empty()) throw UsageError("--sizes and --dims must be non-empty");
  if (b.repeats < 1) throw UsageError("--repeats must be >= 1");
  std::ofstream csv(b.output, std::ios::trunc);
  if (!csv) throw DataError("cannot create " + b.output);
  csv << "n,d,repeat,seed,components,refine_rounds,ann_seconds,connect_seconds,refine_seconds,"
         "mst_seconds,total_seconds,total_weight\n";
  std::size_t rows = 0;
  for (std::size_t n : b.sizes) {
    for (std::size_t d : b.dims) {
      for (std::size_t r = 0; r < b.repeats; ++r) {
        BlobSpec spec;
        spec.n = n;
        spec.d = d;
        spec.centers = std::min(b.centers, n);
        spec.cluster_std = b.cluster_std;
        spec.seed = o.seed + r;
        const auto x = gen_blobs<float>(spec);
        cfg.seed = o.seed + r;
        const RunStats s = famst(x, cfg).stats;
        cfg.warn_lambda_above_k = false;
        csv << s.n << ',' << s.d << ',' << r << ',' << s.seed << ',' << s.components << ','
            << s.refine_rounds << ',' << detail::fmt(s.ann_seconds) << ','
            << detail::fmt(s.connect_seconds) << ',' << detail::fmt(s.refine_seconds) << ','
            << detail::fmt(s.mst_seconds) << ',' << detail::fmt(s.total_seconds) << ','
            << detail::fmt(s.total_weight) << '\n';
        ++rows;
      }
    }
  }
  if (!csv) throw DataError("write failure on " + b.output);
  out << "wrote " << rows << " rows to " << b.output << '\n';
  return kOk;
}

inline int cmd_gen_blobs(const BlobSpec& spec, int precision, const std::string& output,
                         std::ostream& out) {
  if (precision == 8)
    save_matrix(output, gen_blobs<double>(spec));
  else
    save_matrix(output, gen_blobs<float>(spec));
  out << "wrote " << spec.n << "x" << spec.d << " blobs to " << output << '\n';
  return kOk;
}

/// Parses arguments and runs one subcommand. Errors go to `err` with a
/// USAGE:/DATA:/INTERNAL: prefix and map to exit codes 1/2/3.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fast approximate minimum spanning trees for high-dimensional point sets", "famst"};
  app.require_subcommand(1);

  detail::CommonOptions common;
  std::string input, output, stats_path;
  int precision = 4;
  std::size_t runs = 10, gate = 20000;
  BenchOptions bench;
  BlobSpec blobs;

  auto* build = app.add_subcommand("build", "compute an approximate MST and write it");
  build->add_option("--input", input, "CSV or FMAT point file")->required();
  build->add_option("--output", output, "tree file to write")->required();
  build->add_option("--stats", stats_path, "JSON stats file to write");
  build->add_option("--precision", precision, "CSV storage precision in bytes")
      ->check(CLI::IsMember({4, 8}));
  detail::add_common(build, common);

  auto* eval = app.add_subcommand("eval", "repeated runs with relative error against the exact MST");
  eval->add_option("--input", input, "CSV or FMAT point file")->required();
  eval->add_option("--runs", runs, "number of seeds")->capture_default_str();
  eval->add_option("--exact-gate", gate, "largest n for the exact MST")->capture_default_str();
  eval->add_option("--precision", precision, "CSV storage precision in bytes")
      ->check(CLI::IsMember({4, 8}));
  detail::add_common(eval, common);

  auto* bench_cmd = app.add_subcommand("bench", "timing grid over generated blobs");
  bench_cmd->add_option("--sizes", bench.sizes, "point counts")->delimiter(',')->required();
  bench_cmd->add_option("--dims", bench.dims, "dimensionalities")->delimiter(',')->required();
  bench_cmd->add_option("--repeats", bench.repeats, "runs per cell")->capture_default_str();
  bench_cmd->add_option("--centers", bench.centers, "blob centers")->capture_default_str();
  bench_cmd->add_option("--std", bench.cluster_std, "blob standard deviation")->capture_default_str();
  bench_cmd->add_option("--output", bench.output, "CSV table to write")->required();
  detail::add_common(bench_cmd, common);

  auto* gen = app.add_subcommand("gen-blobs", "write Gaussian blobs as an FMAT file");
  gen->add_option("--n", blobs.n, "points")->required();
  gen->add_option("--d", blobs.d, "dimensions")->required();
  gen->add_option("--centers", blobs.centers, "cluster count")->capture_default_str();
  gen->add_option("--std", blobs.cluster_std, "cluster standard deviation")->capture_default_str();
  gen->add_option("--box", blobs.box, "centers drawn from [-box, box]^d")->capture_default_str();
  gen->add_option("--seed", blobs.seed, "random seed")->capture_default_str();
  gen->add_option("--precision", precision, "payload precision in bytes")
      ->check(CLI::IsMember({4, 8}));
  gen->add_option("--output", output, "FMAT file to write")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "USAGE: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (build->parsed()) return cmd_build(input, output, stats_path, common, precision, out, err);
    if (eval->parsed()) return cmd_eval(input, runs, gate, common, precision, out, err);
    if (bench_cmd->parsed()) return cmd_bench(bench, common, out, err);
    if (gen->parsed()) return cmd_gen_blobs(blobs, precision, output, out);
  } catch (const UsageError& e) {
    err << "USAGE: " << e.what() << '\n';
    return kUsage;
  } catch (const DataError& e) {
    err << "DATA: " << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    err << "INTERNAL: " << e.what() << '\n';
    return kInternal;
  }
  err << "USAGE: no subcommand\n";
  return kUsage;
}

}  // namespace famst::cli
