#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"

#include "famst/error.hpp"
#include "famst/pipeline.hpp"

namespace famst {

/// RunStats as a JSON object with a fixed key order. `relative_error` is
/// omitted when it was not computed.
inline nlohmann::ordered_json to_json(const RunStats& s) {
  nlohmann::ordered_json j;
  j["n"] = s.n;
  j["d"] = s.d;
  j["k"] = s.k;
  j["lambda"] = s.lambda;
  j["seed"] = s.seed;
  j["backend"] = s.backend;
  j["components"] = s.components;
  j["bridges"] = s.bridges;
  j["refine_rounds"] = s.refine_rounds;
  j["refine_changes"] = s.refine_changes;
  j["converged"] = s.converged;
  j["ann_seconds"] = s.ann_seconds;
  j["connect_seconds"] = s.connect_seconds;
  j["refine_seconds"] = s.refine_seconds;
  j["mst_seconds"] = s.mst_seconds;
  j["total_seconds"] = s.total_seconds;
  j["total_weight"] = s.total_weight;
  if (s.relative_error) j["relative_error"] = *s.relative_error;
  return j;
}

inline RunStats stats_from_json(const nlohmann::ordered_json& j) {
  try {
    RunStats s;
    s.n = j.at("n").get<std::size_t>();
    s.d = j.at("d").get<std::size_t>();
    s.k = j.at("k").get<std::size_t>();
    s.lambda = j.at("lambda").get<std::size_t>();
    s.seed = j.at("seed").get<std::uint64_t>();
    s.backend = j.at("backend").get<std::string>();
    s.components = j.at("components").get<std::size_t>();
    s.bridges = j.at("bridges").get<std::size_t>();
    s.refine_rounds = j.at("refine_rounds").get<std::size_t>();
    s.refine_changes = j.at("refine_changes").get<std::size_t>();
    s.converged = j.at("converged").get<bool>();
    s.ann_seconds = j.at("ann_seconds").get<double>();
    s.connect_seconds = j.at("connect_seconds").get<double>();
    s.refine_seconds = j.at("refine_seconds").get<double>();
    s.mst_seconds = j.at("mst_seconds").get<double>();
    s.total_seconds = j.at("total_seconds").get<double>();
    s.total_weight = j.at("total_weight").get<double>();
    if (j.contains("relative_error")) s.relative_error = j.at("relative_error").get<double>();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed stats object: ") + e.what());
  }
}

inline void write_stats(const std::filesystem::path& path, const RunStats& s) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot create " + path.string());
  out << to_json(s).dump(2) << '\n';
  if (!out) throw DataError("write failure on " + path.string());
}

inline RunStats read_stats(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  nlohmann::ordered_json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  return stats_from_json(j);
}

}  // namespace famst
