#pragma once

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "famst/error.hpp"
#include "famst/spanning_tree.hpp"

namespace famst {

// Tree text format: one "u<TAB>v<TAB>weight" line per edge with u < v, lines
// sorted by (u, v), numbers in shortest round-trip form, then a trailer line
// "# total_weight <W>".

namespace detail {

inline std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace detail

inline void write_tree(std::ostream& out, const SpanningTree& tree) {
  std::vector<WeightedEdge> edges = tree.edges;
  for (auto& e : edges)
    if (e.u > e.v) std::swap(e.u, e.v);
  std::sort(edges.begin(), edges.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  for (const auto& e : edges) out << e.u << '\t' << e.v << '\t' << detail::shortest(e.w) << '\n';
  out << "# total_weight " << detail::shortest(tree.total_weight) << '\n';
}

inline void write_tree(const std::filesystem::path& path, const SpanningTree& tree) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot create " + path.string());
  write_tree(out, tree);
  if (!out) throw DataError("write failure on " + path.string());
}

/// Parses the tree format; edges come back sorted by (u, v) and the total
/// weight is taken from the trailer.
inline SpanningTree read_tree(std::istream& in, const std::string& where = "<tree>") {
  SpanningTree tree;
  std::optional<double> total;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& msg) {
    return DataError(where + ": line " + std::to_string(line_no) + ": " + msg);
  };
  auto number = [&](std::string_view s, auto& out) {
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec != std::errc{} || p != s.data() + s.size()) throw fail("bad number '" + std::string(s) + "'");
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (total) throw fail("content after trailer");
    constexpr std::string_view kTrailer = "# total_weight ";
    if (line.rfind(kTrailer, 0) == 0) {
      double w = 0.0;
      number(std::string_view(line).substr(kTrailer.size()), w);
      total = w;
      continue;
    }
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos) throw fail("expected three tab-separated fields");
    const std::string_view sv(line);
    WeightedEdge e;
    number(sv.substr(0, t1), e.u);
    number(sv.substr(t1 + 1, t2 - t1 - 1), e.v);
    number(sv.substr(t2 + 1), e.w);
    if (e.u >= e.v) throw fail("edge is not in canonical u < v order");
    tree.edges.push_back(e);
  }
  if (!total) throw DataError(where + ": missing '# total_weight' trailer");
  tree.total_weight = *total;
  tree.vertex_count = tree.edges.size() + 1;
  return tree;
}

inline SpanningTree read_tree(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return read_tree(in, path.string());
}

}  // namespace famst
