#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <initializer_list>
#include <vector>

#include <gtest/gtest.h>

#include "famst/neighbor_graph.hpp"
#include "famst/point_set.hpp"
#include "famst/spanning_tree.hpp"

namespace famst::testing {

template <class Scalar = double>
BasicPointSet<Scalar> points(std::initializer_list<std::initializer_list<double>> rows) {
  std::vector<Scalar> data;
  std::size_t d = 0;
  for (const auto& r : rows) {
    d = r.size();
    for (double v : r) data.push_back(static_cast<Scalar>(v));
  }
  return BasicPointSet<Scalar>(rows.size(), d, std::move(data));
}

/// 1-D points at the given coordinates.
inline BasicPointSet<double> line(std::initializer_list<double> xs) {
  return BasicPointSet<double>(xs.size(), 1, std::vector<double>(xs));
}

/// Neighbor graph from explicit id rows; distances recomputed from x.
template <class Scalar>
NeighborGraph graph_from_rows(const BasicPointSet<Scalar>& x,
                              const std::vector<std::vector<VertexId>>& rows) {
  const std::size_t k = rows.empty() ? 0 : rows.front().size();
  std::vector<VertexId> ids;
  std::vector<double> ds;
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (VertexId j : rows[i]) {
      ids.push_back(j);
      ds.push_back(x.distance(static_cast<VertexId>(i), j));
    }
  return NeighborGraph(rows.size(), k, std::move(ids), std::move(ds));
}

/// Every tree a test produces goes through this replay.
inline void expect_valid_tree(const SpanningTree& tree, std::size_t n) {
  EXPECT_NO_THROW(validate_spanning_tree(tree, n));
}

/// Fresh directory under the system temp dir, removed on destruction.
class ScratchDir {
 public:
  ScratchDir() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    std::string name = "famst_";
    if (info) name += std::string(info->test_suite_name()) + "_" + info->name();
    path_ = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  std::filesystem::path operator/(const std::string& leaf) const { return path_ / leaf; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void spit(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << content;
}

}  // namespace famst::testing
