#include <bit>
#include <cmath>
#include <cstring>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "famst/io/blobs.hpp"
#include "famst/io/csv.hpp"
#include "famst/io/matrix_file.hpp"
#include "famst/io/stats_file.hpp"
#include "famst/io/tree_file.hpp"
#include "famst/pipeline.hpp"
#include "test_support.hpp"

namespace famst {
namespace {

using testing::ScratchDir;
using testing::slurp;
using testing::spit;

template <class Scalar = float>
BasicPointSet<Scalar> csv(const std::string& text) {
  std::istringstream in(text);
  return read_csv<Scalar>(in);
}

template <class Scalar>
bool bit_equal(const BasicPointSet<Scalar>& a, const BasicPointSet<Scalar>& b) {
  if (a.size() != b.size() || a.dim() != b.dim()) return false;
  return std::memcmp(a.data().data(), b.data().data(), a.data().size() * sizeof(Scalar)) == 0;
}

std::string error_of(const std::string& text) {
  try {
    csv(text);
  } catch (const DataError& e) {
    return e.what();
  }
  return {};
}

TEST(Csv, ParsesPlainRows) {
  auto x = csv("0,1\n2.5,-3\n");
  ASSERT_EQ(x.size(), 2u);
  ASSERT_EQ(x.dim(), 2u);
  EXPECT_EQ(x.row(1)[0], 2.5f);
  EXPECT_EQ(x.row(1)[1], -3.0f);
}

TEST(Csv, SkipsHeaderAndBlankLines) {
  auto x = csv("x,y\n\n1,2\n  \n3,4\n");
  EXPECT_EQ(x.size(), 2u);
  EXPECT_EQ(x.row(0)[0], 1.0f);
}

TEST(Csv, ToleratesWhitespaceAndCrlf) {
  auto x = csv(" 1 , 2 \r\n3,4\r\n");
  EXPECT_EQ(x.size(), 2u);
  EXPECT_EQ(x.row(0)[1], 2.0f);
}

TEST(Csv, RaggedRowNamesLine) {
  const auto msg = error_of("1,2\n3\n");
  EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
}

TEST(Csv, NonNumericCellNamesLineAndColumn) {
  const auto msg = error_of("1,2\n3,abc\n");
  EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
  EXPECT_NE(msg.find("column 2"), std::string::npos) << msg;
}

TEST(Csv, NonFiniteRejected) {
  EXPECT_NE(error_of("1,2\nnan,1\n").find("non-finite"), std::string::npos);
  EXPECT_NE(error_of("1,inf\n").find("non-finite"), std::string::npos);
}

TEST(Csv, EmptyInputRejected) {
  EXPECT_THROW(csv(""), DataError);
  EXPECT_THROW(csv("a,b\n"), DataError);
}

TEST(Csv, RoundTripsThroughShortestFormatting) {
  auto x = gen_blobs<float>({200, 5, 3, 1.0, 10.0, 11});
  std::ostringstream out;
  write_csv(out, x);
  EXPECT_TRUE(bit_equal(csv<float>(out.str()), x));
  auto y = gen_uniform<double>(50, 3, 2);
  std::ostringstream out2;
  write_csv(out2, y);
  EXPECT_TRUE(bit_equal(csv<double>(out2.str()), y));
}

TEST(Csv, MissingFileIsDataError) {
  EXPECT_THROW(load_csv("/nonexistent/points.csv"), DataError);
}

TEST(MatrixFile, RoundTripIsBitExact) {
  ScratchDir dir;
  auto x = gen_blobs<float>({300, 7, 4, 1.0, 10.0, 5});
  save_matrix(dir / "a.fmat", x);
  EXPECT_EQ(std::filesystem::file_size(dir / "a.fmat"), kMatrixHeaderBytes + 300 * 7 * 4);
  auto back = load_matrix(dir / "a.fmat");
  ASSERT_TRUE(std::holds_alternative<PointSet>(back));
  EXPECT_TRUE(bit_equal(std::get<PointSet>(back), x));

  auto y = gen_uniform<double>(20, 3, 1);
  save_matrix(dir / "b.fmat", y);
  auto back_y = load_matrix(dir / "b.fmat");
  ASSERT_TRUE(std::holds_alternative<PointSetF64>(back_y));
  EXPECT_TRUE(bit_equal(std::get<PointSetF64>(back_y), y));
}

TEST(MatrixFile, HeaderLayout) {
  ScratchDir dir;
  save_matrix(dir / "h.fmat", PointSet(2, 3, {1, 2, 3, 4, 5, 6}));
  const auto bytes = slurp(dir / "h.fmat");
  ASSERT_EQ(bytes.size(), 22u + 24u);
  EXPECT_EQ(bytes.substr(0, 4), "FMAT");
  EXPECT_EQ(bytes[4], 1);
  EXPECT_EQ(bytes[5], 4);
  EXPECT_EQ(bytes[6], 2);
  EXPECT_EQ(bytes[14], 3);
  float first;
  std::memcpy(&first, bytes.data() + 22, 4);
  EXPECT_EQ(first, 1.0f);
  auto h = read_matrix_header(dir / "h.fmat");
  EXPECT_EQ(h.n, 2u);
  EXPECT_EQ(h.d, 3u);
  EXPECT_EQ(h.precision, 4u);
}

TEST(MatrixFile, RejectsCorruptFiles) {
  ScratchDir dir;
  save_matrix(dir / "ok.fmat", gen_uniform<float>(10, 2, 1));
  const auto good = slurp(dir / "ok.fmat");

  spit(dir / "trunc.fmat", good.substr(0, good.size() - 1));
  EXPECT_THROW(load_matrix(dir / "trunc.fmat"), DataError);
  spit(dir / "head.fmat", good.substr(0, 10));
  EXPECT_THROW(load_matrix(dir / "head.fmat"), DataError);
  spit(dir / "extra.fmat", good + "x");
  EXPECT_THROW(load_matrix(dir / "extra.fmat"), DataError);

  auto bad = good;
  bad[0] = 'G';
  spit(dir / "magic.fmat", bad);
  EXPECT_THROW(load_matrix(dir / "magic.fmat"), DataError);
  EXPECT_FALSE(is_matrix_file(dir / "magic.fmat"));

  bad = good;
  bad[4] = 2;
  spit(dir / "version.fmat", bad);
  EXPECT_THROW(load_matrix(dir / "version.fmat"), DataError);

  bad = good;
  bad[5] = 2;
  spit(dir / "precision.fmat", bad);
  EXPECT_THROW(load_matrix(dir / "precision.fmat"), DataError);

  EXPECT_THROW(load_matrix(dir / "missing.fmat"), DataError);
}

TEST(MatrixFile, NonFinitePayloadRejected) {
  ScratchDir dir;
  save_matrix(dir / "ok.fmat", PointSet(1, 2, {1, 2}));
  auto bytes = slurp(dir / "ok.fmat");
  const auto nan_bits = std::bit_cast<std::uint32_t>(std::numeric_limits<float>::quiet_NaN());
  std::memcpy(bytes.data() + 22, &nan_bits, 4);
  spit(dir / "nan.fmat", bytes);
  EXPECT_THROW(load_matrix(dir / "nan.fmat"), DataError);
}

TEST(MatrixFile, WidensOnRequest) {
  ScratchDir dir;
  auto x = gen_uniform<float>(15, 4, 3);
  save_matrix(dir / "f.fmat", x);
  auto wide = load_matrix_as<double>(dir / "f.fmat");
  for (std::size_t i = 0; i < x.data().size(); ++i)
    EXPECT_EQ(wide.data()[i], static_cast<double>(x.data()[i]));
}

TEST(MatrixFile, AgreesWithCsv) {
  ScratchDir dir;
  auto x = gen_blobs<float>({100, 6, 3, 2.0, 10.0, 8});
  save_matrix(dir / "p.fmat", x);
  save_csv(dir / "p.csv", x);
  EXPECT_TRUE(bit_equal(load_csv<float>(dir / "p.csv"), load_matrix_as<float>(dir / "p.fmat")));
}

TEST(TreeFile, RoundTripIsExact) {
  auto x = gen_blobs<float>({400, 5, 4, 1.0, 10.0, 6});
  auto tree = exact_mst_prim(x);
  std::ostringstream out;
  write_tree(out, tree);
  std::istringstream in(out.str());
  auto back = read_tree(in);
  EXPECT_EQ(back.vertex_count, 400u);
  EXPECT_EQ(back.total_weight, tree.total_weight);
  std::ostringstream again;
  write_tree(again, back);
  EXPECT_EQ(again.str(), out.str());
  EXPECT_NO_THROW(validate_spanning_tree(back, 400));
}

TEST(TreeFile, CanonicalOrderAndTrailer) {
  SpanningTree t{4, {{3, 2, 1.0}, {1, 0, 0.5}, {1, 2, 0.25}}, 1.75};
  std::ostringstream out;
  write_tree(out, t);
  EXPECT_EQ(out.str(), "0\t1\t0.5\n1\t2\t0.25\n2\t3\t1\n# total_weight 1.75\n");
}

TEST(TreeFile, TrailerMatchesEdgeSum) {
  ScratchDir dir;
  auto x = gen_uniform<double>(120, 3, 4);
  write_tree(dir / "t.tsv", exact_mst_prim(x));
  auto back = read_tree(dir / "t.tsv");
  double sum = 0.0;
  for (const auto& e : back.edges) sum += e.w;
  EXPECT_NEAR(back.total_weight, sum, 1e-9 * sum);
}

TEST(TreeFile, RejectsMalformedInput) {
  auto parse = [](const std::string& s) {
    std::istringstream in(s);
    return read_tree(in);
  };
  EXPECT_THROW(parse("0\t1\t1\n"), DataError);
  EXPECT_THROW(parse("0\t1\n# total_weight 1\n"), DataError);
  EXPECT_THROW(parse("1\t0\t1\n# total_weight 1\n"), DataError);
  EXPECT_THROW(parse("0\t1\tx\n# total_weight 1\n"), DataError);
  EXPECT_THROW(parse("# total_weight 1\n0\t1\t1\n"), DataError);
}

RunStats sample_stats() {
  RunStats s;
  s.n = 1000;
  s.d = 8;
  s.k = 10;
  s.lambda = 5;
  s.seed = 3;
  s.backend = "descent";
  s.components = 4;
  s.bridges = 30;
  s.refine_rounds = 3;
  s.refine_changes = 17;
  s.converged = true;
  s.ann_seconds = 0.125;
  s.connect_seconds = 0.01;
  s.refine_seconds = 0.003;
  s.mst_seconds = 0.02;
  s.total_seconds = 0.2;
  s.total_weight = 1234.5678;
  return s;
}

TEST(StatsFile, RoundTripWithAndWithoutError) {
  ScratchDir dir;
  auto s = sample_stats();
  write_stats(dir / "a.json", s);
  EXPECT_EQ(read_stats(dir / "a.json"), s);
  EXPECT_EQ(slurp(dir / "a.json").find("relative_error"), std::string::npos);

  s.relative_error = 0.0071234;
  write_stats(dir / "b.json", s);
  const auto back = read_stats(dir / "b.json");
  EXPECT_EQ(back, s);
  EXPECT_EQ(*back.relative_error, 0.0071234);
}

TEST(StatsFile, MalformedIsDataError) {
  ScratchDir dir;
  spit(dir / "bad.json", "{\"n\": 3}");
  EXPECT_THROW(read_stats(dir / "bad.json"), DataError);
  spit(dir / "junk.json", "not json");
  EXPECT_THROW(read_stats(dir / "junk.json"), DataError);
}

TEST(Blobs, ZeroSpreadCollapsesToCenter) {
  auto b = gen_blobs_labeled<double>({10, 3, 1, 0.0, 10.0, 4});
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(b.points.row(i)[j], b.centers[j]);
}

TEST(Blobs, SampleMeansNearCenters) {
  const double sd = 0.1;
  auto b = gen_blobs_labeled<double>({100, 2, 2, sd, 10.0, 21});
  std::vector<double> sum(4, 0.0);
  std::vector<std::size_t> count(2, 0);
  for (std::size_t i = 0; i < 100; ++i) {
    const auto c = b.labels[i];
    ++count[c];
    for (std::size_t j = 0; j < 2; ++j) sum[c * 2 + j] += b.points.row(i)[j];
  }
  EXPECT_EQ(count[0], 50u);
  EXPECT_EQ(count[1], 50u);
  for (std::size_t c = 0; c < 2; ++c)
    for (std::size_t j = 0; j < 2; ++j)
      EXPECT_NEAR(sum[c * 2 + j] / 50.0, b.centers[c * 2 + j], 5 * sd / std::sqrt(50.0));
}

TEST(Blobs, UnevenSplitAndRange) {
  auto b = gen_blobs_labeled<float>({10, 2, 3, 1.0, 4.0, 1});
  std::vector<std::size_t> count(3, 0);
  for (auto l : b.labels) ++count[l];
  EXPECT_EQ(count, (std::vector<std::size_t>{4, 3, 3}));
  for (double c : b.centers) {
    EXPECT_GE(c, -4.0);
    EXPECT_LT(c, 4.0);
  }
}

TEST(Blobs, DeterministicPerSeed) {
  BlobSpec spec{500, 6, 5, 1.0, 10.0, 99};
  EXPECT_TRUE(bit_equal(gen_blobs<float>(spec), gen_blobs<float>(spec)));
  auto other = spec;
  other.seed = 100;
  EXPECT_FALSE(bit_equal(gen_blobs<float>(spec), gen_blobs<float>(other)));
}

TEST(Blobs, RejectsBadParameters) {
  EXPECT_THROW(gen_blobs({0, 2, 1, 1.0, 1.0, 0}), UsageError);
  EXPECT_THROW(gen_blobs({5, 2, 6, 1.0, 1.0, 0}), UsageError);
  EXPECT_THROW(gen_blobs({5, 2, 1, -1.0, 1.0, 0}), UsageError);
}

}  // namespace
}  // namespace famst
