#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "famst/error.hpp"
#include "famst/point_set.hpp"

namespace famst {

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <class Scalar>
std::optional<Scalar> parse_number(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  Scalar v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

}  // namespace detail

/// Comma-separated numeric rows. A first row containing any non-numeric cell
/// is taken as a header and skipped; blank lines are ignored. Errors carry the
/// 1-based line and column of the offending cell.
template <class Scalar = float>
BasicPointSet<Scalar> read_csv(std::istream& in, const std::string& where = "<csv>") {
  std::vector<Scalar> data;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::size_t line_no = 0;
  bool first = true;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto fields = detail::split_fields(line);
    if (first) {
      first = false;
      cols = fields.size();
      bool header = false;
      for (auto f : fields) header = header || !detail::parse_number<Scalar>(f).has_value();
      if (header) continue;
    }
    if (fields.size() != cols)
      throw DataError(where + ": line " + std::to_string(line_no) + " has " +
                      std::to_string(fields.size()) + " columns, expected " + std::to_string(cols));
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const auto v = detail::parse_number<Scalar>(fields[c]);
      if (!v)
        throw DataError(where + ": line " + std::to_string(line_no) + ", column " +
                        std::to_string(c + 1) + ": not a number: '" + std::string(fields[c]) + "'");
      if (!std::isfinite(*v))
        throw DataError(where + ": line " + std::to_string(line_no) + ", column " +
                        std::to_string(c + 1) + ": non-finite value");
      data.push_back(*v);
    }
    ++rows;
  }
  if (in.bad()) throw DataError(where + ": read failure");
  if (rows == 0) throw DataError(where + ": no data rows");
  return BasicPointSet<Scalar>(rows, cols, std::move(data));
}

template <class Scalar = float>
BasicPointSet<Scalar> load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return read_csv<Scalar>(in, path.string());
}

/// Writes one row per point using the shortest decimal that reads back to
/// the same Scalar.
template <class Scalar>
void write_csv(std::ostream& out, const BasicPointSet<Scalar>& x) {
  char buf[64];
  for (std::size_t i = 0; i < x.size(); ++i) {
    auto row = x.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out << ',';
      const auto res = std::to_chars(buf, buf + sizeof buf, row[j]);
      out.write(buf, res.ptr - buf);
    }
    out << '\n';
  }
}

template <class Scalar>
void save_csv(const std::filesystem::path& path, const BasicPointSet<Scalar>& x) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot create " + path.string());
  write_csv(out, x);
  if (!out) throw DataError("write failure on " + path.string());
}

}  // namespace famst
