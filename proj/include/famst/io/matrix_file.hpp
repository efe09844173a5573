#pragma once

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "famst/error.hpp"
#include "famst/point_set.hpp"

namespace famst {

// Binary matrix layout, little-endian throughout:
//   "FMAT" | u8 version (1) | u8 precision (4 or 8) | u64 n | u64 d | n*d values, row-major
inline constexpr std::array<char, 4> kMatrixMagic = {'F', 'M', 'A', 'T'};
inline constexpr std::uint8_t kMatrixVersion = 1;
inline constexpr std::size_t kMatrixHeaderBytes = 4 + 1 + 1 + 8 + 8;

struct MatrixHeader {
  std::uint8_t version = kMatrixVersion;
  std::uint8_t precision = 4;
  std::uint64_t n = 0;
  std::uint64_t d = 0;
};

using AnyPointSet = std::variant<PointSet, PointSetF64>;

namespace detail {

template <class U>
void put_le(std::vector<char>& buf, U value) {
  static_assert(std::is_unsigned_v<U>);
  for (std::size_t i = 0; i < sizeof(U); ++i)
    buf.push_back(static_cast<char>((value >> (8 * i)) & 0xffu));
}

template <class U>
U get_le(const char* p) {
  U v = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i)
    v |= static_cast<U>(static_cast<unsigned char>(p[i])) << (8 * i);
  return v;
}

template <class Scalar>
using bits_t = std::conditional_t<sizeof(Scalar) == 4, std::uint32_t, std::uint64_t>;

inline std::vector<char> read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw DataError("read failure on " + path.string());
  return bytes;
}

inline MatrixHeader parse_header(const std::vector<char>& bytes, const std::string& where) {
  if (bytes.size() < kMatrixHeaderBytes)
    throw DataError(where + ": truncated header (" + std::to_string(bytes.size()) + " bytes)");
  if (std::memcmp(bytes.data(), kMatrixMagic.data(), kMatrixMagic.size()) != 0)
    throw DataError(where + ": bad magic, not an FMAT file");
  MatrixHeader h;
  h.version = static_cast<std::uint8_t>(bytes[4]);
  h.precision = static_cast<std::uint8_t>(bytes[5]);
  h.n = get_le<std::uint64_t>(bytes.data() + 6);
  h.d = get_le<std::uint64_t>(bytes.data() + 14);
  if (h.version != kMatrixVersion)
    throw DataError(where + ": unsupported version " + std::to_string(h.version));
  if (h.precision != 4 && h.precision != 8)
    throw DataError(where + ": unsupported precision " + std::to_string(h.precision));
  if (h.n == 0 || h.d == 0) throw DataError(where + ": empty matrix");
  if (h.n > std::numeric_limits<std::uint64_t>::max() / h.d / h.precision)
    throw DataError(where + ": dimensions overflow");
  const std::uint64_t payload = h.n * h.d * h.precision;
  const std::uint64_t have = bytes.size() - kMatrixHeaderBytes;
  if (have < payload)
    throw DataError(where + ": truncated payload (" + std::to_string(have) + " of " +
                    std::to_string(payload) + " bytes)");
  if (have > payload) throw DataError(where + ": trailing bytes after payload");
  return h;
}

template <class Stored, class Scalar>
BasicPointSet<Scalar> decode_payload(const std::vector<char>& bytes, const MatrixHeader& h) {
  const std::size_t count = static_cast<std::size_t>(h.n * h.d);
  std::vector<Scalar> data(count);
  const char* p = bytes.data() + kMatrixHeaderBytes;
  for (std::size_t i = 0; i < count; ++i, p += sizeof(Stored))
    data[i] = static_cast<Scalar>(std::bit_cast<Stored>(get_le<bits_t<Stored>>(p)));
  return BasicPointSet<Scalar>(static_cast<std::size_t>(h.n), static_cast<std::size_t>(h.d),
                               std::move(data));
}

}  // namespace detail

inline bool is_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::array<char, 4> magic{};
  return in.read(magic.data(), magic.size()) && magic == kMatrixMagic;
}

inline MatrixHeader read_matrix_header(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::vector<char> head(kMatrixHeaderBytes);
  in.read(head.data(), static_cast<std::streamsize>(head.size()));
  head.resize(static_cast<std::size_t>(in.gcount()));
  if (head.size() < kMatrixHeaderBytes) throw DataError(path.string() + ": truncated header");
  if (std::memcmp(head.data(), kMatrixMagic.data(), 4) != 0)
    throw DataError(path.string() + ": bad magic, not an FMAT file");
  MatrixHeader h;
  h.version = static_cast<std::uint8_t>(head[4]);
  h.precision = static_cast<std::uint8_t>(head[5]);
  h.n = detail::get_le<std::uint64_t>(head.data() + 6);
  h.d = detail::get_le<std::uint64_t>(head.data() + 14);
  return h;
}

/// Loads an FMAT file at its stored precision.
inline AnyPointSet load_matrix(const std::filesystem::path& path) {
  const auto bytes = detail::read_all(path);
  const auto h = detail::parse_header(bytes, path.string());
  if (h.precision == 4) return detail::decode_payload<float, float>(bytes, h);
  return detail::decode_payload<double, double>(bytes, h);
}

/// Loads an FMAT file converting the payload to `Scalar`.
template <class Scalar>
BasicPointSet<Scalar> load_matrix_as(const std::filesystem::path& path) {
  const auto bytes = detail::read_all(path);
  const auto h = detail::parse_header(bytes, path.string());
  if (h.precision == 4) return detail::decode_payload<float, Scalar>(bytes, h);
  return detail::decode_payload<double, Scalar>(bytes, h);
}

/// Writes `x` with precision sizeof(Scalar).
template <class Scalar>
void save_matrix(const std::filesystem::path& path, const BasicPointSet<Scalar>& x) {
  std::vector<char> buf;
  buf.reserve(kMatrixHeaderBytes + x.data().size() * sizeof(Scalar));
  buf.insert(buf.end(), kMatrixMagic.begin(), kMatrixMagic.end());
  buf.push_back(static_cast<char>(kMatrixVersion));
  buf.push_back(static_cast<char>(sizeof(Scalar)));
  detail::put_le<std::uint64_t>(buf, x.size());
  detail::put_le<std::uint64_t>(buf, x.dim());
  for (Scalar v : x.data()) detail::put_le(buf, std::bit_cast<detail::bits_t<Scalar>>(v));
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot create " + path.string());
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw DataError("write failure on " + path.string());
}

}  // namespace famst
