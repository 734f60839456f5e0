#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "idesim/error.hpp"
#include "idesim/sparse.hpp"

namespace idesim {

/// Binary diagonal file: magic "IDE1", vertex count as 8-byte
/// little-endian unsigned, then n doubles (IEEE-754, little-endian).
/// Binary so estimate -> query round trips are bit-exact.

namespace detail {

inline void put_u64_le(std::ostream& out, std::uint64_t v) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(buf, 8);
}

inline std::uint64_t get_u64_le(std::istream& in) {
  unsigned char buf[8];
  in.read(reinterpret_cast<char*>(buf), 8);
  if (!in) throw ParseError("diagonal file: truncated", 0);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return v;
}

}  // namespace detail

inline void write_diagonal_file(std::ostream& out, const DenseVector& d) {
  out.write("IDE1", 4);
  detail::put_u64_le(out, static_cast<std::uint64_t>(d.size()));
  for (double x : d) {
    std::uint64_t bits;
    std::memcpy(&bits, &x, 8);
    detail::put_u64_le(out, bits);
  }
  if (!out) throw Error("diagonal file: write failed");
}

inline DenseVector read_diagonal_file(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "IDE1", 4) != 0) {
    throw ParseError("diagonal file: bad magic, expected IDE1", 0);
  }
  const std::uint64_t n = detail::get_u64_le(in);
  DenseVector d(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::uint64_t bits = detail::get_u64_le(in);
    double x;
    std::memcpy(&x, &bits, 8);
    d[i] = x;
  }
  return d;
}

inline void save_diagonal(const std::string& path, const DenseVector& d) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  write_diagonal_file(out, d);
}

inline DenseVector load_diagonal(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return read_diagonal_file(in);
}

}  // namespace idesim
