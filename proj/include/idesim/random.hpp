#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "idesim/error.hpp"
#include "idesim/sparse.hpp"

namespace idesim {

/// Seeded generator with explicit sampling routines. std::mt19937_64 output
/// is pinned by the standard; the distributions here avoid
/// std::uniform_*_distribution, whose mapping is implementation-defined,
/// so sequences are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  /// Uniform integer in [0, bound) by rejection (no modulo bias).
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw InputError("Rng::below: zero bound");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x = gen_();
    while (x >= limit) x = gen_();
    return x % bound;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double real01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  /// k distinct values from [0, n), order randomized (partial Fisher-Yates).
  std::vector<index_t> sample_without_replacement(index_t n, index_t k) {
    if (k > n) k = n;
    std::vector<index_t> pool(static_cast<std::size_t>(n));
    for (index_t i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
    for (index_t i = 0; i < k; ++i) {
      const index_t j = i + static_cast<index_t>(below(static_cast<std::uint64_t>(n - i)));
      std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    }
    pool.resize(static_cast<std::size_t>(k));
    return pool;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace idesim
