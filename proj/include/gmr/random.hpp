#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace gmr {

/// Seeded generator with platform-stable draws. std::mt19937_64 has a fully
/// specified output sequence; the std distributions do not, so bounded and
/// real draws are derived here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, n); n must be positive.
  std::uint64_t uniform_index(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Symmetric triangular on [-2 * scale, 2 * scale]: sum of two uniforms.
  double triangular(double scale) {
    const double a = uniform(-1.0, 1.0);
    const double b = uniform(-1.0, 1.0);
    return scale * (a + b);
  }

  /// `count` distinct items drawn uniformly from `pool`, in draw order
  /// (partial Fisher-Yates over a copy).
  template <typename T>
  std::vector<T> sample(std::vector<T> pool, std::size_t count) {
    if (count > pool.size()) count = pool.size();
    for (std::size_t i = 0; i < count; ++i) {
      const auto j = i + static_cast<std::size_t>(uniform_index(pool.size() - i));
      std::swap(pool[i], pool[j]);
    }
    pool.resize(count);
    return pool;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace gmr
