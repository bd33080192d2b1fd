#ifndef DUGH_RNG_HPP
#define DUGH_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

#include "dugh/common.hpp"

namespace dugh {

/// Seeded random number generator with hand-rolled output functions.
///
/// std::mt19937_64 produces an identical bit stream on every platform, but the
/// standard distributions (std::normal_distribution etc.) are implementation
/// defined. All draws therefore go through explicit, portable transformations
/// so that a given seed reproduces the same numbers everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1) with 53 random mantissa bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal via the Box-Muller transform (pairs are cached).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // u1 must be strictly positive for the logarithm.
    double u1 = 0.0;
    do {
      u1 = uniform01();
    } while (u1 <= 0.0);
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * kPi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  /// Uniform integer in [0, n) by rejection, avoiding modulo bias.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw ValidationError("Rng::below requires n > 0");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t draw = 0;
    do {
      draw = engine_();
    } while (draw >= limit);
    return draw % n;
  }

  /// Matrix with independent standard-normal entries.
  Matrix normal_matrix(Index rows, Index cols) {
    Matrix out(rows, cols);
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j) out(i, j) = normal();
    return out;
  }

  /// Vector with independent standard-normal entries.
  Vector normal_vector(Index size) {
    Vector out(size);
    for (Index i = 0; i < size; ++i) out(i) = normal();
    return out;
  }

  /// Derives an independent child seed; used to give parallel pipelines
  /// (benchmark cells, trials) their own deterministic streams.
  std::uint64_t fork_seed() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace dugh

#endif  // DUGH_RNG_HPP
