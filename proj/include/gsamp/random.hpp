#pragma once

// Seeded, platform-independent random data. std::mt19937_64 is bit-exact by
// definition; the standard distributions are not, so values are derived from
// raw 53-bit draws.

#include <cstdint>
#include <random>

#include "gsamp/convolution.hpp"

namespace gsamp {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform in [-1, 1).
  double symmetric() { return 2.0 * unit() - 1.0; }
  cplx complex() { return {symmetric(), symmetric()}; }
  /// Uniform integer in [lo, hi].
  int integer(int lo, int hi) {
    return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  GroupSequence sequence(const GroupSpec& g, bool real = false) {
    GroupSequence x(g);
    for (auto& v : x.values()) v = real ? cplx{symmetric(), 0.0} : complex();
    return x;
  }

  VectorSequence vector(const GroupSpec& g, std::size_t n, bool real = false) {
    VectorSequence x(g, n);
    for (std::size_t i = 0; i < n; ++i) x[i] = sequence(g, real);
    return x;
  }

  SequenceMatrix matrix(const GroupSpec& g, std::size_t rows, std::size_t cols, bool real = false) {
    SequenceMatrix A(g, rows, cols);
    for (std::size_t m = 0; m < rows; ++m)
      for (std::size_t n = 0; n < cols; ++n) A(m, n) = sequence(g, real);
    return A;
  }

  TransferMatrix transfer(const GroupSpec& g, std::size_t rows, std::size_t cols) {
    TransferMatrix T(g, rows, cols);
    for (std::size_t xi = 0; xi < g.order(); ++xi)
      for (Eigen::Index a = 0; a < static_cast<Eigen::Index>(rows); ++a)
        for (Eigen::Index b = 0; b < static_cast<Eigen::Index>(cols); ++b) T.at(xi)(a, b) = complex();
    return T;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace gsamp
