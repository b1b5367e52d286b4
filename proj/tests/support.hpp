// Shared helpers for the test suites: deterministic sampling and matrix
// comparison utilities.

#pragma once

#include <cstdint>
#include <random>

#include "mcmq/bloch.hpp"
#include "mcmq/mcm.hpp"

namespace test_support {

using mcmq::BlochVector;
using mcmq::cplx;
using mcmq::Mat2;

inline constexpr double kPi = 3.14159265358979323846;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  BlochVector direction() {
    const double zc = uniform(-1.0, 1.0);
    const double phi = uniform(0.0, 2.0 * kPi);
    const double s = std::sqrt(1.0 - zc * zc);
    return {s * std::cos(phi), s * std::sin(phi), zc};
  }

  /// Uniform over the solid Bloch ball.
  BlochVector state_vector() { return direction() * std::cbrt(uniform()); }

  Mat2 hermitian(double scale = 2.0) {
    const double a = uniform(-scale, scale);
    const double d = uniform(-scale, scale);
    const cplx b{uniform(-scale, scale), uniform(-scale, scale)};
    return {a, b, std::conj(b), d};
  }

 private:
  std::mt19937_64 gen_;
};

inline double max_abs_diff(const Mat2& a, const Mat2& b) { return (a - b).max_abs(); }

inline double vec_dist(const BlochVector& a, const BlochVector& b) { return (a - b).norm(); }

}  // namespace test_support
