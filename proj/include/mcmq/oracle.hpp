// Brute-force verification of the closed-form results. Everything here works
// from the raw matrices and a derivative-free search; the only code shared
// with the analytic path is the 2x2 algebra.

#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

#include "mcmq/mcm.hpp"

namespace mcmq::oracle {

/// Sphere-search parameters: coarse resolution is the number of points per
/// great circle; refinement shrinks a local box around the incumbent.
struct GridSpec {
  int resolution = 720;
  int iterations = 40;
  double shrink = 0.5;

  void validate() const {
    if (resolution < 36) throw std::invalid_argument("grid resolution must be >= 36");
    if (iterations < 1) throw std::invalid_argument("grid iterations must be >= 1");
    if (!(shrink > 0.0 && shrink < 1.0)) throw std::invalid_argument("shrink factor must be in (0,1)");
  }
};

struct SpherePoint {
  BlochVector dir;
  double value = 0.0;
};

namespace detail {
inline BlochVector dir_from(double zc, double phi) {
  const double s = std::sqrt(std::max(0.0, 1.0 - zc * zc));
  return {s * std::cos(phi), s * std::sin(phi), zc};
}
}  // namespace detail

/// Maximize f over unit Bloch vectors: coarse grid uniform in (cos theta,
/// phi), then a shrinking-box local refinement around the incumbent.
/// Deterministic: on exact ties the earliest grid point (smallest theta, then
/// phi) wins. f must return a finite value or -inf/+inf sentinels are the
/// caller's problem; non-finite values are skipped.
template <class F>
SpherePoint grid_search_sphere(F&& f, const GridSpec& g = {}, bool maximize = true) {
  g.validate();
  const double sign = maximize ? 1.0 : -1.0;
  const int nz = g.resolution / 2;
  const int nphi = g.resolution;
  const double pi = std::acos(-1.0);

  double best = -std::numeric_limits<double>::infinity();
  double best_z = 1.0, best_phi = 0.0;
  for (int iz = 0; iz <= nz; ++iz) {
    // descending z keeps ties resolved toward the smaller polar angle
    const double zc = 1.0 - 2.0 * static_cast<double>(iz) / nz;
    for (int ip = 0; ip < nphi; ++ip) {
      const double phi = 2.0 * pi * ip / nphi;
      const double v = sign * f(detail::dir_from(zc, phi));
      if (std::isfinite(v) && v > best) {
        best = v;
        best_z = zc;
        best_phi = phi;
      }
    }
  }

  double hz = 2.0 / nz;
  double hphi = 2.0 * pi / nphi;
  for (int it = 0; it < g.iterations; ++it) {
    hz *= g.shrink;
    hphi *= g.shrink;
    const double cz = best_z, cphi = best_phi;
    for (int iz = -3; iz <= 3; ++iz) {
      const double zc = std::clamp(cz + iz * hz / 3.0, -1.0, 1.0);
      for (int ip = -3; ip <= 3; ++ip) {
        const double phi = cphi + ip * hphi / 3.0;
        const double v = sign * f(detail::dir_from(zc, phi));
        if (std::isfinite(v) && v > best) {
          best = v;
          best_z = zc;
          best_phi = phi;
        }
      }
    }
  }
  return {detail::dir_from(best_z, best_phi), sign * best};
}

/// Maximize the confidence q_x tr[rho_x P(m)] / tr[rho P(m)] over rank-one
/// projectors by direct trace evaluation on the matrices.
SpherePoint grid_max_confidence(const Ensemble& ens, std::size_t x, const GridSpec& g = {});

/// Minimum eigenvalue of lambda rho - q_x rho_x. Nonnegative certifies
/// lambda as an upper bound on the achievable confidence.
double dual_feasibility(const Ensemble& ens, std::size_t x, double lambda);

struct BruteInconclusive {
  std::vector<double> weights;
  double q_inc = 0.0;
};

/// Exhaustive grid over the weight box {a >= 0, sum a <= 2} keeping points
/// near the rank-one manifold, followed by a repair-based local polish.
/// Practical for up to three projectors.
BruteInconclusive brute_min_inconclusive(const Ensemble& ens,
                                         const std::vector<BlochVector>& projector_dirs,
                                         int resolution = 400);

}  // namespace mcmq::oracle
