#include "mcmq/oracle.hpp"

#include <cmath>

namespace mcmq::oracle {

namespace {

Mat2 rank_one(const BlochVector& m) {
  Mat2 p;
  p.m00 = 0.5 * (1.0 + m.z);
  p.m11 = 0.5 * (1.0 - m.z);
  p.m01 = 0.5 * cplx(m.x, -m.y);
  p.m10 = std::conj(p.m01);
  return p;
}

// Scale a >= 0 onto the rank-one manifold: tau with h(tau a) = 0, where
// h(a) = 1 - sum a + sum_{x<y} (1 - tr[P_x P_y]) a_x a_y. Returns up to two
// candidates (tau, q_inc).
struct Repaired {
  double tau = -1.0;
  double q_inc = 2.0;
};

}  // namespace

SpherePoint grid_max_confidence(const Ensemble& ens, std::size_t x, const GridSpec& g) {
  if (x >= ens.size()) throw std::out_of_range("ensemble index out of range");
  const Mat2 rx = ens[x].state.mat();
  const Mat2 r = ens.average().mat();
  const double q = ens[x].q;
  auto conf = [&](const BlochVector& m) {
    const Mat2 p = rank_one(m);
    const double den = trace_product_re(r, p);
    if (den <= 1e-14) return -std::numeric_limits<double>::infinity();
    return q * trace_product_re(rx, p) / den;
  };
  return grid_search_sphere(conf, g, /*maximize=*/true);
}

double dual_feasibility(const Ensemble& ens, std::size_t x, double lambda) {
  if (x >= ens.size()) throw std::out_of_range("ensemble index out of range");
  const Mat2 d = lambda * ens.average().mat() - ens[x].q * ens[x].state.mat();
  return eigen2(HermitianOperator(d)).values[1];
}

BruteInconclusive brute_min_inconclusive(const Ensemble& ens,
                                         const std::vector<BlochVector>& projector_dirs,
                                         int resolution) {
  const std::size_t n = projector_dirs.size();
  if (n == 0 || n > 3)
    throw std::invalid_argument("exhaustive search supports 1..3 projector directions");
  if (resolution < 10) throw std::invalid_argument("resolution must be >= 10");

  // Pairwise Gram data and detection probabilities from the matrices.
  std::vector<Mat2> proj(n);
  for (std::size_t i = 0; i < n; ++i) proj[i] = rank_one(projector_dirs[i].normalized());
  std::vector<std::vector<double>> gram(n, std::vector<double>(n, 0.0));
  std::vector<double> det_p(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    det_p[i] = trace_product_re(ens.average().mat(), proj[i]);
    for (std::size_t j = 0; j < n; ++j)
      gram[i][j] = 1.0 - trace_product_re(proj[i], proj[j]);
  }

  auto linear = [&](const std::vector<double>& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i];
    return s;
  };
  auto quad = [&](const std::vector<double>& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += gram[i][j] * a[i] * a[j];
    return s;
  };
  auto objective = [&](const std::vector<double>& a, double tau) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * det_p[i];
    return 1.0 - tau * s;
  };

  // Given a direction a, solve h(tau a) = 1 - tau A + tau^2 Q = 0 exactly and
  // keep feasible roots (tau >= 0, tau A <= 2).
  auto repair_best = [&](const std::vector<double>& a) {
    Repaired best;
    const double A = linear(a);
    if (A <= 0.0) return best;
    const double Q = quad(a);
    double taus[2];
    int nt = 0;
    if (std::abs(Q) < 1e-30) {
      taus[nt++] = 1.0 / A;
    } else {
      const double disc = A * A - 4.0 * Q;
      if (disc < 0.0) return best;
      const double root = std::sqrt(disc);
      taus[nt++] = (A - root) / (2.0 * Q);
      taus[nt++] = (A + root) / (2.0 * Q);
    }
    for (int k = 0; k < nt; ++k) {
      const double tau = taus[k];
      if (!(tau > 0.0) || tau * A > 2.0 + 1e-12) continue;
      const double val = objective(a, tau);
      if (val < best.q_inc) {
        best.tau = tau;
        best.q_inc = val;
      }
    }
    return best;
  };

  const double step = 2.0 / resolution;
  const double slack = 4.0 * static_cast<double>(n) * step;

  std::vector<double> a(n, 0.0), best_a;
  double best_val = std::numeric_limits<double>::infinity();
  bool found = false;

  // Coarse pass over the box, admitting points near the manifold.
  std::vector<int> idx(n, 0);
  while (true) {
    double A = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = idx[i] * step;
      A += a[i];
    }
    if (A <= 2.0 + 1e-12) {
      const double h = 1.0 - A + quad(a);
      if (std::abs(h) <= slack) {
        double val = 1.0;
        for (std::size_t i = 0; i < n; ++i) val -= a[i] * det_p[i];
        if (val < best_val) {
          best_val = val;
          best_a = a;
          found = true;
        }
      }
    }
    // odometer increment
    std::size_t pos = 0;
    while (pos < n && ++idx[pos] > resolution) idx[pos++] = 0;
    if (pos == n) break;
  }
  if (!found)
    throw std::runtime_error(
        "no grid point near the rank-one manifold; resolution too low or slack too tight");

  // Polish: shrink a box of directions around the incumbent, repairing each
  // candidate exactly onto the manifold. Only repaired values count.
  double best_repaired = std::numeric_limits<double>::infinity();
  std::vector<double> best_weights = best_a;
  auto consider = [&](const std::vector<double>& c) {
    const Repaired r = repair_best(c);
    if (r.tau > 0.0 && r.q_inc < best_repaired) {
      best_repaired = r.q_inc;
      for (std::size_t i = 0; i < n; ++i) best_weights[i] = c[i] * r.tau;
      return true;
    }
    return false;
  };
  consider(best_a);

  double radius = 2.0 * step;
  std::vector<double> cand(n, 0.0);
  for (int it = 0; it < 60; ++it) {
    const std::vector<double> center = best_weights;
    const int span = 2;
    std::vector<int> off(n, -span);
    while (true) {
      bool any_positive = false;
      for (std::size_t i = 0; i < n; ++i) {
        cand[i] = std::max(0.0, center[i] + off[i] * radius / span);
        any_positive = any_positive || cand[i] > 0.0;
      }
      if (any_positive) consider(cand);
      std::size_t pos = 0;
      while (pos < n && ++off[pos] > span) off[pos++] = -span;
      if (pos == n) break;
    }
    radius *= 0.7;
  }
  if (!std::isfinite(best_repaired))
    throw std::runtime_error("local polish found no point on the rank-one manifold");

  return {best_weights, best_repaired};
}

}  // namespace mcmq::oracle
