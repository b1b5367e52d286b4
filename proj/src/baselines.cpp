#include "mcmq/baselines.hpp"

#include <cmath>

namespace mcmq {

namespace {

Mat2 weighted_difference(const TwoStateProblem& p) {
  return p.q0 * p.rho0.mat() - p.q1 * p.rho1.mat();
}

Mat2 outer(const std::array<cplx, 2>& v) {
  return {v[0] * std::conj(v[0]), v[0] * std::conj(v[1]),
          v[1] * std::conj(v[0]), v[1] * std::conj(v[1])};
}

}  // namespace

double helstrom_error(const TwoStateProblem& p) {
  return 0.5 - 0.5 * trace_norm(HermitianOperator(weighted_difference(p)));
}

HelstromPovm helstrom_povm(const TwoStateProblem& p) {
  const HermitianOperator d(weighted_difference(p));
  const EigenPair2 e = eigen2(d);
  const double scale = std::max(std::abs(e.values[0]), std::abs(e.values[1]));

  if (scale <= tol::mat) {
    // Zero difference: every measurement is equally good; report the
    // computational basis.
    return {HermitianOperator(Mat2{1.0, 0.0, 0.0, 0.0}),
            HermitianOperator(Mat2{0.0, 0.0, 0.0, 1.0}), true, true};
  }

  Mat2 m0 = Mat2::zero();
  for (int i = 0; i < 2; ++i)
    if (e.values[i] > 0.0) m0 = m0 + outer(e.vectors[i]);
  const Mat2 m1 = Mat2::identity() - m0;
  // Outcome 0 (or 1) alone is optimal when the difference is semidefinite.
  const bool null_opt = e.values[1] >= -tol::psd || e.values[0] <= tol::psd;
  return {HermitianOperator(m0), HermitianOperator(m1), false, null_opt};
}

double usd_inconclusive(double q0, const DensityOperator& psi0, double q1,
                        const DensityOperator& psi1) {
  if (purity(psi0) < 1.0 - tol::purity || purity(psi1) < 1.0 - tol::purity)
    throw std::invalid_argument("unambiguous discrimination needs pure states");
  if (trace_distance(psi0, psi1) <= tol::mat)
    throw std::invalid_argument("unambiguous discrimination needs distinct states");
  return 2.0 * std::sqrt(q0 * q1) * std::sqrt(std::max(0.0, overlap(psi0, psi1)));
}

double med_symmetric_guess(int n, double theta) {
  if (n < 2) throw std::invalid_argument("need at least two states");
  return (1.0 + std::sin(theta)) / static_cast<double>(n);
}

}  // namespace mcmq
