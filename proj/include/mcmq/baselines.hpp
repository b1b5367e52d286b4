// Closed-form two-state discrimination references: minimum-error (Helstrom)
// and unambiguous discrimination, plus the symmetric-ensemble guessing
// probability used for comparisons.

#pragma once

#include "mcmq/bloch.hpp"

namespace mcmq {

struct TwoStateProblem {
  double q0;
  double q1;
  DensityOperator rho0;
  DensityOperator rho1;

  TwoStateProblem(double q0_, DensityOperator rho0_, double q1_, DensityOperator rho1_,
                  double tolerance_prob = tol::prob)
      : q0(q0_), q1(q1_), rho0(std::move(rho0_)), rho1(std::move(rho1_)) {
    if (!(q0 >= 0.0) || !(q1 >= 0.0) || std::abs(q0 + q1 - 1.0) > tolerance_prob)
      throw std::invalid_argument("two-state priors must be nonnegative and sum to 1");
  }
};

struct HelstromPovm {
  HermitianOperator m0;
  HermitianOperator m1;
  bool degenerate = false;    // q0 rho0 == q1 rho1: any basis is optimal
  bool null_optimal = false;  // one outcome can be dropped at no cost
};

/// Minimal average error probability: 1/2 - 1/2 ||q0 rho0 - q1 rho1||_1.
double helstrom_error(const TwoStateProblem& p);

/// Projectors onto the positive / nonpositive eigenspaces of
/// q0 rho0 - q1 rho1. They always sum to the identity.
HelstromPovm helstrom_povm(const TwoStateProblem& p);

/// Minimal inconclusive rate 2 sqrt(q0 q1) |<psi0|psi1>| for unambiguous
/// discrimination of two pure states. Mixed input is rejected: full-rank
/// noise makes unambiguous identification impossible. The raw formula value
/// is returned even in regimes where it exceeds achievable rates.
double usd_inconclusive(double q0, const DensityOperator& psi0, double q1,
                        const DensityOperator& psi1);

/// Guessing probability (1 + sin theta)/N of minimum-error discrimination
/// for N geometrically uniform pure states at polar angle theta.
double med_symmetric_guess(int n, double theta);

}  // namespace mcmq
