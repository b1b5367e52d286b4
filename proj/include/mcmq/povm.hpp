// POVM completion around a fixed set of rank-one maximum-confidence
// projectors: nonnegative weights a_x with M_phi = I - sum a_x P_x >= 0,
// chosen to minimize the inconclusive probability tr[rho M_phi].

#pragma once

#include <optional>
#include <vector>

#include "mcmq/mcm.hpp"

namespace mcmq {

struct PovmCompletion {
  std::vector<double> weights;  // a_x >= 0
  HermitianOperator m_phi;      // I - sum a_x P_x
  double q_inc = 0.0;           // tr[rho M_phi]
  bool complete = false;        // M_phi == 0 within tolerance
};

/// Nonnegative weights with sum a_x P_x = I (equivalently sum a_x = 2 and
/// sum a_x m_x = 0), if any exist. Among the feasible completions the
/// minimum-norm one is returned, which keeps symmetric inputs symmetric.
std::optional<std::vector<double>> identity_in_hull(const std::vector<BlochVector>& projector_dirs);

/// Minimize tr[rho M_phi] over valid completions. When the identity lies in
/// the hull the complete POVM with q_inc = 0 is returned directly; otherwise
/// the optimum sits on the rank-one boundary of M_phi and is found by
/// closed-form active-set enumeration. Numerically tied optima are resolved
/// toward the lexicographically smallest weight vector.
PovmCompletion minimize_inconclusive(const Ensemble& ens,
                                     const std::vector<BlochVector>& projector_dirs);

/// |1 - sum a_x + 1/2 sum_{x,y} (1 - tr[P_x P_y]) a_x a_y|; zero exactly when
/// M_phi has rank <= 1 (given the trace bound).
double rank_one_residual(const std::vector<double>& weights,
                         const std::vector<BlochVector>& projector_dirs);

}  // namespace mcmq
