// Closed-form maximum-confidence measurements for qubit ensembles.
//
// For a state of interest rho_x inside an ensemble with average rho, the
// complementary state sigma_x lies where the line from rho_x through rho
// pierces the Bloch sphere; the optimal measurement direction is its
// antipode. The same optimum is also available as an operator norm after a
// similarity transform, which callers can use as an algebraic cross-check.

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "mcmq/bloch.hpp"

namespace mcmq {

/// Ensemble average equals the state of interest; no complementary state
/// exists and any measurement direction is equally (un)informative.
struct degenerate_ensemble_error : std::domain_error {
  using std::domain_error::domain_error;
};

/// The measurement never fires on the ensemble, so the posterior is undefined.
struct undefined_confidence_error : std::domain_error {
  using std::domain_error::domain_error;
};

struct EnsembleEntry {
  double q;               // prior probability, > 0
  DensityOperator state;
};

/// Immutable list of (prior, state) pairs with the cached average state.
/// Priors must be positive and sum to 1 within `tolerance_prob`; the stored
/// priors are renormalized to sum to 1 exactly.
class Ensemble {
 public:
  explicit Ensemble(std::vector<EnsembleEntry> entries, double tolerance_prob = tol::prob);

  std::size_t size() const { return entries_.size(); }
  const EnsembleEntry& operator[](std::size_t i) const { return entries_.at(i); }
  const std::vector<EnsembleEntry>& entries() const { return entries_; }

  const DensityOperator& average() const { return avg_; }
  const BlochVector& average_bloch() const { return avg_bloch_; }
  const BlochVector& bloch(std::size_t i) const { return blochs_.at(i); }

 private:
  std::vector<EnsembleEntry> entries_;
  std::vector<BlochVector> blochs_;
  DensityOperator avg_;
  BlochVector avg_bloch_;
};

/// Per-state MCM record. For a degenerate entry (state equals the ensemble
/// average) `t`, `sigma` and `m_hat` are absent and the confidence collapses
/// to the prior.
struct McmResult {
  std::size_t index = 0;
  double mu = 0.0;          // weight of rho_x in the decomposition of rho
  double confidence = 0.0;  // q_x / mu
  double lambda = 0.0;      // optimal dual value; equals confidence
  std::optional<double> t;  // line parameter >= 0
  std::optional<DensityOperator> sigma;  // complementary state (pure)
  std::optional<BlochVector> m_hat;      // optimal measurement direction (unit)
  bool degenerate = false;
};

/// Posterior probability that rho_x was prepared given a click on m:
/// q_x tr[rho_x m] / tr[rho m]. Invariant under positive scaling of m.
/// Throws undefined_confidence_error when the detection probability vanishes.
double confidence_of(const Ensemble& ens, std::size_t x, const HermitianOperator& m);

/// Decomposition weight for a pure state of interest:
/// mu = (1 - tr[rho^2]) / (2 (1 - tr[rho rho_x])).
double mu_pure(const Ensemble& ens, std::size_t x);

/// Decomposition weight for a mixed state of interest (discriminant form).
double mu_general(const Ensemble& ens, std::size_t x);

/// Branch dispatcher: mu_pure when tr[rho_x^2] >= 1 - tol::purity, else
/// mu_general. The two branches agree continuously at the boundary.
double mu_value(const Ensemble& ens, std::size_t x);

/// Full closed-form MCM record for entry x (geometric route).
McmResult mcm(const Ensemble& ens, std::size_t x);

std::vector<McmResult> mcm_all(const Ensemble& ens);

/// Maximum confidence as the operator norm of
/// rho^{-1/2} q_x rho_x rho^{-1/2}. Requires a full-rank average; refuses
/// rank-deficient input rather than regularizing.
double mcm_opnorm(const Ensemble& ens, std::size_t x, double tolerance_rank = tol::psd);

/// Maximum confidence for one pure state of interest against N-1 other pure
/// states with equal priors, evaluated from the purity of the rest-mixture
/// and its overlap with the state of interest.
double n_pure_confidence(const DensityOperator& psi0,
                         const std::vector<DensityOperator>& others);

/// Upper bound on the outcome rate tr[rho M_x] of a maximally weighted MCM
/// element, for a pure state of interest.
double outcome_rate_bound(const Ensemble& ens, std::size_t x);

}  // namespace mcmq
