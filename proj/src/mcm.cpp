#include "mcmq/mcm.hpp"

#include <algorithm>
#include <cmath>

namespace mcmq {

namespace {

constexpr double kDegenerateLineTol = 1e-12;

void check_index(const Ensemble& ens, std::size_t x) {
  if (x >= ens.size()) throw std::out_of_range("ensemble index out of range");
}

}  // namespace

Ensemble::Ensemble(std::vector<EnsembleEntry> entries, double tolerance_prob)
    : entries_(std::move(entries)), avg_(DensityOperator::maximally_mixed()) {
  if (entries_.empty()) throw std::invalid_argument("ensemble must contain at least one state");
  double sum = 0.0;
  for (const auto& e : entries_) {
    if (!(e.q > 0.0)) throw std::invalid_argument("ensemble priors must be positive");
    sum += e.q;
  }
  if (std::abs(sum - 1.0) > tolerance_prob)
    throw std::invalid_argument("ensemble priors must sum to 1 (got " + std::to_string(sum) + ")");
  Mat2 avg = Mat2::zero();
  for (auto& e : entries_) {
    e.q /= sum;
    avg = avg + e.q * e.state.mat();
    blochs_.push_back(density_to_bloch(e.state));
  }
  avg_ = DensityOperator(avg);
  avg_bloch_ = density_to_bloch(avg_);
}

double confidence_of(const Ensemble& ens, std::size_t x, const HermitianOperator& m) {
  check_index(ens, x);
  const EigenPair2 em = eigen2(m);
  if (em.values[1] < -tol::psd)
    throw std::invalid_argument("measurement operator must be positive semidefinite");
  if (em.values[0] <= tol::psd) throw std::invalid_argument("measurement operator must be nonzero");
  const double detection = trace_product_re(ens.average().mat(), m.mat());
  if (detection <= 1e-14 * em.values[0])
    throw undefined_confidence_error("zero detection probability: confidence undefined");
  return ens[x].q * trace_product_re(ens[x].state.mat(), m.mat()) / detection;
}

double mu_pure(const Ensemble& ens, std::size_t x) {
  check_index(ens, x);
  const double denom = 1.0 - overlap(ens.average(), ens[x].state);
  if (denom <= 1e-12)
    throw degenerate_ensemble_error("ensemble average equals the pure state of interest");
  return (1.0 - purity(ens.average())) / (2.0 * denom);
}

double mu_general(const Ensemble& ens, std::size_t x) {
  check_index(ens, x);
  const double a = 1.0 - overlap(ens.average(), ens[x].state);
  const double b = 1.0 - purity(ens.average());
  const double c = 1.0 - purity(ens[x].state);
  if (c <= tol::purity) throw std::invalid_argument("mu_general requires a mixed state of interest");
  double disc = a * a - b * c;
  if (disc < 0.0) {
    if (disc < -1e-12) throw std::logic_error("negative discriminant: inputs are not valid states");
    disc = 0.0;
  }
  return (a - std::sqrt(disc)) / c;
}

double mu_value(const Ensemble& ens, std::size_t x) {
  check_index(ens, x);
  if (purity(ens[x].state) >= 1.0 - tol::purity) return mu_pure(ens, x);
  return mu_general(ens, x);
}

McmResult mcm(const Ensemble& ens, std::size_t x) {
  check_index(ens, x);
  const double q = ens[x].q;
  const BlochVector s = ens.average_bloch();
  const BlochVector u = ens.bloch(x);
  const BlochVector d = s - u;

  McmResult out;
  out.index = x;

  const double d2 = d.norm2();
  if (std::sqrt(d2) <= kDegenerateLineTol * std::max(1.0, s.norm())) {
    // rho == rho_x: the line degenerates to a point; every direction attains
    // the prior and nothing more.
    out.degenerate = true;
    out.mu = 1.0;
    out.confidence = q;
    out.lambda = q;
    return out;
  }

  // ||d t + s||^2 = 1, taking the larger root (the extension from rho_x
  // through rho onto the far surface).
  const double b = d.dot(s);
  const double c0 = s.norm2() - 1.0;
  const double disc = std::sqrt(std::max(b * b - d2 * c0, 0.0));
  const double t = b > 0.0 ? -c0 / (b + disc) : (disc - b) / d2;
  if (!(t >= 0.0))
    throw degenerate_ensemble_error("no nonnegative intersection with the Bloch sphere");

  BlochVector r = d * t + s;
  r = r.normalized();  // the root places r on the sphere up to rounding

  out.t = t;
  out.mu = t / (1.0 + t);
  out.confidence = q * (1.0 + 1.0 / t);
  out.lambda = out.confidence;
  out.sigma = bloch_to_density(r);
  out.m_hat = -r;
  return out;
}

std::vector<McmResult> mcm_all(const Ensemble& ens) {
  std::vector<McmResult> out;
  out.reserve(ens.size());
  for (std::size_t x = 0; x < ens.size(); ++x) out.push_back(mcm(ens, x));
  return out;
}

double mcm_opnorm(const Ensemble& ens, std::size_t x, double tolerance_rank) {
  check_index(ens, x);
  if (ens.average_bloch().norm() >= 1.0 - tolerance_rank)
    throw std::domain_error("rank-deficient ensemble average: operator-norm route unsupported");
  const EigenPair2 e = eigen2(ens.average());
  // rho^{-1/2} from the spectral decomposition.
  Mat2 inv_sqrt = Mat2::zero();
  for (int i = 0; i < 2; ++i) {
    const double w = 1.0 / std::sqrt(e.values[i]);
    const auto& v = e.vectors[i];
    inv_sqrt.m00 += w * v[0] * std::conj(v[0]);
    inv_sqrt.m01 += w * v[0] * std::conj(v[1]);
    inv_sqrt.m10 += w * v[1] * std::conj(v[0]);
    inv_sqrt.m11 += w * v[1] * std::conj(v[1]);
  }
  const Mat2 t = inv_sqrt * (ens[x].q * ens[x].state.mat()) * inv_sqrt;
  return operator_norm(HermitianOperator(t, 1e-9));
}

double n_pure_confidence(const DensityOperator& psi0,
                         const std::vector<DensityOperator>& others) {
  if (purity(psi0) < 1.0 - tol::purity)
    throw std::invalid_argument("state of interest must be pure");
  if (others.empty()) return 1.0;  // nothing to confuse it with
  Mat2 mix = Mat2::zero();
  for (const auto& st : others) {
    if (purity(st) < 1.0 - tol::purity)
      throw std::invalid_argument("all competing states must be pure");
    mix = mix + st.mat();
  }
  const double n = static_cast<double>(others.size()) + 1.0;
  const DensityOperator rho_m(mix * (1.0 / static_cast<double>(others.size())));
  const double f = overlap(psi0, rho_m);
  const double p = purity(rho_m);
  return 2.0 * (1.0 - f) / (n + 1.0 - (n - 1.0) * p - 2.0 * f);
}

double outcome_rate_bound(const Ensemble& ens, std::size_t x) {
  check_index(ens, x);
  if (purity(ens[x].state) < 1.0 - tol::purity)
    throw std::invalid_argument("outcome_rate_bound requires a pure state of interest");
  const double mu0 = mu_pure(ens, x);
  if (mu0 >= 1.0 - 1e-12)
    throw degenerate_ensemble_error("mu = 1: outcome rate bound degenerates");
  const double f = overlap(ens.average(), ens[x].state);
  return 1.0 + (mu0 * f - purity(ens.average())) / (1.0 - mu0);
}

}  // namespace mcmq
