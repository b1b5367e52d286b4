#include "doctest.h"
#include "support.hpp"

#include "mcmq/families.hpp"
#include "mcmq/mcm.hpp"
#include "mcmq/oracle.hpp"

using namespace mcmq;
using test_support::kPi;
using test_support::Rng;

namespace {

Ensemble equal_pair(const BlochVector& a, const BlochVector& b) {
  return Ensemble({{0.5, bloch_to_density(a)}, {0.5, bloch_to_density(b)}});
}

double decomposition_residual(const Ensemble& ens, const McmResult& r) {
  const Mat2 lhs = ens.average().mat() - r.mu * ens[r.index].state.mat() -
                   (1.0 - r.mu) * r.sigma->mat();
  return trace_norm(HermitianOperator(lhs, 1e-6));
}

}  // namespace

TEST_SUITE_BEGIN("mcm");

TEST_CASE("ensemble validation") {
  CHECK_THROWS_AS(Ensemble({}), std::invalid_argument);
  CHECK_THROWS_AS(Ensemble({{0.4, DensityOperator::maximally_mixed()},
                            {0.4, DensityOperator::maximally_mixed()}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(Ensemble({{-0.5, DensityOperator::maximally_mixed()},
                            {1.5, DensityOperator::maximally_mixed()}}),
                  std::invalid_argument);

  const Ensemble ens = equal_pair({0, 0, 1}, {0, 0, -1});
  CHECK(ens.average_bloch().norm() < 1e-15);
  CHECK(trace_distance(ens.average(), DensityOperator::maximally_mixed()) < 1e-15);
}

TEST_CASE("confidence_of reference values") {
  const Ensemble orth = equal_pair({0, 0, 1}, {0, 0, -1});
  CHECK(confidence_of(orth, 0, projector({0, 0, 1})) == doctest::Approx(1.0));
  CHECK(confidence_of(orth, 0, HermitianOperator(Mat2::identity())) == doctest::Approx(0.5));

  const Ensemble gu = build({Family::geometric_uniform, 1.0, kPi / 2.0, 3});
  const McmResult r0 = mcm(gu, 0);
  CHECK(confidence_of(gu, 0, projector(*r0.m_hat)) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("confidence_of error paths") {
  const Ensemble single = Ensemble({{1.0, bloch_to_density({0, 0, 1})}});
  CHECK_THROWS_AS(confidence_of(single, 0, antipodal_projector({0, 0, 1})),
                  undefined_confidence_error);
  CHECK_THROWS_AS(confidence_of(single, 0, HermitianOperator(Mat2::zero())),
                  std::invalid_argument);
  CHECK_THROWS_AS(confidence_of(single, 0, HermitianOperator(pauli_z())),
                  std::invalid_argument);  // not PSD
}

TEST_CASE("confidence is invariant under positive scaling of the element") {
  Rng rng(21);
  for (int i = 0; i < 100; ++i) {
    const Ensemble ens = random_ensemble(2 + static_cast<int>(rng.uniform() * 4), 500 + i);
    const HermitianOperator m = projector(rng.direction());
    const double base = confidence_of(ens, 0, m);
    const double c = std::exp(rng.uniform(-6.0, 6.0));
    const HermitianOperator scaled(m.mat() * c);
    CHECK(std::abs(confidence_of(ens, 0, scaled) - base) < 1e-12);
  }
}

TEST_CASE("mu_pure reference values") {
  for (int n = 2; n <= 5; ++n)
    for (double theta : {0.3, 1.0, kPi / 2.0, 2.5}) {
      const Ensemble gu = build({Family::geometric_uniform, 1.0, theta, n});
      for (int x = 0; x < n; ++x) CHECK(mu_pure(gu, x) == doctest::Approx(0.5).epsilon(1e-12));
    }

  const Ensemble tetra = build({Family::tetrahedron, 1.0, 0.0, 0});
  CHECK(mu_pure(tetra, 0) == doctest::Approx(0.5).epsilon(1e-12));

  const Ensemble pair = build({Family::two_noisy, 1.0, kPi / 2.0, 0});
  CHECK(mu_pure(pair, 0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("mu_pure signals a degenerate ensemble") {
  const Ensemble same = equal_pair({1, 0, 0}, {1, 0, 0});
  CHECK_THROWS_AS(mu_pure(same, 0), degenerate_ensemble_error);
}

TEST_CASE("mu_general reference values") {
  const Ensemble tetra = build({Family::tetrahedron, 0.5, 0.0, 0});
  for (int x = 0; x < 4; ++x)
    CHECK(mu_general(tetra, x) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

  // State of interest equal to the ensemble average: mu = 1, confidence = q.
  const DensityOperator tau = bloch_to_density({0.3, 0.1, -0.2});
  const Ensemble self({{0.5, tau}, {0.5, tau}});
  CHECK(mu_general(self, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mcm(self, 0).confidence == doctest::Approx(0.5).epsilon(1e-12));

  const Ensemble noisy = build({Family::two_noisy, 0.8, kPi / 2.0, 0});
  CHECK(mu_general(noisy, 0) == doctest::Approx(5.0 / 9.0).epsilon(1e-12));
}

TEST_CASE("mu branches agree across the purity boundary") {
  auto mu_at = [](double radius) {
    const Ensemble ens({{0.5, bloch_to_density({radius, 0.0, 0.0})},
                        {0.5, bloch_to_density({0.0, 0.0, 0.6})}});
    return mu_value(ens, 0);
  };
  const double just_pure = mu_at(1.0 - 0.5e-9);   // dispatches to mu_pure
  const double just_mixed = mu_at(1.0 - 2.0e-9);  // dispatches to mu_general
  CHECK(std::abs(just_pure - just_mixed) < 1e-6);
}

TEST_CASE("mcm closed form on reference ensembles") {
  SUBCASE("two noisy states, p = 0.8, theta = pi/2") {
    const Ensemble ens = build({Family::two_noisy, 0.8, kPi / 2.0, 0});
    const McmResult r = mcm(ens, 0);
    CHECK(r.confidence == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(r.mu == doctest::Approx(5.0 / 9.0).epsilon(1e-12));
    CHECK(*r.t == doctest::Approx(1.25).epsilon(1e-12));
    CHECK(test_support::vec_dist(*r.m_hat, {1, 0, 0}) < 1e-12);
  }
  SUBCASE("tetrahedron, p = 1, x = 0") {
    const Ensemble ens = build({Family::tetrahedron, 1.0, 0.0, 0});
    const McmResult r = mcm(ens, 0);
    CHECK(r.confidence == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(test_support::vec_dist(*r.m_hat, {0, 0, 1}) < 1e-12);
  }
  SUBCASE("asymmetric II: t0 = 2 and C = 1/2 at any angle") {
    for (double theta : {0.2, 0.9, 1.7, 2.8}) {
      const Ensemble ens = build({Family::asymmetric_two, 1.0, theta, 0});
      const McmResult r = mcm(ens, 0);
      CHECK(*r.t == doctest::Approx(2.0).epsilon(1e-12));
      CHECK(r.confidence == doctest::Approx(0.5).epsilon(1e-12));
      CHECK(test_support::vec_dist(*r.m_hat, {std::sin(theta), 0, std::cos(theta)}) < 1e-12);
    }
  }
}

TEST_CASE("mcm flags degenerate entries per the documented contract") {
  const Ensemble single({{1.0, bloch_to_density({0, 0, 1})}});
  const McmResult r = mcm(single, 0);
  CHECK(r.degenerate);
  CHECK(r.mu == 1.0);
  CHECK(r.confidence == 1.0);
  CHECK_FALSE(r.t.has_value());
  CHECK_FALSE(r.sigma.has_value());
  CHECK_FALSE(r.m_hat.has_value());

  const Ensemble twin = equal_pair({0.3, 0.2, 0.1}, {0.3, 0.2, 0.1});
  const McmResult rt = mcm(twin, 0);
  CHECK(rt.degenerate);
  CHECK(rt.confidence == doctest::Approx(0.5));
}

TEST_CASE("operator-norm route matches the geometric route") {
  const Ensemble tetra = build({Family::tetrahedron, 1.0, 0.0, 0});
  CHECK(mcm_opnorm(tetra, 0) == doctest::Approx(0.5).epsilon(1e-12));

  const Ensemble gu = build({Family::geometric_uniform, 1.0, kPi / 3.0, 3});
  CHECK(mcm_opnorm(gu, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

  const Ensemble noisy = build({Family::two_noisy, 0.8, kPi / 2.0, 0});
  CHECK(mcm_opnorm(noisy, 0) == doctest::Approx(0.9).epsilon(1e-12));
}

TEST_CASE("operator-norm route refuses a rank-deficient average") {
  const Ensemble single({{1.0, bloch_to_density({0, 0, 1})}});
  CHECK_THROWS_AS(mcm_opnorm(single, 0), std::domain_error);
}

TEST_CASE("n_pure_confidence reference values") {
  const DensityOperator zero = bloch_to_density({0, 0, 1});
  const DensityOperator one = bloch_to_density({0, 0, -1});
  CHECK(n_pure_confidence(zero, {one}) == doctest::Approx(1.0).epsilon(1e-12));

  const Ensemble square = build({Family::geometric_uniform, 1.0, kPi / 2.0, 4});
  std::vector<DensityOperator> others;
  for (int x = 1; x < 4; ++x) others.push_back(square[x].state);
  CHECK(n_pure_confidence(square[0].state, others) == doctest::Approx(0.5).epsilon(1e-12));

  const Ensemble trine = build({Family::geometric_uniform, 1.0, kPi / 2.0, 3});
  CHECK(n_pure_confidence(trine[0].state, {trine[1].state, trine[2].state}) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("n_pure_confidence agrees with the engine on random pure ensembles") {
  Rng rng(22);
  for (int i = 0; i < 50; ++i) {
    const int n = 2 + static_cast<int>(rng.uniform() * 5);
    std::vector<EnsembleEntry> entries;
    std::vector<DensityOperator> others;
    for (int k = 0; k < n; ++k) {
      const DensityOperator st = bloch_to_density(rng.direction());
      entries.push_back({1.0 / n, st});
      if (k > 0) others.push_back(st);
    }
    const Ensemble ens(entries);
    const McmResult r = mcm(ens, 0);
    if (r.degenerate) continue;
    CHECK(std::abs(n_pure_confidence(ens[0].state, others) - r.confidence) < 1e-9);
  }
}

TEST_CASE("outcome rate bound") {
  const Ensemble tetra = build({Family::tetrahedron, 1.0, 0.0, 0});
  CHECK(outcome_rate_bound(tetra, 0) == doctest::Approx(0.5).epsilon(1e-12));

  const Ensemble orth = equal_pair({0, 0, 1}, {0, 0, -1});
  CHECK(outcome_rate_bound(orth, 0) == doctest::Approx(0.5).epsilon(1e-12));

  // The maximally weighted MCM element respects the bound.
  Rng rng(23);
  for (int i = 0; i < 50; ++i) {
    const int n = 2 + static_cast<int>(rng.uniform() * 4);
    std::vector<EnsembleEntry> entries;
    for (int k = 0; k < n; ++k) entries.push_back({1.0 / n, bloch_to_density(rng.direction())});
    const Ensemble ens(entries);
    const McmResult r = mcm(ens, 0);
    if (r.degenerate) continue;
    const double rate = trace_product_re(ens.average().mat(), projector(*r.m_hat).mat());
    CHECK(rate <= outcome_rate_bound(ens, 0) + 1e-9);
  }
}

TEST_CASE("engine invariants on seeded random ensembles") {
  Rng rng(24);
  int checked = 0;
  for (int i = 0; i < 60; ++i) {
    const int n = 2 + static_cast<int>(rng.uniform() * 5);
    const Ensemble ens = random_ensemble(n, 9000 + i);
    for (std::size_t x = 0; x < ens.size(); ++x) {
      const McmResult r = mcm(ens, x);
      REQUIRE_FALSE(r.degenerate);
      ++checked;

      // Complementary state is pure and sits opposite the measurement.
      CHECK(purity(*r.sigma) == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(test_support::vec_dist(*r.m_hat, -density_to_bloch(*r.sigma)) < 1e-9);

      // rho = mu rho_x + (1 - mu) sigma_x.
      CHECK(decomposition_residual(ens, r) < 1e-9);

      // Dual feasibility attained at the boundary.
      const double mineig = oracle::dual_feasibility(ens, x, r.confidence);
      CHECK(mineig >= -1e-9);
      CHECK(mineig <= 1e-8);

      // Complementary slackness: the element never fires on sigma.
      CHECK(trace_product_re(r.sigma->mat(), projector(*r.m_hat).mat()) < 1e-10);

      // Three confidence forms agree pairwise.
      const double from_mu = ens[x].q / mu_value(ens, x);
      const double from_t = ens[x].q * (1.0 + 1.0 / *r.t);
      const double from_ratio = ens[x].q * trace_distance(ens[x].state, *r.sigma) /
                                trace_distance(ens.average(), *r.sigma);
      CHECK(std::abs(from_mu - from_t) < 1e-9);
      CHECK(std::abs(from_mu - from_ratio) < 1e-9);
      CHECK(std::abs(r.confidence - from_mu) < 1e-9);

      // Operator-norm route.
      CHECK(std::abs(mcm_opnorm(ens, x) - r.confidence) < 1e-9);
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("closed form agrees with the grid oracle on random ensembles") {
  Rng rng(25);
  for (int i = 0; i < 20; ++i) {
    const int n = 2 + static_cast<int>(rng.uniform() * 5);
    const Ensemble ens = random_ensemble(n, 15000 + i);
    for (std::size_t x = 0; x < ens.size(); ++x) {
      const McmResult r = mcm(ens, x);
      const auto got = oracle::grid_max_confidence(ens, x);
      CHECK(std::abs(got.value - r.confidence) < 1e-6);
    }
  }
}

TEST_CASE("for equatorial uniform states the MCM is the minimum-error measurement") {
  for (int n = 3; n <= 6; ++n) {
    const Ensemble gu = build({Family::geometric_uniform, 1.0, kPi / 2.0, n});
    for (int x = 0; x < n; ++x) {
      const McmResult r = mcm(gu, x);
      const double phi = 2.0 * kPi * x / n;
      CHECK(test_support::vec_dist(*r.m_hat, {std::cos(phi), std::sin(phi), 0.0}) < 1e-9);
    }
  }
}

TEST_SUITE_END();
