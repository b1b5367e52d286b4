#include "doctest.h"
#include "support.hpp"

#include "mcmq/bloch.hpp"

using namespace mcmq;
using test_support::kPi;
using test_support::max_abs_diff;
using test_support::Rng;

TEST_SUITE_BEGIN("bloch");

TEST_CASE("convention: rho = (I + r.sigma)/2 with sigma = (X, Y, Z)") {
  Rng rng(11);
  for (int i = 0; i < 20; ++i) {
    const BlochVector r = rng.state_vector();
    const Mat2 expected =
        0.5 * (Mat2::identity() + r.x * pauli_x() + r.y * pauli_y() + r.z * pauli_z());
    CHECK(max_abs_diff(bloch_to_density(r).mat(), expected) < 1e-15);
  }
}

TEST_CASE("bloch_to_density on reference points") {
  CHECK(max_abs_diff(bloch_to_density({0, 0, 0}).mat(), 0.5 * Mat2::identity()) == 0.0);
  CHECK(max_abs_diff(bloch_to_density({0, 0, 1}).mat(), Mat2{1.0, 0.0, 0.0, 0.0}) == 0.0);

  const double th = kPi / 3.0;
  const Mat2 expected{0.5 * (1.0 + std::cos(th)), 0.5 * std::sin(th),
                      0.5 * std::sin(th), 0.5 * (1.0 - std::cos(th))};
  CHECK(max_abs_diff(bloch_to_density({std::sin(th), 0, std::cos(th)}).mat(), expected) < 1e-16);
}

TEST_CASE("bloch_to_density rejects vectors outside the ball") {
  CHECK_THROWS_AS(bloch_to_density({0, 0, 1.01}), std::invalid_argument);
  CHECK_NOTHROW(bloch_to_density({0, 0, 1.0 + 0.5e-9}));  // clamped
  CHECK(density_to_bloch(bloch_to_density({0, 0, 1.0 + 0.5e-9})).norm() <= 1.0);
}

TEST_CASE("density_to_bloch on reference points") {
  CHECK(density_to_bloch(DensityOperator(0.5 * Mat2::identity())).norm() == 0.0);
  const BlochVector z = density_to_bloch(DensityOperator(Mat2{1.0, 0.0, 0.0, 0.0}));
  CHECK(test_support::vec_dist(z, {0, 0, 1}) == 0.0);

  // Tetrahedron state x = 1 at p = 1.
  const double r = 2.0 * std::sqrt(2.0) / 3.0;
  const BlochVector expect{r * std::cos(2.0 * kPi / 3.0), r * std::sin(2.0 * kPi / 3.0),
                           -1.0 / 3.0};
  const cplx amp0 = std::sqrt(1.0 / 3.0);
  const cplx amp1 = std::exp(cplx(0.0, 2.0 * kPi / 3.0)) * std::sqrt(2.0 / 3.0);
  const Mat2 ket{amp0 * std::conj(amp0), amp0 * std::conj(amp1),
                 amp1 * std::conj(amp0), amp1 * std::conj(amp1)};
  CHECK(test_support::vec_dist(density_to_bloch(DensityOperator(ket)), expect) < 1e-15);
}

TEST_CASE("density validation rejects malformed input") {
  CHECK_THROWS_AS(DensityOperator(Mat2{1.0, 0.2, 0.3, 0.0}), std::invalid_argument);  // not Hermitian
  CHECK_THROWS_AS(DensityOperator(Mat2{0.9, 0.0, 0.0, 0.0}), std::invalid_argument);  // trace != 1
  CHECK_THROWS_AS(DensityOperator(Mat2{1.2, 0.0, 0.0, -0.2}), std::invalid_argument); // not PSD
}

TEST_CASE("overlap on reference pairs") {
  const DensityOperator mixed = DensityOperator::maximally_mixed();
  CHECK(overlap(mixed, mixed) == doctest::Approx(0.5).epsilon(1e-14));

  const DensityOperator zero = bloch_to_density({0, 0, 1});
  const DensityOperator one = bloch_to_density({0, 0, -1});
  CHECK(overlap(zero, one) == doctest::Approx(0.0).epsilon(1e-14));

  // Pure pair with <psi0|psi1> = cos(pi/3).
  const double th = kPi / 3.0;
  const DensityOperator a = bloch_to_density({std::sin(th), 0, std::cos(th)});
  const DensityOperator b = bloch_to_density({-std::sin(th), 0, std::cos(th)});
  CHECK(overlap(a, b) == doctest::Approx(0.25).epsilon(1e-13));
}

TEST_CASE("purity on reference states") {
  CHECK(purity(DensityOperator::maximally_mixed()) == doctest::Approx(0.5));
  CHECK(purity(bloch_to_density({1, 0, 0})) == doctest::Approx(1.0));
  CHECK(purity(bloch_to_density({0.8 * std::sin(1.0), 0, 0.8 * std::cos(1.0)})) ==
        doctest::Approx(0.82).epsilon(1e-13));
}

TEST_CASE("trace_distance on reference pairs") {
  const DensityOperator zero = bloch_to_density({0, 0, 1});
  const DensityOperator one = bloch_to_density({0, 0, -1});
  CHECK(trace_distance(zero, one) == doctest::Approx(2.0));
  CHECK(trace_distance(zero, zero) == 0.0);
  CHECK(trace_distance(zero, DensityOperator::maximally_mixed()) == doctest::Approx(1.0));
}

TEST_CASE("trace distance equals sqrt(2) times the Hilbert-Schmidt distance") {
  Rng rng(12);
  for (int i = 0; i < 200; ++i) {
    const DensityOperator a = bloch_to_density(rng.state_vector());
    const DensityOperator b = bloch_to_density(rng.state_vector());
    const Mat2 d = a.mat() - b.mat();
    const double hs = std::sqrt(trace_product_re(d, d));
    CHECK(std::abs(std::sqrt(2.0) * hs - trace_distance(a, b)) < 1e-12);
  }
}

TEST_CASE("eigen2 on Pauli operators") {
  const EigenPair2 id = eigen2(HermitianOperator(Mat2::identity()));
  CHECK(id.values[0] == doctest::Approx(1.0));
  CHECK(id.values[1] == doctest::Approx(1.0));

  const EigenPair2 z = eigen2(HermitianOperator(pauli_z()));
  CHECK(z.values[0] == doctest::Approx(1.0));
  CHECK(z.values[1] == doctest::Approx(-1.0));
  CHECK(std::abs(z.vectors[0][0]) == doctest::Approx(1.0));
  CHECK(std::abs(z.vectors[1][1]) == doctest::Approx(1.0));

  const EigenPair2 x = eigen2(HermitianOperator(pauli_x()));
  CHECK(x.values[0] == doctest::Approx(1.0));
  CHECK(x.values[1] == doctest::Approx(-1.0));
  CHECK(std::abs(x.vectors[0][0]) == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(std::abs(x.vectors[0][1]) == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("eigen2 rejects non-Hermitian input") {
  CHECK_THROWS_AS(HermitianOperator(Mat2{0.0, 1.0, 2.0, 0.0}), std::invalid_argument);
}

TEST_CASE("eigen2 reconstructs random Hermitian matrices") {
  Rng rng(13);
  for (int i = 0; i < 500; ++i) {
    const HermitianOperator h(rng.hermitian());
    const EigenPair2 e = eigen2(h);
    CHECK(e.values[0] >= e.values[1]);

    Mat2 rec = Mat2::zero();
    for (int k = 0; k < 2; ++k) {
      const auto& v = e.vectors[k];
      rec = rec + e.values[k] * Mat2{v[0] * std::conj(v[0]), v[0] * std::conj(v[1]),
                                     v[1] * std::conj(v[0]), v[1] * std::conj(v[1])};
    }
    CHECK(max_abs_diff(rec, h.mat()) < 1e-12);

    const cplx ortho = std::conj(e.vectors[0][0]) * e.vectors[1][0] +
                       std::conj(e.vectors[0][1]) * e.vectors[1][1];
    CHECK(std::abs(ortho) < 1e-12);
    CHECK(operator_norm(h) ==
          doctest::Approx(std::max(std::abs(e.values[0]), std::abs(e.values[1]))));
  }
}

TEST_CASE("pure_state_from_angles hits the advertised Bloch vectors") {
  CHECK(max_abs_diff(pure_state_from_angles(0.0, 1.23).mat(), Mat2{1.0, 0.0, 0.0, 0.0}) < 1e-15);
  CHECK(test_support::vec_dist(density_to_bloch(pure_state_from_angles(kPi / 2.0, 0.0)),
                               {1, 0, 0}) < 1e-15);
  CHECK(max_abs_diff(pure_state_from_angles(kPi, 0.0).mat(), Mat2{0.0, 0.0, 0.0, 1.0}) < 1e-15);
}

TEST_CASE("antipodal projector annihilates its partner") {
  const HermitianOperator p1 = antipodal_projector({0, 0, 1});
  CHECK(max_abs_diff(p1.mat(), Mat2{0.0, 0.0, 0.0, 1.0}) < 1e-15);

  const HermitianOperator minus = antipodal_projector({1, 0, 0});
  CHECK(max_abs_diff(minus.mat(), Mat2{0.5, -0.5, -0.5, 0.5}) < 1e-15);

  CHECK_THROWS_AS(antipodal_projector({0.5, 0, 0}), std::invalid_argument);

  Rng rng(14);
  for (int i = 0; i < 50; ++i) {
    const BlochVector d = rng.direction();
    CHECK((projector(d).mat() * antipodal_projector(d).mat()).max_abs() < 1e-15);
  }
}

TEST_CASE("round trip density <-> bloch is the identity") {
  Rng rng(15);
  for (int i = 0; i < 10000; ++i) {
    const BlochVector r = rng.state_vector();
    const BlochVector back = density_to_bloch(bloch_to_density(r));
    CHECK(test_support::vec_dist(r, back) < 1e-12);
  }
}

TEST_CASE("overlap from matrices equals the Bloch form") {
  Rng rng(16);
  for (int i = 0; i < 1000; ++i) {
    const BlochVector ra = rng.state_vector();
    const BlochVector rb = rng.state_vector();
    const double from_bloch = 0.5 * (1.0 + ra.dot(rb));
    CHECK(std::abs(overlap(bloch_to_density(ra), bloch_to_density(rb)) - from_bloch) < 1e-12);
  }
}

TEST_SUITE_END();
