// Built-in ensemble families, their closed-form reference values, and the
// JSON exchange format for ensembles.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mcmq/mcm.hpp"

namespace mcmq {

enum class Family {
  two_noisy,          // p |psi_x><psi_x| + (1-p) I/2, overlap cos(theta)
  geometric_uniform,  // N pure states on a cone, cyclic under 2pi/N rotation
  tetrahedron,        // 4 noisy SIC states, average I/2
  asymmetric_one,     // trine pair fixed, first state tilted by theta
  asymmetric_two,     // |+>, |->, plus a state at polar angle theta
  custom,
};

struct FamilySpec {
  Family family = Family::custom;
  double p = 1.0;      // noise parameter in [0,1] (two_noisy, tetrahedron)
  double theta = 0.0;  // radians
  int n = 0;           // state count (geometric_uniform)
};

/// Closed-form reference values; a field is filled only when the family has
/// a stated closed form for it.
struct GoldenValues {
  std::vector<double> mu;
  std::vector<double> confidence;
  std::vector<double> t;
  std::optional<double> q_inc;
  std::vector<BlochVector> sigma_dirs;  // complementary-state Bloch vectors
  std::vector<BlochVector> m_dirs;      // optimal measurement directions
};

const char* family_name(Family f);
std::optional<Family> family_from_name(std::string_view name);

/// Equal-prior ensemble for the given family; rejects out-of-range
/// parameters.
Ensemble build(const FamilySpec& spec);

/// Closed-form reference values at the spec's parameters.
GoldenValues golden(const FamilySpec& spec);

struct ensemble_parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parse the ensemble JSON document:
///   {"label": "...", "states": [{"q": 0.5, "bloch": [x, y, z]}, ...]}
/// A state may alternatively carry "matrix": [[[re,im],[re,im]],[...]].
/// Priors off by more than 1e-9 from unit sum are rejected; smaller drift is
/// renormalized.
Ensemble parse_ensemble(const std::string& json_text);

/// Inverse of parse_ensemble; doubles survive the round trip exactly.
std::string serialize_ensemble(const Ensemble& ens, std::string_view label = {});

/// Seeded sampler used by tests and the CLI `random` pseudo-family: uniform
/// directions, radii mixing pure and mixed states, Dirichlet priors. The
/// average state is kept safely inside the Bloch ball.
Ensemble random_ensemble(int n, std::uint64_t seed);

}  // namespace mcmq
