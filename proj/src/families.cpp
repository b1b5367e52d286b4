#include "mcmq/families.hpp"

#include <cctype>
#include <cmath>
#include <random>

#include "json.hpp"

namespace mcmq {

namespace {

using nlohmann::json;

constexpr double kPi = 3.14159265358979323846;

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

Ensemble equal_prior(std::vector<BlochVector> blochs) {
  std::vector<EnsembleEntry> entries;
  const double q = 1.0 / static_cast<double>(blochs.size());
  entries.reserve(blochs.size());
  for (const auto& b : blochs) entries.push_back({q, bloch_to_density(b)});
  return Ensemble(std::move(entries));
}

std::vector<BlochVector> two_noisy_blochs(double p, double theta) {
  const double st = std::sin(theta), ct = std::cos(theta);
  return {{p * st, 0.0, p * ct}, {-p * st, 0.0, p * ct}};
}

std::vector<BlochVector> gu_blochs(int n, double theta) {
  const double st = std::sin(theta), ct = std::cos(theta);
  std::vector<BlochVector> out;
  for (int x = 0; x < n; ++x) {
    const double phi = 2.0 * kPi * x / n;
    out.push_back({std::cos(phi) * st, std::sin(phi) * st, ct});
  }
  return out;
}

std::vector<BlochVector> tetrahedron_dirs() {
  const double r = 2.0 * std::sqrt(2.0) / 3.0;
  std::vector<BlochVector> out{{0.0, 0.0, 1.0}};
  for (int x = 1; x <= 3; ++x) {
    const double phi = 2.0 * kPi * x / 3.0;
    out.push_back({r * std::cos(phi), r * std::sin(phi), -1.0 / 3.0});
  }
  return out;
}

std::vector<BlochVector> asymmetric_one_blochs(double theta) {
  const double h = std::sqrt(3.0) / 2.0;
  return {{std::sin(theta), 0.0, std::cos(theta)}, {h, 0.0, -0.5}, {-h, 0.0, -0.5}};
}

std::vector<BlochVector> asymmetric_two_blochs(double theta) {
  return {{std::sin(theta), 0.0, std::cos(theta)}, {1.0, 0.0, 0.0}, {-1.0, 0.0, 0.0}};
}

void validate(const FamilySpec& spec) {
  switch (spec.family) {
    case Family::two_noisy:
      require(spec.p >= 0.0 && spec.p <= 1.0, "two_noisy: p must be in [0,1]");
      require(spec.theta > 0.0 && spec.theta < kPi, "two_noisy: theta must be in (0,pi)");
      break;
    case Family::geometric_uniform:
      require(spec.n >= 2, "geometric_uniform: n must be >= 2");
      require(spec.theta > 0.0 && spec.theta < kPi, "geometric_uniform: theta must be in (0,pi)");
      break;
    case Family::tetrahedron:
      require(spec.p >= 0.0 && spec.p <= 1.0, "tetrahedron: p must be in [0,1]");
      break;
    case Family::asymmetric_one:
    case Family::asymmetric_two:
      require(spec.theta >= 0.0 && spec.theta <= 2.0 * kPi,
              "asymmetric family: theta must be in [0,2pi]");
      break;
    case Family::custom:
      throw std::invalid_argument("custom ensembles are built from explicit states");
  }
}

}  // namespace

const char* family_name(Family f) {
  switch (f) {
    case Family::two_noisy: return "two_noisy";
    case Family::geometric_uniform: return "geometric_uniform";
    case Family::tetrahedron: return "tetrahedron";
    case Family::asymmetric_one: return "asymmetric_I";
    case Family::asymmetric_two: return "asymmetric_II";
    case Family::custom: return "custom";
  }
  return "?";
}

std::optional<Family> family_from_name(std::string_view name) {
  std::string low(name);
  for (char& c : low) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (low == "two_noisy") return Family::two_noisy;
  if (low == "geometric_uniform" || low == "gu") return Family::geometric_uniform;
  if (low == "tetrahedron") return Family::tetrahedron;
  if (low == "asymmetric_i") return Family::asymmetric_one;
  if (low == "asymmetric_ii") return Family::asymmetric_two;
  if (low == "custom") return Family::custom;
  return std::nullopt;
}

Ensemble build(const FamilySpec& spec) {
  validate(spec);
  switch (spec.family) {
    case Family::two_noisy:
      return equal_prior(two_noisy_blochs(spec.p, spec.theta));
    case Family::geometric_uniform:
      return equal_prior(gu_blochs(spec.n, spec.theta));
    case Family::tetrahedron: {
      auto dirs = tetrahedron_dirs();
      for (auto& d : dirs) d = d * spec.p;
      return equal_prior(dirs);
    }
    case Family::asymmetric_one:
      return equal_prior(asymmetric_one_blochs(spec.theta));
    case Family::asymmetric_two:
      return equal_prior(asymmetric_two_blochs(spec.theta));
    case Family::custom:
      break;
  }
  throw std::invalid_argument("custom ensembles are built from explicit states");
}

GoldenValues golden(const FamilySpec& spec) {
  validate(spec);
  GoldenValues g;
  switch (spec.family) {
    case Family::two_noisy: {
      const double p = spec.p;
      const double st = std::sin(spec.theta), ct = std::cos(spec.theta);
      const double conf = 0.5 * (1.0 + p * st / std::sqrt(1.0 - p * p * ct * ct));
      g.confidence = {conf, conf};
      g.mu = {0.5 / conf, 0.5 / conf};
      g.q_inc = p * std::abs(ct);
      if (p > 0.0) {
        const double t = std::sqrt(1.0 - p * p * ct * ct) / (p * st);
        g.t = {t, t};
        for (int x = 0; x < 2; ++x) {
          const double sx = (x == 0) ? 1.0 : -1.0;
          g.sigma_dirs.push_back({-sx * p * t * st, 0.0, p * ct});
          g.m_dirs.push_back({sx * p * t * st, 0.0, -p * ct});
        }
      }
      break;
    }
    case Family::geometric_uniform: {
      const double st = std::sin(spec.theta), ct = std::cos(spec.theta);
      for (int x = 0; x < spec.n; ++x) {
        g.mu.push_back(0.5);
        g.confidence.push_back(2.0 / spec.n);
        g.t.push_back(1.0);
        const double phi = 2.0 * kPi * x / spec.n;
        g.sigma_dirs.push_back({-std::cos(phi) * st, -std::sin(phi) * st, ct});
        g.m_dirs.push_back({std::cos(phi) * st, std::sin(phi) * st, -ct});
      }
      g.q_inc = std::abs(ct);
      break;
    }
    case Family::tetrahedron: {
      const double p = spec.p;
      for (int x = 0; x < 4; ++x) {
        g.mu.push_back(1.0 / (1.0 + p));
        g.confidence.push_back(0.25 * (1.0 + p));
      }
      if (p > 0.0) {
        for (const auto& d : tetrahedron_dirs()) {
          g.t.push_back(1.0 / p);
          g.sigma_dirs.push_back(-d);
          g.m_dirs.push_back(d);
        }
      }
      g.q_inc = 0.0;
      break;
    }
    case Family::asymmetric_one: {
      const double c1 = 1.0 - std::cos(spec.theta);
      const double num = 9.0 - 2.0 * c1;
      const double s3 = 3.0 * std::sqrt(3.0) * std::sin(spec.theta);
      g.t = {num / (9.0 - 4.0 * c1), num / (9.0 - c1 - s3), num / (9.0 - c1 + s3)};
      for (double t : g.t) {
        g.confidence.push_back((1.0 + 1.0 / t) / 3.0);
        g.mu.push_back(t / (1.0 + t));
      }
      g.q_inc = 0.0;
      break;
    }
    case Family::asymmetric_two: {
      const double st = std::sin(spec.theta), ct = std::cos(spec.theta);
      g.t = {2.0, 4.0 / (5.0 - 3.0 * st), 4.0 / (5.0 + 3.0 * st)};
      for (double t : g.t) {
        g.confidence.push_back((1.0 + 1.0 / t) / 3.0);
        g.mu.push_back(t / (1.0 + t));
      }
      const BlochVector s{st / 3.0, 0.0, ct / 3.0};
      g.sigma_dirs.push_back({-st, 0.0, -ct});
      g.sigma_dirs.push_back(BlochVector{st / 3.0 - 1.0, 0.0, ct / 3.0} * g.t[1] + s);
      g.sigma_dirs.push_back(BlochVector{st / 3.0 + 1.0, 0.0, ct / 3.0} * g.t[2] + s);
      for (const auto& r : g.sigma_dirs) g.m_dirs.push_back(-r);
      g.q_inc = 0.0;
      break;
    }
    case Family::custom:
      break;
  }
  return g;
}

Ensemble parse_ensemble(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ensemble_parse_error(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("states") || !doc["states"].is_array() ||
      doc["states"].empty())
    throw ensemble_parse_error("document must contain a nonempty \"states\" array");

  std::vector<EnsembleEntry> entries;
  double sum = 0.0;
  for (const auto& st : doc["states"]) {
    if (!st.is_object() || !st.contains("q") || !st["q"].is_number())
      throw ensemble_parse_error("each state needs a numeric prior \"q\"");
    const double q = st["q"].get<double>();
    if (!(q > 0.0)) throw ensemble_parse_error("priors must be positive");
    sum += q;

    try {
      if (st.contains("bloch")) {
        const auto& b = st["bloch"];
        if (!b.is_array() || b.size() != 3)
          throw ensemble_parse_error("\"bloch\" must be an array of three numbers");
        entries.push_back(
            {q, bloch_to_density({b[0].get<double>(), b[1].get<double>(), b[2].get<double>()})});
      } else if (st.contains("matrix")) {
        const auto& m = st["matrix"];
        if (!m.is_array() || m.size() != 2 || !m[0].is_array() || m[0].size() != 2 ||
            !m[1].is_array() || m[1].size() != 2)
          throw ensemble_parse_error("\"matrix\" must be a 2x2 array of [re, im] pairs");
        auto entry = [&](int r, int c) {
          const auto& e = m[r][c];
          if (!e.is_array() || e.size() != 2)
            throw ensemble_parse_error("matrix entries must be [re, im] pairs");
          return cplx(e[0].get<double>(), e[1].get<double>());
        };
        entries.push_back(
            {q, DensityOperator({entry(0, 0), entry(0, 1), entry(1, 0), entry(1, 1)})});
      } else {
        throw ensemble_parse_error("each state needs \"bloch\" or \"matrix\"");
      }
    } catch (const ensemble_parse_error&) {
      throw;
    } catch (const json::exception& e) {
      throw ensemble_parse_error(std::string("malformed state entry: ") + e.what());
    } catch (const std::invalid_argument& e) {
      throw ensemble_parse_error(std::string("state entry is not a valid qubit state: ") + e.what());
    }
  }

  if (std::abs(sum - 1.0) > 1e-9)
    throw ensemble_parse_error("priors must sum to 1 within 1e-9 (got " + std::to_string(sum) + ")");
  for (auto& e : entries) e.q /= sum;
  return Ensemble(std::move(entries));
}

std::string serialize_ensemble(const Ensemble& ens, std::string_view label) {
  json doc;
  if (!label.empty()) doc["label"] = std::string(label);
  doc["states"] = json::array();
  for (std::size_t i = 0; i < ens.size(); ++i) {
    const BlochVector b = ens.bloch(i);
    doc["states"].push_back({{"q", ens[i].q}, {"bloch", {b.x, b.y, b.z}}});
  }
  return doc.dump(2);
}

Ensemble random_ensemble(int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("ensemble size must be >= 1");
  std::mt19937_64 rng(seed);
  auto uniform = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

  for (int attempt = 0; attempt < 256; ++attempt) {
    std::vector<EnsembleEntry> entries;
    std::vector<double> priors(n);
    double psum = 0.0;
    for (auto& q : priors) {
      q = -std::log(std::max(uniform(), 1e-300));
      psum += q;
    }
    bool ok = true;
    for (auto& q : priors) {
      q /= psum;
      ok = ok && q > 1e-3;
    }
    if (!ok) continue;

    BlochVector avg{};
    for (int i = 0; i < n; ++i) {
      const double zc = 2.0 * uniform() - 1.0;
      const double phi = 2.0 * kPi * uniform();
      const double radius = uniform() < 0.25 ? 1.0 : 0.1 + 0.85 * uniform();
      const double sz = std::sqrt(1.0 - zc * zc);
      const BlochVector b{radius * sz * std::cos(phi), radius * sz * std::sin(phi), radius * zc};
      avg = avg + b * priors[i];
      entries.push_back({priors[i], bloch_to_density(b)});
    }
    if (avg.norm() > 0.98) continue;  // keep the operator-norm route well conditioned
    return Ensemble(std::move(entries));
  }
  throw std::runtime_error("failed to sample a well-conditioned random ensemble");
}

}  // namespace mcmq
