#include "mcmq/cli.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "mcmq/baselines.hpp"
#include "mcmq/families.hpp"
#include "mcmq/oracle.hpp"
#include "mcmq/povm.hpp"

namespace mcmq::cli {

namespace {

using nlohmann::json;

constexpr double kPi = 3.14159265358979323846;
constexpr std::uint64_t kDefaultSeed = 12345;  // documented default for `random`

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct SourceOpts {
  std::string file;
  std::string family;
  double p = 1.0;
  double theta = kPi / 2.0;
  int n = 3;
  bool degrees = false;
  std::uint64_t seed = kDefaultSeed;

  double theta_rad() const { return degrees ? theta * kPi / 180.0 : theta; }
};

void add_source_flags(CLI::App* cmd, SourceOpts& src) {
  cmd->add_option("--ensemble", src.file, "Ensemble JSON file");
  cmd->add_option("--family", src.family,
                  "Built-in family (two_noisy, geometric_uniform, tetrahedron, "
                  "asymmetric_I, asymmetric_II, random)");
  cmd->add_option("--p", src.p, "Noise parameter in [0,1]");
  cmd->add_option("--theta", src.theta, "Angle parameter (radians unless --degrees)");
  cmd->add_option("--n", src.n, "State count (geometric_uniform, random)");
  cmd->add_flag("--degrees", src.degrees, "Interpret angles as degrees");
  cmd->add_option("--seed", src.seed, "Seed for the random pseudo-family");
}

FamilySpec spec_from(const SourceOpts& src, Family fam) {
  FamilySpec spec;
  spec.family = fam;
  spec.p = src.p;
  spec.theta = src.theta_rad();
  spec.n = src.n;
  return spec;
}

struct LoadedEnsemble {
  Ensemble ens;
  std::string description;
  std::optional<FamilySpec> spec;  // set for built-in families
};

LoadedEnsemble load_source(const SourceOpts& src) {
  if (!src.file.empty() && !src.family.empty())
    throw std::invalid_argument("give either --ensemble or --family, not both");
  if (!src.file.empty()) {
    std::ifstream in(src.file);
    if (!in) throw ensemble_parse_error("cannot open ensemble file: " + src.file);
    std::stringstream ss;
    ss << in.rdbuf();
    return {parse_ensemble(ss.str()), src.file, std::nullopt};
  }
  if (src.family.empty()) throw std::invalid_argument("an ensemble source is required");
  if (src.family == "random") {
    std::ostringstream d;
    d << "random(n=" << src.n << ", seed=" << src.seed << ")";
    return {random_ensemble(src.n, src.seed), d.str(), std::nullopt};
  }
  const auto fam = family_from_name(src.family);
  if (!fam || *fam == Family::custom)
    throw std::invalid_argument("unknown family: " + src.family);
  const FamilySpec spec = spec_from(src, *fam);
  std::ostringstream d;
  d << family_name(*fam) << "(";
  switch (*fam) {
    case Family::two_noisy: d << "p=" << spec.p << ", theta=" << spec.theta; break;
    case Family::geometric_uniform: d << "n=" << spec.n << ", theta=" << spec.theta; break;
    case Family::tetrahedron: d << "p=" << spec.p; break;
    default: d << "theta=" << spec.theta; break;
  }
  d << ")";
  return {build(spec), d.str(), spec};
}

// ---------------------------------------------------------------------------
// compute

struct StateReport {
  McmResult result;
  double q = 0.0;
  double dual_min_eig = 0.0;
};

struct ComputeReport {
  std::vector<StateReport> states;
  std::optional<PovmCompletion> povm;
  double rank1_residual = 0.0;
  bool any_degenerate = false;
};

ComputeReport compute_report(const Ensemble& ens) {
  ComputeReport rep;
  std::vector<BlochVector> dirs;
  bool have_all_dirs = true;
  for (std::size_t x = 0; x < ens.size(); ++x) {
    StateReport sr;
    sr.result = mcm(ens, x);
    sr.q = ens[x].q;
    sr.dual_min_eig = oracle::dual_feasibility(ens, x, sr.result.confidence);
    rep.any_degenerate = rep.any_degenerate || sr.result.degenerate;
    if (sr.result.m_hat)
      dirs.push_back(*sr.result.m_hat);
    else
      have_all_dirs = false;
    rep.states.push_back(std::move(sr));
  }
  if (have_all_dirs && !dirs.empty()) {
    rep.povm = minimize_inconclusive(ens, dirs);
    rep.rank1_residual = rank_one_residual(rep.povm->weights, dirs);
  }
  return rep;
}

json state_to_json(const StateReport& sr) {
  json j;
  j["index"] = sr.result.index;
  j["q"] = sr.q;
  j["mu"] = sr.result.mu;
  j["confidence"] = sr.result.confidence;
  j["degenerate"] = sr.result.degenerate;
  j["dual_min_eig"] = sr.dual_min_eig;
  if (sr.result.t) j["t"] = *sr.result.t;
  if (sr.result.sigma) {
    const BlochVector b = density_to_bloch(*sr.result.sigma);
    j["sigma_bloch"] = {b.x, b.y, b.z};
  }
  if (sr.result.m_hat) j["m_hat"] = {sr.result.m_hat->x, sr.result.m_hat->y, sr.result.m_hat->z};
  return j;
}

json report_to_json(const LoadedEnsemble& src, const ComputeReport& rep) {
  json j;
  j["ensemble"] = src.description;
  j["status"] = rep.any_degenerate ? "degenerate" : "ok";
  j["states"] = json::array();
  for (const auto& sr : rep.states) j["states"].push_back(state_to_json(sr));
  if (rep.povm) {
    j["povm"] = {{"weights", rep.povm->weights},
                 {"q_inc", rep.povm->q_inc},
                 {"complete", rep.povm->complete},
                 {"rank_one_residual", rep.rank1_residual}};
  }
  return j;
}

void print_text_report(std::ostream& os, const LoadedEnsemble& src, const ComputeReport& rep,
                       std::optional<std::size_t> only_state) {
  os << "ensemble: " << src.description << " (" << rep.states.size() << " states)\n";
  os << "state        q          mu          C*           t"
     << "            sigma bloch                         m_hat bloch                   dual min eig\n";
  auto vec3 = [](const std::optional<BlochVector>& v) {
    if (!v) return std::string("-");
    std::ostringstream s;
    s.precision(6);
    s << "(" << v->x << ", " << v->y << ", " << v->z << ")";
    return s.str();
  };
  for (const auto& sr : rep.states) {
    if (only_state && sr.result.index != *only_state) continue;
    std::ostringstream line;
    line.precision(9);
    line << sr.result.index << (sr.result.degenerate ? " [degenerate]" : "") << "  " << sr.q
         << "  " << sr.result.mu << "  " << sr.result.confidence << "  "
         << (sr.result.t ? fmt17(*sr.result.t).substr(0, 12) : std::string("-")) << "  "
         << vec3(sr.result.sigma ? std::optional<BlochVector>(density_to_bloch(*sr.result.sigma))
                                 : std::nullopt)
         << "  " << vec3(sr.result.m_hat) << "  " << sr.dual_min_eig;
    os << line.str() << "\n";
  }
  if (!only_state) {
    if (rep.povm) {
      os << "povm weights:";
      for (double a : rep.povm->weights) os << " " << fmt17(a);
      os << "\n";
      os << "q_inc: " << fmt17(rep.povm->q_inc) << (rep.povm->complete ? "  (complete POVM)" : "")
         << "  rank-one residual: " << rep.rank1_residual << "\n";
    } else {
      os << "povm: skipped (degenerate state present)\n";
    }
  }
  if (rep.any_degenerate) os << "status: degenerate\n";
}

// ---------------------------------------------------------------------------
// sweep

struct SweepRow {
  double value = 0.0;
  FamilySpec spec;
  std::string status = "ok";  // ok | degenerate | error: ...
  std::optional<ComputeReport> report;
  std::optional<double> helstrom;
  std::optional<double> usd;
};

// Baselines attach to two-state rows only. For the noisy family the USD
// reference uses the underlying pure states.
void attach_baselines(const Ensemble& ens, const FamilySpec& spec, SweepRow& row) {
  if (ens.size() != 2) return;
  row.helstrom = helstrom_error(
      TwoStateProblem(ens[0].q, ens[0].state, ens[1].q, ens[1].state));
  if (spec.family == Family::two_noisy) {
    const FamilySpec pure{Family::two_noisy, 1.0, spec.theta, 0};
    const Ensemble pure_ens = build(pure);
    row.usd = usd_inconclusive(ens[0].q, pure_ens[0].state, ens[1].q, pure_ens[1].state);
  } else if (purity(ens[0].state) >= 1.0 - tol::purity &&
             purity(ens[1].state) >= 1.0 - tol::purity &&
             trace_distance(ens[0].state, ens[1].state) > tol::mat) {
    row.usd = usd_inconclusive(ens[0].q, ens[0].state, ens[1].q, ens[1].state);
  }
}

std::vector<std::string> csv_header(std::size_t n_max) {
  std::vector<std::string> cols{"family", "param",        "value",   "p",
                                "theta",  "n",            "status",  "q_inc",
                                "complete", "sum_a",      "helstrom_err", "usd_inc"};
  for (std::size_t x = 0; x < n_max; ++x) {
    const std::string s = std::to_string(x);
    for (const char* base : {"q", "mu", "conf", "t", "sigma_x", "sigma_y", "sigma_z",
                             "mhat_x", "mhat_y", "mhat_z", "dual", "a"})
      cols.push_back(base + s);
  }
  return cols;
}

std::vector<std::string> csv_row(const SweepRow& row, const std::string& param,
                                 std::size_t n_max) {
  std::vector<std::string> out;
  out.push_back(family_name(row.spec.family));
  out.push_back(param);
  out.push_back(fmt17(row.value));
  out.push_back(fmt17(row.spec.p));
  out.push_back(fmt17(row.spec.theta));
  out.push_back(std::to_string(row.spec.n));
  out.push_back(row.status);
  const ComputeReport* rep = row.report ? &*row.report : nullptr;
  if (rep && rep->povm) {
    double sum_a = 0.0;
    for (double a : rep->povm->weights) sum_a += a;
    out.push_back(fmt17(rep->povm->q_inc));
    out.push_back(rep->povm->complete ? "1" : "0");
    out.push_back(fmt17(sum_a));
  } else {
    out.insert(out.end(), {"", "", ""});
  }
  out.push_back(row.helstrom ? fmt17(*row.helstrom) : "");
  out.push_back(row.usd ? fmt17(*row.usd) : "");
  for (std::size_t x = 0; x < n_max; ++x) {
    if (!rep || x >= rep->states.size()) {
      for (int k = 0; k < 12; ++k) out.push_back("");
      continue;
    }
    const StateReport& sr = rep->states[x];
    out.push_back(fmt17(sr.q));
    out.push_back(fmt17(sr.result.mu));
    out.push_back(fmt17(sr.result.confidence));
    out.push_back(sr.result.t ? fmt17(*sr.result.t) : "");
    if (sr.result.sigma) {
      const BlochVector b = density_to_bloch(*sr.result.sigma);
      out.push_back(fmt17(b.x));
      out.push_back(fmt17(b.y));
      out.push_back(fmt17(b.z));
    } else {
      out.insert(out.end(), {"", "", ""});
    }
    if (sr.result.m_hat) {
      out.push_back(fmt17(sr.result.m_hat->x));
      out.push_back(fmt17(sr.result.m_hat->y));
      out.push_back(fmt17(sr.result.m_hat->z));
    } else {
      out.insert(out.end(), {"", "", ""});
    }
    out.push_back(fmt17(sr.dual_min_eig));
    out.push_back(rep->povm && x < rep->povm->weights.size() ? fmt17(rep->povm->weights[x]) : "");
  }
  return out;
}

json row_to_json(const SweepRow& row, const std::string& param) {
  json j;
  j["family"] = family_name(row.spec.family);
  j["param"] = param;
  j["value"] = row.value;
  j["p"] = row.spec.p;
  j["theta"] = row.spec.theta;
  j["n"] = row.spec.n;
  j["status"] = row.status;
  if (row.report) {
    j["states"] = json::array();
    for (const auto& sr : row.report->states) j["states"].push_back(state_to_json(sr));
    if (row.report->povm) {
      j["povm"] = {{"weights", row.report->povm->weights},
                   {"q_inc", row.report->povm->q_inc},
                   {"complete", row.report->povm->complete}};
    }
  }
  if (row.helstrom) j["helstrom_err"] = *row.helstrom;
  if (row.usd) j["usd_inc"] = *row.usd;
  return j;
}

// ---------------------------------------------------------------------------

int write_output(const std::string& text, const std::string& out_file, std::ostream& os,
                 std::ostream& err) {
  if (out_file.empty()) {
    os << text;
    return kExitOk;
  }
  std::ofstream f(out_file, std::ios::binary);
  if (!f) {
    err << "cannot write to " << out_file << "\n";
    return kExitUsage;
  }
  f << text;
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Maximum-confidence measurements for qubit ensembles"};
  app.require_subcommand(1);

  // -- compute ------------------------------------------------------------
  auto* c_compute = app.add_subcommand("compute", "Closed-form MCM and POVM completion");
  SourceOpts comp_src;
  add_source_flags(c_compute, comp_src);
  std::string comp_state = "all";
  std::string comp_format = "text";
  std::string comp_out;
  c_compute->add_option("--state", comp_state, "State index or 'all'");
  c_compute->add_option("--format", comp_format, "text | csv | json")
      ->check(CLI::IsMember({"text", "csv", "json"}));
  c_compute->add_option("--out", comp_out, "Output file (default stdout)");

  // -- sweep --------------------------------------------------------------
  auto* c_sweep = app.add_subcommand("sweep", "Parameter sweep over a built-in family");
  SourceOpts sweep_src;
  add_source_flags(c_sweep, sweep_src);
  std::string sweep_param = "theta";
  double sweep_start = 0.0, sweep_stop = 0.0;
  int sweep_steps = 0;
  int sweep_jobs = 1;
  std::string sweep_format = "csv";
  std::string sweep_out;
  c_sweep->add_option("--param", sweep_param, "Swept parameter: p | theta | n")
      ->check(CLI::IsMember({"p", "theta", "n"}));
  c_sweep->add_option("--start", sweep_start, "First parameter value")->required();
  c_sweep->add_option("--stop", sweep_stop, "Last parameter value")->required();
  c_sweep->add_option("--steps", sweep_steps, "Number of sweep points (>= 2)")->required();
  c_sweep->add_option("--jobs", sweep_jobs, "Worker threads");
  c_sweep->add_option("--format", sweep_format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));
  c_sweep->add_option("--out", sweep_out, "Output file (default stdout)");

  // -- verify -------------------------------------------------------------
  auto* c_verify = app.add_subcommand("verify", "Check closed forms against the grid oracle");
  SourceOpts ver_src;
  add_source_flags(c_verify, ver_src);
  double ver_tol = 1e-6;
  int ver_resolution = 720;
  int ver_iterations = 40;
  c_verify->add_option("--tolerance", ver_tol, "Maximum allowed |closed form - oracle| gap");
  c_verify->add_option("--resolution", ver_resolution, "Oracle grid resolution");
  c_verify->add_option("--iterations", ver_iterations, "Oracle refinement iterations");

  // -- families -----------------------------------------------------------
  auto* c_families = app.add_subcommand("families", "List built-in ensemble families");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    std::ostringstream os;
    const int code = app.exit(e, os, os);
    (code == 0 ? out : err) << os.str();
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (c_families->parsed()) {
      out << "two_noisy          p in [0,1], theta in (0,pi); two noisy states\n"
          << "geometric_uniform  n >= 2, theta in (0,pi); cyclic pure states\n"
          << "tetrahedron        p in [0,1]; four noisy SIC states\n"
          << "asymmetric_I       theta in [0,2pi]; tilted trine\n"
          << "asymmetric_II      theta in [0,2pi]; |+>, |->, tilted state\n"
          << "random             n >= 1, --seed S; seeded random ensemble (default seed "
          << kDefaultSeed << ")\n";
      return kExitOk;
    }

    if (c_compute->parsed()) {
      LoadedEnsemble src = [&] {
        try {
          return load_source(comp_src);
        } catch (const std::invalid_argument& e) {
          throw ensemble_parse_error(e.what());
        }
      }();
      std::optional<std::size_t> only;
      if (comp_state != "all") {
        const long idx = std::strtol(comp_state.c_str(), nullptr, 10);
        if (idx < 0 || static_cast<std::size_t>(idx) >= src.ens.size()) {
          err << "state index out of range\n";
          return kExitUsage;
        }
        only = static_cast<std::size_t>(idx);
      }
      const ComputeReport rep = compute_report(src.ens);
      std::ostringstream os;
      if (comp_format == "json") {
        os << report_to_json(src, rep).dump(2) << "\n";
      } else if (comp_format == "csv") {
        SweepRow row;
        row.spec = src.spec.value_or(FamilySpec{});
        row.value = 0.0;
        row.status = rep.any_degenerate ? "degenerate" : "ok";
        row.report = rep;
        attach_baselines(src.ens, row.spec, row);
        const std::size_t nst = rep.states.size();
        auto join = [](const std::vector<std::string>& v) {
          std::string s;
          for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
          return s + "\n";
        };
        os << join(csv_header(nst)) << join(csv_row(row, "", nst));
      } else {
        print_text_report(os, src, rep, only);
      }
      const int wr = write_output(os.str(), comp_out, out, err);
      if (wr != kExitOk) return wr;
      return rep.any_degenerate ? kExitDegenerate : kExitOk;
    }

    if (c_sweep->parsed()) {
      if (!sweep_src.file.empty())
        throw std::invalid_argument("sweep needs a parametric --family source; "
                                    "no parameter varies in an ensemble file");
      if (sweep_steps < 2) throw std::invalid_argument("--steps must be >= 2");
      const auto fam = sweep_src.family == "random"
                           ? std::nullopt
                           : family_from_name(sweep_src.family);
      if (!fam || *fam == Family::custom)
        throw std::invalid_argument("sweep requires a built-in family");
      if (sweep_param == "n" && *fam != Family::geometric_uniform)
        throw std::invalid_argument("parameter n only applies to geometric_uniform");
      if ((sweep_param == "p") &&
          !(*fam == Family::two_noisy || *fam == Family::tetrahedron))
        throw std::invalid_argument("parameter p does not apply to this family");
      if (sweep_param == "theta" && *fam == Family::tetrahedron)
        throw std::invalid_argument("tetrahedron has no angle parameter");

      const bool deg = sweep_src.degrees && sweep_param == "theta";
      std::vector<SweepRow> rows(static_cast<std::size_t>(sweep_steps));
      for (int i = 0; i < sweep_steps; ++i) {
        double v = sweep_start + (sweep_stop - sweep_start) * i / (sweep_steps - 1);
        if (deg) v = v * kPi / 180.0;
        SweepRow& row = rows[static_cast<std::size_t>(i)];
        row.spec = spec_from(sweep_src, *fam);
        if (sweep_param == "p") row.spec.p = v;
        if (sweep_param == "theta") row.spec.theta = v;
        if (sweep_param == "n") row.spec.n = static_cast<int>(std::lround(v));
        row.value = sweep_param == "n" ? row.spec.n : v;
      }

      std::atomic<std::size_t> next{0};
      auto worker = [&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= rows.size()) return;
          SweepRow& row = rows[i];
          try {
            const Ensemble ens = build(row.spec);
            row.report = compute_report(ens);
            attach_baselines(ens, row.spec, row);
            if (row.report->any_degenerate) row.status = "degenerate";
          } catch (const std::exception& e) {
            row.status = std::string("error: ") + e.what();
          }
        }
      };
      const int jobs = std::max(1, sweep_jobs);
      std::vector<std::thread> pool;
      for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
      worker();
      for (auto& th : pool) th.join();

      std::size_t n_max = 0;
      for (const auto& row : rows)
        if (row.report) n_max = std::max(n_max, row.report->states.size());

      std::ostringstream os;
      if (sweep_format == "json") {
        json arr = json::array();
        for (const auto& row : rows) arr.push_back(row_to_json(row, sweep_param));
        os << arr.dump(2) << "\n";
      } else {
        auto join = [](const std::vector<std::string>& v) {
          std::string s;
          for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
          return s + "\n";
        };
        os << join(csv_header(n_max));
        for (const auto& row : rows) os << join(csv_row(row, sweep_param, n_max));
      }
      return write_output(os.str(), sweep_out, out, err);
    }

    if (c_verify->parsed()) {
      LoadedEnsemble src = [&] {
        try {
          return load_source(ver_src);
        } catch (const std::invalid_argument& e) {
          throw ensemble_parse_error(e.what());
        }
      }();
      oracle::GridSpec grid;
      grid.resolution = ver_resolution;
      grid.iterations = ver_iterations;
      grid.validate();

      out << "ensemble: " << src.description << "\n";
      out << "state  closed-form      oracle           gap          dual min eig   status\n";
      int bad = -1;
      for (std::size_t x = 0; x < src.ens.size(); ++x) {
        const McmResult r = mcm(src.ens, x);
        std::ostringstream line;
        line.precision(10);
        if (r.degenerate) {
          line << x << "      " << r.confidence << "  -                -            -              degenerate (skipped)";
          out << line.str() << "\n";
          continue;
        }
        const auto o = oracle::grid_max_confidence(src.ens, x, grid);
        const double gap = std::abs(o.value - r.confidence);
        const double dual = oracle::dual_feasibility(src.ens, x, r.confidence);
        const bool ok = gap <= ver_tol && dual >= -1e-9;
        if (!ok && bad < 0) bad = static_cast<int>(x);
        line << x << "      " << r.confidence << "   " << o.value << "   " << gap << "   "
             << dual << "   " << (ok ? "ok" : "FAIL");
        out << line.str() << "\n";
      }
      if (bad >= 0) {
        err << "verification failed at state " << bad << "\n";
        return kExitVerify;
      }
      return kExitOk;
    }
  } catch (const ensemble_parse_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, out, err);
}

}  // namespace mcmq::cli
