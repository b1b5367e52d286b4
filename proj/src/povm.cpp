#include "mcmq/povm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mcmq {

namespace {

// Dense symmetric matrices small enough (<= ~16 vars) that a cyclic Jacobi
// eigensolver and an eigenvalue-filtered pseudoinverse cover every solve in
// this module.
struct SymMatrix {
  int n = 0;
  std::vector<double> a;  // row major, n x n

  double& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  double at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
};

struct SymEigen {
  std::vector<double> values;        // unordered
  std::vector<double> vectors;       // column k = eigenvector k, row major n x n
};

SymEigen jacobi_eigen(SymMatrix m) {
  const int n = m.n;
  SymEigen out;
  out.values.resize(n);
  out.vectors.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) out.vectors[static_cast<std::size_t>(i) * n + i] = 1.0;

  auto v_at = [&](int i, int j) -> double& { return out.vectors[static_cast<std::size_t>(i) * n + j]; };

  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += m.at(i, j) * m.at(i, j);
    if (off < 1e-30) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = m.at(p, q);
        if (std::abs(apq) < 1e-300) continue;
        const double theta = 0.5 * (m.at(q, q) - m.at(p, p)) / apq;
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = m.at(k, p), akq = m.at(k, q);
          m.at(k, p) = c * akp - s * akq;
          m.at(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = m.at(p, k), aqk = m.at(q, k);
          m.at(p, k) = c * apk - s * aqk;
          m.at(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v_at(k, p), vkq = v_at(k, q);
          v_at(k, p) = c * vkp - s * vkq;
          v_at(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  for (int i = 0; i < n; ++i) out.values[i] = m.at(i, i);
  return out;
}

// x = pinv(M) b with eigenvalues below rel_cut * max|eig| treated as zero.
std::vector<double> pinv_solve(const SymEigen& e, const std::vector<double>& b,
                               double rel_cut = 1e-11) {
  const int n = static_cast<int>(b.size());
  double vmax = 0.0;
  for (double v : e.values) vmax = std::max(vmax, std::abs(v));
  std::vector<double> x(n, 0.0);
  if (vmax == 0.0) return x;
  for (int k = 0; k < n; ++k) {
    if (std::abs(e.values[k]) <= rel_cut * vmax) continue;
    double proj = 0.0;
    for (int i = 0; i < n; ++i) proj += e.vectors[static_cast<std::size_t>(i) * n + k] * b[i];
    proj /= e.values[k];
    for (int i = 0; i < n; ++i) x[i] += proj * e.vectors[static_cast<std::size_t>(i) * n + k];
  }
  return x;
}

std::vector<double> sym_apply(const SymMatrix& m, const std::vector<double>& x) {
  std::vector<double> y(m.n, 0.0);
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) y[i] += m.at(i, j) * x[j];
  return y;
}

double norm_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

std::vector<BlochVector> unit_dirs(const std::vector<BlochVector>& dirs) {
  std::vector<BlochVector> out;
  out.reserve(dirs.size());
  for (const auto& d : dirs) out.push_back(d.normalized());
  return out;
}

HermitianOperator completion_operator(const std::vector<double>& a,
                                      const std::vector<BlochVector>& dirs) {
  double trace = 2.0;
  BlochVector w{};
  for (std::size_t i = 0; i < a.size(); ++i) {
    trace -= a[i];
    w = w - dirs[i] * a[i];
  }
  return HermitianOperator::from_parts(trace, w);
}

bool lex_less(const std::vector<double>& a, const std::vector<double>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

std::optional<std::vector<double>> identity_in_hull(const std::vector<BlochVector>& projector_dirs) {
  const std::size_t n = projector_dirs.size();
  if (n < 2) return std::nullopt;
  const auto dirs = unit_dirs(projector_dirs);

  // Equality system: sum a_x m_x = 0 (3 rows) and sum a_x = 2 (1 row).
  // Over every support subset, take the minimum-norm consistent solution and
  // keep the feasible one of smallest norm; ties break lexicographically.
  auto residual = [&](const std::vector<double>& a) {
    BlochVector w{};
    double s = -2.0;
    for (std::size_t i = 0; i < n; ++i) {
      w = w + dirs[i] * a[i];
      s += a[i];
    }
    return std::sqrt(w.norm2() + s * s);
  };

  std::optional<std::vector<double>> best;
  double best_norm2 = std::numeric_limits<double>::infinity();
  const std::uint32_t full = (n >= 32) ? 0 : (1u << n);
  if (full == 0) throw std::invalid_argument("too many projectors");
  for (std::uint32_t mask = 1; mask < full; ++mask) {
    std::vector<int> sel;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) sel.push_back(static_cast<int>(i));
    const int k = static_cast<int>(sel.size());

    // Normal equations of the 4 x k system give the min-norm solution through
    // the pseudoinverse of A^T A.
    std::vector<std::array<double, 4>> cols(k);
    for (int c = 0; c < k; ++c)
      cols[c] = {dirs[sel[c]].x, dirs[sel[c]].y, dirs[sel[c]].z, 1.0};
    SymMatrix ata;
    ata.n = k;
    ata.a.assign(static_cast<std::size_t>(k) * k, 0.0);
    std::vector<double> atb(k, 0.0);
    for (int i = 0; i < k; ++i) {
      atb[i] = 2.0 * cols[i][3];
      for (int j = 0; j < k; ++j) {
        double dotv = 0.0;
        for (int r = 0; r < 4; ++r) dotv += cols[i][r] * cols[j][r];
        ata.at(i, j) = dotv;
      }
    }
    const std::vector<double> sol = pinv_solve(jacobi_eigen(ata), atb);

    std::vector<double> a(n, 0.0);
    bool nonneg = true;
    double norm2 = 0.0;
    for (int c = 0; c < k; ++c) {
      if (sol[c] < -1e-10) nonneg = false;
      a[sel[c]] = std::max(0.0, sol[c]);
      norm2 += a[sel[c]] * a[sel[c]];
    }
    if (!nonneg || residual(a) > 1e-9) continue;
    if (norm2 < best_norm2 - 1e-12 ||
        (norm2 < best_norm2 + 1e-12 && (!best || lex_less(a, *best)))) {
      best_norm2 = std::min(best_norm2, norm2);
      best = std::move(a);
    }
  }
  return best;
}

double rank_one_residual(const std::vector<double>& weights,
                         const std::vector<BlochVector>& projector_dirs) {
  if (weights.size() != projector_dirs.size())
    throw std::invalid_argument("weights and projector directions differ in length");
  const auto dirs = unit_dirs(projector_dirs);
  double h = 1.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    h -= weights[i];
    for (std::size_t j = 0; j < weights.size(); ++j)
      h += 0.25 * (1.0 - dirs[i].dot(dirs[j])) * weights[i] * weights[j];
  }
  return std::abs(h);
}

PovmCompletion minimize_inconclusive(const Ensemble& ens,
                                     const std::vector<BlochVector>& projector_dirs) {
  const std::size_t n = projector_dirs.size();
  if (n == 0) throw std::invalid_argument("no projector directions given");
  if (n > 16) throw std::invalid_argument("active-set enumeration supports up to 16 projectors");
  const auto dirs = unit_dirs(projector_dirs);

  if (auto hull = identity_in_hull(dirs)) {
    PovmCompletion out{*hull, completion_operator(*hull, dirs), 0.0, true};
    out.q_inc = 0.0;
    return out;
  }

  // Detection probabilities c_x = tr[rho P_x] and the quadratic-form matrix
  // G_xy = 1 - tr[P_x P_y] of the rank-one constraint
  // h(a) = 1 - 1.a + a.G a / 2 = 0.
  const BlochVector s = ens.average_bloch();
  std::vector<double> c(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = 0.5 * (1.0 + s.dot(dirs[i]));
  SymMatrix g_full;
  g_full.n = static_cast<int>(n);
  g_full.a.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      g_full.at(static_cast<int>(i), static_cast<int>(j)) = 0.5 * (1.0 - dirs[i].dot(dirs[j]));

  auto h_of = [&](const std::vector<double>& a) {
    double h = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      h -= a[i];
      for (std::size_t j = 0; j < n; ++j)
        h += 0.5 * g_full.at(static_cast<int>(i), static_cast<int>(j)) * a[i] * a[j];
    }
    return h;
  };
  auto q_of = [&](const std::vector<double>& a) {
    double q = 1.0;
    for (std::size_t i = 0; i < n; ++i) q -= a[i] * c[i];
    return q;
  };

  std::optional<std::vector<double>> best;
  double best_q = std::numeric_limits<double>::infinity();
  auto consider = [&](const std::vector<double>& a) {
    double sum = 0.0;
    for (double v : a) {
      if (v < -1e-12) return;
      sum += v;
    }
    if (sum > 2.0 + 1e-9) return;
    if (std::abs(h_of(a)) > 1e-9) return;
    const double q = q_of(a);
    if (q < best_q - 1e-9 || (q < best_q + 1e-9 && (!best || lex_less(a, *best)))) {
      best_q = std::min(best_q, q);
      best = a;
    }
  };

  const std::uint32_t full = 1u << n;
  for (std::uint32_t mask = 1; mask < full; ++mask) {
    std::vector<int> sel;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) sel.push_back(static_cast<int>(i));
    const int k = static_cast<int>(sel.size());

    if (k == 1) {
      // The constraint pins a single free weight to exactly 1.
      std::vector<double> a(n, 0.0);
      a[sel[0]] = 1.0;
      consider(a);
      continue;
    }

    // Stationarity on the face: c_F = nu (G_F a - 1). With beta = 1/nu the
    // solution a(beta) = G_F^+ (1 + beta c_F) is affine in beta, and the
    // constraint h(a(beta)) = 0 is a plain quadratic in beta.
    SymMatrix gf;
    gf.n = k;
    gf.a.assign(static_cast<std::size_t>(k) * k, 0.0);
    std::vector<double> ones(k, 1.0), cf(k);
    for (int i = 0; i < k; ++i) {
      cf[i] = c[sel[i]];
      for (int j = 0; j < k; ++j) gf.at(i, j) = g_full.at(sel[i], sel[j]);
    }
    const SymEigen eig = jacobi_eigen(gf);
    const std::vector<double> u = pinv_solve(eig, ones);
    const std::vector<double> v = pinv_solve(eig, cf);
    // Consistency: both right-hand sides must lie in the range of G_F.
    if (norm_diff(sym_apply(gf, u), ones) > 1e-9 * k) continue;
    if (norm_diff(sym_apply(gf, v), cf) > 1e-9 * k) continue;

    double one_u = 0.0, one_v = 0.0, c_u = 0.0, c_v = 0.0;
    for (int i = 0; i < k; ++i) {
      one_u += u[i];
      one_v += v[i];
      c_u += cf[i] * u[i];
      c_v += cf[i] * v[i];
    }
    const double h2 = 0.5 * c_v;
    const double h1 = 0.5 * (c_u - one_v);
    const double h0 = 1.0 - 0.5 * one_u;

    double betas[2];
    int nb = 0;
    if (std::abs(h2) < 1e-14) {
      if (std::abs(h1) > 1e-14) betas[nb++] = -h0 / h1;
    } else {
      const double disc = h1 * h1 - 4.0 * h2 * h0;
      if (disc >= 0.0) {
        const double root = std::sqrt(disc);
        betas[nb++] = (-h1 - root) / (2.0 * h2);
        betas[nb++] = (-h1 + root) / (2.0 * h2);
      }
    }
    for (int bi = 0; bi < nb; ++bi) {
      std::vector<double> a(n, 0.0);
      for (int i = 0; i < k; ++i) a[sel[i]] = u[i] + betas[bi] * v[i];
      consider(a);
    }
  }

  if (!best)
    throw std::runtime_error("no feasible POVM completion found by active-set enumeration");
  for (double& v : *best) v = std::max(0.0, v);

  PovmCompletion out{*best, completion_operator(*best, dirs), 0.0, false};
  out.q_inc = std::max(0.0, best_q);
  out.complete = out.m_phi.mat().max_abs() <= tol::mat;
  return out;
}

}  // namespace mcmq
