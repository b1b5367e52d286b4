#include "mcmq/bloch.hpp"

#include <algorithm>

namespace mcmq {

namespace {

std::string fmt_tol(const char* what, double got, double limit) {
  return std::string(what) + " (defect " + std::to_string(got) + ", tolerance " +
         std::to_string(limit) + ")";
}

}  // namespace

BlochVector BlochVector::normalized() const {
  const double n = norm();
  if (n < 1e-300) throw std::domain_error("cannot normalize a zero Bloch vector");
  return {x / n, y / n, z / n};
}

double Mat2::max_abs() const {
  return std::max({std::abs(m00), std::abs(m01), std::abs(m10), std::abs(m11)});
}

double Mat2::hermiticity_defect() const {
  return std::max({std::abs(m00.imag()), std::abs(m11.imag()), std::abs(m01 - std::conj(m10))});
}

Mat2 pauli_x() { return {0.0, 1.0, 1.0, 0.0}; }
Mat2 pauli_y() { return {0.0, cplx(0.0, -1.0), cplx(0.0, 1.0), 0.0}; }
Mat2 pauli_z() { return {1.0, 0.0, 0.0, -1.0}; }

double trace_product_re(const Mat2& a, const Mat2& b) {
  return (a.m00 * b.m00 + a.m01 * b.m10 + a.m10 * b.m01 + a.m11 * b.m11).real();
}

HermitianOperator::HermitianOperator(const Mat2& m, double tolerance) {
  const double defect = m.hermiticity_defect();
  if (defect > tolerance) throw std::invalid_argument(fmt_tol("matrix is not Hermitian", defect, tolerance));
  // Store the symmetrized matrix so downstream identities hold exactly.
  mat_.m00 = m.m00.real();
  mat_.m11 = m.m11.real();
  mat_.m01 = 0.5 * (m.m01 + std::conj(m.m10));
  mat_.m10 = std::conj(mat_.m01);
}

HermitianOperator HermitianOperator::from_parts(double trace, const BlochVector& v) {
  Mat2 m;
  m.m00 = 0.5 * (trace + v.z);
  m.m11 = 0.5 * (trace - v.z);
  m.m01 = 0.5 * cplx(v.x, -v.y);
  m.m10 = std::conj(m.m01);
  return HermitianOperator(m, 0.0);
}

BlochVector HermitianOperator::vector_part() const {
  return {2.0 * mat_.m01.real(), -2.0 * mat_.m01.imag(), (mat_.m00 - mat_.m11).real()};
}

DensityOperator::DensityOperator(const Mat2& m, double tolerance_mat, double tolerance_psd) {
  HermitianOperator h(m, tolerance_mat);
  const double tr = h.trace_re();
  if (std::abs(tr - 1.0) > tolerance_mat)
    throw std::invalid_argument(fmt_tol("density operator trace must be 1", std::abs(tr - 1.0), tolerance_mat));
  BlochVector r = h.vector_part();
  const double n = r.norm();
  // min eigenvalue = (1 - n)/2, so eigenvalue slack tol_psd maps to norm slack 2*tol_psd.
  if (n > 1.0 + 2.0 * tolerance_psd)
    throw std::invalid_argument(fmt_tol("matrix is not positive semidefinite", 0.5 * (n - 1.0), tolerance_psd));
  if (n > 1.0) r = r * (1.0 / n);
  mat_ = HermitianOperator::from_parts(1.0, r).mat();
}

DensityOperator DensityOperator::maximally_mixed() {
  return DensityOperator(Mat2::identity() * 0.5);
}

DensityOperator bloch_to_density(const BlochVector& r, double tolerance) {
  const double n = r.norm();
  if (n > 1.0 + tolerance)
    throw std::invalid_argument(fmt_tol("Bloch vector outside the unit ball is not a state", n - 1.0, tolerance));
  BlochVector v = n > 1.0 ? r * (1.0 / n) : r;
  return DensityOperator(HermitianOperator::from_parts(1.0, v).mat(), DensityOperator::unchecked_tag{});
}

BlochVector density_to_bloch(const DensityOperator& rho) {
  return HermitianOperator(rho.mat()).vector_part();
}

double overlap(const DensityOperator& rho, const DensityOperator& sigma) {
  return trace_product_re(rho.mat(), sigma.mat());
}

double purity(const DensityOperator& rho) {
  return trace_product_re(rho.mat(), rho.mat());
}

double trace_distance(const DensityOperator& rho, const DensityOperator& sigma) {
  return (density_to_bloch(rho) - density_to_bloch(sigma)).norm();
}

double trace_norm(const HermitianOperator& h) {
  const EigenPair2 e = eigen2(h);
  return std::abs(e.values[0]) + std::abs(e.values[1]);
}

double operator_norm(const HermitianOperator& h) {
  const EigenPair2 e = eigen2(h);
  return std::max(std::abs(e.values[0]), std::abs(e.values[1]));
}

EigenPair2 eigen2(const HermitianOperator& h) {
  const Mat2& m = h.mat();
  const double a = m.m00.real();
  const double c = m.m11.real();
  const cplx b = m.m01;
  const double ab = std::abs(b);

  EigenPair2 out;
  const double mean = 0.5 * (a + c);
  const double disc = std::hypot(0.5 * (a - c), ab);  // cancellation-safe
  out.values = {mean + disc, mean - disc};

  const double scale = std::max({std::abs(a), std::abs(c), ab, 1e-30});
  if (ab <= 1e-15 * scale) {
    // Effectively diagonal; order the basis vectors by the diagonal.
    const bool first = a >= c;
    out.values = {first ? a : c, first ? c : a};
    out.vectors[0] = first ? std::array<cplx, 2>{1.0, 0.0} : std::array<cplx, 2>{0.0, 1.0};
    out.vectors[1] = first ? std::array<cplx, 2>{0.0, 1.0} : std::array<cplx, 2>{1.0, 0.0};
    return out;
  }
  // (lambda_max - c, conj(b)) never cancels when b != 0.
  const double w = out.values[0] - c;
  const double inv = 1.0 / std::hypot(w, ab);
  out.vectors[0] = {inv * w, inv * std::conj(b)};
  out.vectors[1] = {-inv * b, inv * w};
  return out;
}

DensityOperator pure_state_from_angles(double theta, double phi) {
  const double st = std::sin(theta);
  return bloch_to_density({st * std::cos(phi), st * std::sin(phi), std::cos(theta)});
}

HermitianOperator projector(const BlochVector& unit_dir, double tolerance) {
  const double n = unit_dir.norm();
  if (std::abs(n - 1.0) > tolerance)
    throw std::invalid_argument(fmt_tol("projector direction must be a unit vector", std::abs(n - 1.0), tolerance));
  return HermitianOperator::from_parts(1.0, unit_dir.normalized());
}

HermitianOperator antipodal_projector(const BlochVector& unit_dir, double tolerance) {
  return projector(-unit_dir, tolerance);
}

}  // namespace mcmq
