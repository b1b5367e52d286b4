// Exact 2x2 Hermitian algebra and Bloch-vector geometry.
//
// Convention used throughout: rho = (I + r.sigma)/2 with sigma = (X, Y, Z),
// so pure states sit on the unit sphere and the maximally mixed state at the
// origin.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace mcmq {

using cplx = std::complex<double>;

// Default absolute tolerances. Chosen well above double-precision noise for
// chained closed-form arithmetic; validators accept overrides.
namespace tol {
inline constexpr double mat = 1e-10;     // matrix identities (hermiticity, trace, reconstruction)
inline constexpr double psd = 1e-9;      // eigenvalue nonnegativity slack
inline constexpr double norm = 1e-9;     // Bloch norm slack
inline constexpr double prob = 1e-10;    // prior normalization
inline constexpr double purity = 1e-9;   // pure/mixed branch threshold
inline constexpr double rank1 = 1e-8;    // rank-one residual acceptance
}  // namespace tol

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double dot(const BlochVector& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm2() const { return dot(*this); }
  double norm() const { return std::sqrt(norm2()); }

  BlochVector operator-() const { return {-x, -y, -z}; }
  BlochVector operator+(const BlochVector& o) const { return {x + o.x, y + o.y, z + o.z}; }
  BlochVector operator-(const BlochVector& o) const { return {x - o.x, y - o.y, z - o.z}; }
  BlochVector operator*(double c) const { return {c * x, c * y, c * z}; }

  /// Unit vector in the same direction; throws on (near-)zero input.
  BlochVector normalized() const;
};

inline BlochVector operator*(double c, const BlochVector& v) { return v * c; }

/// Plain 2x2 complex matrix, row major. No structural constraints.
struct Mat2 {
  cplx m00{};
  cplx m01{};
  cplx m10{};
  cplx m11{};

  static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static Mat2 zero() { return {}; }

  Mat2 operator+(const Mat2& o) const { return {m00 + o.m00, m01 + o.m01, m10 + o.m10, m11 + o.m11}; }
  Mat2 operator-(const Mat2& o) const { return {m00 - o.m00, m01 - o.m01, m10 - o.m10, m11 - o.m11}; }
  Mat2 operator*(const Mat2& o) const {
    return {m00 * o.m00 + m01 * o.m10, m00 * o.m01 + m01 * o.m11,
            m10 * o.m00 + m11 * o.m10, m10 * o.m01 + m11 * o.m11};
  }
  Mat2 operator*(cplx c) const { return {c * m00, c * m01, c * m10, c * m11}; }
  Mat2 operator*(double c) const { return *this * cplx(c, 0.0); }

  Mat2 adjoint() const { return {std::conj(m00), std::conj(m10), std::conj(m01), std::conj(m11)}; }
  cplx trace() const { return m00 + m11; }
  double frob_norm() const {
    return std::sqrt(std::norm(m00) + std::norm(m01) + std::norm(m10) + std::norm(m11));
  }
  /// Largest entry magnitude; cheap scale estimate for tolerance checks.
  double max_abs() const;
  /// max deviation from H = H^dagger.
  double hermiticity_defect() const;
};

inline Mat2 operator*(double c, const Mat2& m) { return m * c; }

Mat2 pauli_x();
Mat2 pauli_y();
Mat2 pauli_z();

/// Re tr[A B]; exact for products of Hermitian matrices.
double trace_product_re(const Mat2& a, const Mat2& b);

/// 2x2 Hermitian operator. Construction validates hermiticity (within tol)
/// and stores the exactly symmetrized matrix. No trace or PSD constraint.
class HermitianOperator {
 public:
  explicit HermitianOperator(const Mat2& m, double tolerance = tol::mat);

  /// (t*I + v.sigma)/2 for trace t and vector part v.
  static HermitianOperator from_parts(double trace, const BlochVector& vec);

  const Mat2& mat() const { return mat_; }
  double trace_re() const { return mat_.m00.real() + mat_.m11.real(); }
  /// Vector part v_i = tr[H sigma_i].
  BlochVector vector_part() const;

 private:
  Mat2 mat_;
};

/// 2x2 density operator: Hermitian, unit trace, PSD. Eigenvalues slightly
/// below zero (>= -tol_psd) are accepted and clamped back onto the state
/// space; anything worse is rejected.
class DensityOperator {
 public:
  explicit DensityOperator(const Mat2& m, double tolerance_mat = tol::mat,
                           double tolerance_psd = tol::psd);
  /// A projector is a valid state; keep the conversion implicit.
  operator HermitianOperator() const { return HermitianOperator(mat_); }

  static DensityOperator maximally_mixed();

  const Mat2& mat() const { return mat_; }

 private:
  struct unchecked_tag {};
  DensityOperator(const Mat2& m, unchecked_tag) : mat_(m) {}
  friend DensityOperator bloch_to_density(const BlochVector&, double);
  Mat2 mat_;
};

/// Real eigenvalues in descending order with orthonormal eigenvectors.
struct EigenPair2 {
  std::array<double, 2> values{};
  std::array<std::array<cplx, 2>, 2> vectors{};  // vectors[i] belongs to values[i]
};

/// rho = (I + r.sigma)/2. Rejects ||r|| > 1 + tol (not a state).
DensityOperator bloch_to_density(const BlochVector& r, double tolerance = tol::norm);

/// r_i = tr[rho sigma_i].
BlochVector density_to_bloch(const DensityOperator& rho);

/// tr[rho sigma] = (1 + r.s)/2.
double overlap(const DensityOperator& rho, const DensityOperator& sigma);

/// tr[rho^2] = (1 + ||r||^2)/2, in [1/2, 1].
double purity(const DensityOperator& rho);

/// ||rho - sigma||_1; for qubits this equals the Euclidean distance of the
/// Bloch vectors and sqrt(2) times the Hilbert-Schmidt distance.
double trace_distance(const DensityOperator& rho, const DensityOperator& sigma);

/// Sum of absolute eigenvalues.
double trace_norm(const HermitianOperator& h);

/// Largest absolute eigenvalue.
double operator_norm(const HermitianOperator& h);

/// Closed-form eigendecomposition (quadratic formula with a
/// cancellation-safe discriminant); descending eigenvalues.
EigenPair2 eigen2(const HermitianOperator& h);

/// cos(theta/2)|0> + e^{i phi} sin(theta/2)|1> as a density operator; Bloch
/// vector (sin t cos p, sin t sin p, cos t).
DensityOperator pure_state_from_angles(double theta, double phi);

/// Rank-one projector onto the unit Bloch direction m: (I + m.sigma)/2.
HermitianOperator projector(const BlochVector& unit_dir, double tolerance = tol::norm);

/// Projector with Bloch vector -r; orthogonal complement of projector(r).
HermitianOperator antipodal_projector(const BlochVector& unit_dir, double tolerance = tol::norm);

}  // namespace mcmq
