#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "cliffsub/clifford.hpp"

namespace cliffsub {

/// Contravariant four-vector V^μ = (t, x, y, z), c = 1.
struct FourVector {
  std::array<double, 4> v{};

  double& operator[](std::size_t mu) { return v[mu]; }
  double operator[](std::size_t mu) const { return v[mu]; }

  /// V_μ V^μ with signature (+, -, -, -).
  double minkowski_norm() const { return v[0] * v[0] - v[1] * v[1] - v[2] * v[2] - v[3] * v[3]; }

  FourVector& operator+=(const FourVector& o) {
    for (std::size_t i = 0; i < 4; ++i) v[i] += o.v[i];
    return *this;
  }
  FourVector& operator*=(double s) {
    for (double& x : v) x *= s;
    return *this;
  }
  friend FourVector operator+(FourVector a, const FourVector& b) { return a += b; }
  friend FourVector operator-(FourVector a, const FourVector& b) { return a += (b * -1.0); }
  friend FourVector operator*(FourVector a, double s) { return a *= s; }
  friend FourVector operator*(double s, FourVector a) { return a *= s; }

  bool operator==(const FourVector&) const = default;
};

double minkowski_dot(const FourVector& a, const FourVector& b);
double max_abs_diff(const FourVector& a, const FourVector& b);

/// Second-rank spinor V^{AḂ}; row index A, column index Ḃ.
using SpinorMatrix = Eigen::Matrix2cd;

/// ε with ε_{01} = ε^{01} = +1. Indices are raised as ψ^A = ε^{AB}ψ_B and
/// lowered as ψ_A = ψ^B ε_{BA}, dotted and undotted alike.
const Eigen::Matrix2d& epsilon();

/// σ_0 = identity, σ_1..σ_3 the Pauli matrices.
const SpinorMatrix& pauli(std::size_t mu);

/// V^{AḂ} = Σ_μ σ_μ^{AḂ} V^μ.
SpinorMatrix vector_to_spinor(const FourVector& v);

/// V^μ = ½ tr(σ_μ V). Throws ValidationError when M is not Hermitian within tol.
FourVector spinor_to_vector(const SpinorMatrix& m, double tol = 1e-10);

/// M_{AḂ} = M^{CḊ} ε_{CA} ε_{ḊḂ}.
SpinorMatrix lower_indices(const SpinorMatrix& upper);
/// M^{AḂ} = ε^{AC} ε^{ḂḊ} M_{CḊ}.
SpinorMatrix raise_indices(const SpinorMatrix& lower);

double hermiticity_defect(const SpinorMatrix& m);

struct NormIdentity {
  /// lhs(A, B) = Σ_Ḟ V_{AḞ} V^{BḞ}.
  Eigen::Matrix2cd lhs;
  /// V_μ V^μ.
  double rhs = 0.0;
  /// max |lhs - δ_A^B rhs|.
  double residual = 0.0;
};

NormIdentity spinor_norm_identity(const SpinorMatrix& m);

/// Element of SL(2, C).
class SL2CElement {
 public:
  /// Throws ValidationError when |det S - 1| > tol.
  static SL2CElement from_matrix(const Eigen::Matrix2cd& s, double tol = 1e-12);
  static SL2CElement identity();
  /// exp(η/2 · n·σ) for unit 3-vector n.
  static SL2CElement boost(const std::array<double, 3>& axis, double rapidity);
  /// exp(-i θ/2 · n·σ) for unit 3-vector n.
  static SL2CElement rotation(const std::array<double, 3>& axis, double angle);

  const Eigen::Matrix2cd& matrix() const noexcept { return s_; }
  SL2CElement operator-() const { return SL2CElement(-s_); }

  /// Λ^μ_ν = ½ tr(σ_μ S σ_ν S†), the SO(1,3) image of S.
  Eigen::Matrix4d lorentz_matrix() const;

 private:
  explicit SL2CElement(Eigen::Matrix2cd s) : s_(std::move(s)) {}
  Eigen::Matrix2cd s_;
};

/// S M S†.
SpinorMatrix sl2c_apply(const SL2CElement& s, const SpinorMatrix& m);

/// Samples of the six Lagrange multipliers λ^{AB}(τ) and the absorbing
/// infinitesimal transformation κ^{AB}(τ), S^{AB}(τ) = ε^{AB} + κ^{AB}(τ).
struct GaugeHistory {
  std::vector<double> tau;
  std::vector<Eigen::Matrix2cd> lambda;
  std::vector<Eigen::Matrix2cd> kappa;
  std::vector<Eigen::Matrix2cd> transform;
};

/// Integrates κ̇ = -λ with the trapezoid rule from κ(τ_0) = 0. Throws
/// ValidationError for a non-uniform grid or non-symmetric λ.
GaugeHistory solve_gauge_absorption(GaugeHistory history, double tol = 1e-12);

/// A spinor-indexed pair of Clifford elements (component 0, component 1).
using SpinorPair = std::array<CliffordElement, 2>;

/// ψ_A = ψ^B ε_{BA}.
SpinorPair lower_index(const SpinorPair& upper);
/// ψ^A = ε^{AB} ψ_B.
SpinorPair raise_index(const SpinorPair& lower);
SpinorPair involution(const SpinorPair& p);

struct SymmetricConstraint {
  /// Scalar parts of {c_(A, d*_B)} for AB = 00, 01, 11.
  std::array<Complex, 3> components{};
  /// Largest non-scalar coefficient of the symmetrized anticommutators.
  double non_scalar_residual = 0.0;

  double max_abs() const;
  bool satisfied(double tol) const { return max_abs() <= tol && non_scalar_residual <= tol; }
};

/// Symmetric part of {c_A, d*_B}, where `c_upper` holds c^A and `d_lower`
/// holds d_A (conjugated internally). Violations are reported, not thrown.
SymmetricConstraint symmetric_constraint(const SpinorPair& c_upper, const SpinorPair& d_lower);

}  // namespace cliffsub
