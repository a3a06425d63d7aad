#pragma once

#include <Eigen/Dense>
#include <vector>

#include "cliffsub/clifford.hpp"

namespace cliffsub {

/// Default tolerance for Hermiticity checks and Grassmann rounding.
inline constexpr double kDefaultFactorTolerance = 1e-12;

/// Spectral data of a Hermitian matrix H = U·diag(d)·U†, ordered for
/// deterministic generator assignment.
///
/// Eigenvalues are sorted descending. Eigenvalues with |d| ≤ tol are set to
/// exactly zero. Each eigenvector column has its first non-negligible
/// component made real and positive; columns of equal eigenvalue are then
/// ordered lexicographically by (Re, Im) of their components.
struct HermitianFactorPlan {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXcd eigenvectors;
  double tolerance = kDefaultFactorTolerance;

  std::size_t dimension() const { return static_cast<std::size_t>(eigenvalues.size()); }

  /// Real generator signs consumed by realize_factorization(): two per
  /// non-zero eigenvalue (both of the eigenvalue's sign), one null
  /// generator per zero eigenvalue.
  Signature signature() const;
};

/// Diagonalizes H. Throws ValidationError when max|H - H†| > tol and
/// NumericError if the eigensolver does not converge.
HermitianFactorPlan plan_factorization(const Eigen::MatrixXcd& h,
                                       double tol = kDefaultFactorTolerance);

/// Builds v_i = Σ_k U_ik·g_k using generators offset .. offset+plan.signature().size()-1
/// of `algebra`; those generators must carry the plan's signature.
std::vector<CliffordElement> realize_factorization(const HermitianFactorPlan& plan,
                                                   const Algebra& algebra, std::size_t offset = 0);

struct HermitianFactorization {
  Algebra algebra;
  std::vector<CliffordElement> elements;
  HermitianFactorPlan plan;
};

/// Elements v_i with {v_i, v_j*} = H_ij and {v_i, v_j} = 0, in a freshly
/// created algebra.
HermitianFactorization factor_hermitian(const Eigen::MatrixXcd& h,
                                        double tol = kDefaultFactorTolerance);

struct FactorResidual {
  /// |scalar({v_i, v_j*}) - H_ij| per entry.
  Eigen::MatrixXd entry_residual;
  double max_entry_residual = 0.0;
  /// Largest non-scalar coefficient appearing in any {v_i, v_j*}.
  double max_non_scalar = 0.0;
  /// Largest coefficient of any {v_i, v_j}; zero when exact.
  double max_self_anticommutator = 0.0;
  /// Number of (i, j) with {v_i, v_j} not identically zero.
  std::size_t nonzero_self_anticommutators = 0;
};

FactorResidual factorization_residual(std::span<const CliffordElement> elements,
                                      const Eigen::MatrixXcd& h);

}  // namespace cliffsub
