#include "cliffsub/spinor.hpp"

#include <cmath>

#include "cliffsub/error.hpp"

namespace cliffsub {

double minkowski_dot(const FourVector& a, const FourVector& b) {
  return a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3];
}

double max_abs_diff(const FourVector& a, const FourVector& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < 4; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

const Eigen::Matrix2d& epsilon() {
  static const Eigen::Matrix2d eps = (Eigen::Matrix2d() << 0.0, 1.0, -1.0, 0.0).finished();
  return eps;
}

const SpinorMatrix& pauli(std::size_t mu) {
  static const std::array<SpinorMatrix, 4> sigma = [] {
    const Complex i(0.0, 1.0);
    std::array<SpinorMatrix, 4> s;
    s[0] << 1.0, 0.0, 0.0, 1.0;
    s[1] << 0.0, 1.0, 1.0, 0.0;
    s[2] << 0.0, -i, i, 0.0;
    s[3] << 1.0, 0.0, 0.0, -1.0;
    return s;
  }();
  return sigma.at(mu);
}

SpinorMatrix vector_to_spinor(const FourVector& v) {
  SpinorMatrix m = SpinorMatrix::Zero();
  for (std::size_t mu = 0; mu < 4; ++mu) m += v[mu] * pauli(mu);
  return m;
}

double hermiticity_defect(const SpinorMatrix& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

FourVector spinor_to_vector(const SpinorMatrix& m, double tol) {
  const double defect = hermiticity_defect(m);
  if (defect > tol) {
    throw ValidationError("spinor is not Hermitian: defect " + std::to_string(defect));
  }
  FourVector v;
  for (std::size_t mu = 0; mu < 4; ++mu) v[mu] = 0.5 * (pauli(mu) * m).trace().real();
  return v;
}

SpinorMatrix lower_indices(const SpinorMatrix& upper) {
  const Eigen::Matrix2cd eps = epsilon().cast<Complex>();
  return eps.transpose() * upper * eps;
}

SpinorMatrix raise_indices(const SpinorMatrix& lower) {
  const Eigen::Matrix2cd eps = epsilon().cast<Complex>();
  return eps * lower * eps.transpose();
}

NormIdentity spinor_norm_identity(const SpinorMatrix& m) {
  NormIdentity out;
  const SpinorMatrix low = lower_indices(m);
  // lhs(A, B) = Σ_F low(A, F) m(B, F)
  out.lhs = low * m.transpose();
  out.rhs = spinor_to_vector(m).minkowski_norm();
  out.residual = (out.lhs - Eigen::Matrix2cd::Identity() * out.rhs).cwiseAbs().maxCoeff();
  return out;
}

SL2CElement SL2CElement::from_matrix(const Eigen::Matrix2cd& s, double tol) {
  const double err = std::abs(s.determinant() - Complex(1.0, 0.0));
  if (err > tol) throw ValidationError("matrix is not in SL(2,C): |det - 1| = " + std::to_string(err));
  return SL2CElement(s);
}

SL2CElement SL2CElement::identity() { return SL2CElement(Eigen::Matrix2cd::Identity()); }

namespace {

Eigen::Matrix2cd axis_sigma(const std::array<double, 3>& n) {
  const double norm = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
  if (std::abs(norm - 1.0) > 1e-12) throw ValidationError("axis must be a unit vector");
  return n[0] * pauli(1) + n[1] * pauli(2) + n[2] * pauli(3);
}

}  // namespace

SL2CElement SL2CElement::boost(const std::array<double, 3>& axis, double rapidity) {
  const Eigen::Matrix2cd ns = axis_sigma(axis);
  return SL2CElement(std::cosh(rapidity / 2) * Eigen::Matrix2cd::Identity() +
                     std::sinh(rapidity / 2) * ns);
}

SL2CElement SL2CElement::rotation(const std::array<double, 3>& axis, double angle) {
  const Eigen::Matrix2cd ns = axis_sigma(axis);
  return SL2CElement(std::cos(angle / 2) * Eigen::Matrix2cd::Identity() -
                     Complex(0.0, std::sin(angle / 2)) * ns);
}

Eigen::Matrix4d SL2CElement::lorentz_matrix() const {
  Eigen::Matrix4d lambda;
  for (std::size_t mu = 0; mu < 4; ++mu) {
    for (std::size_t nu = 0; nu < 4; ++nu) {
      lambda(static_cast<Eigen::Index>(mu), static_cast<Eigen::Index>(nu)) =
          0.5 * (pauli(mu) * s_ * pauli(nu) * s_.adjoint()).trace().real();
    }
  }
  return lambda;
}

SpinorMatrix sl2c_apply(const SL2CElement& s, const SpinorMatrix& m) {
  return s.matrix() * m * s.matrix().adjoint();
}

GaugeHistory solve_gauge_absorption(GaugeHistory history, double tol) {
  const std::size_t n = history.tau.size();
  if (history.lambda.size() != n) throw ValidationError("lambda samples do not match the tau grid");
  if (n == 0) throw ValidationError("empty gauge history");
  for (const auto& l : history.lambda) {
    if (std::abs(l(0, 1) - l(1, 0)) > tol) throw ValidationError("lambda^{AB} is not symmetric");
  }
  if (n > 1) {
    const double h0 = history.tau[1] - history.tau[0];
    for (std::size_t k = 1; k + 1 < n; ++k) {
      const double h = history.tau[k + 1] - history.tau[k];
      if (std::abs(h - h0) > 1e-9 * std::max(1.0, std::abs(h0))) {
        throw ValidationError("tau grid is not uniform");
      }
    }
  }

  history.kappa.assign(n, Eigen::Matrix2cd::Zero());
  for (std::size_t k = 1; k < n; ++k) {
    const double h = history.tau[k] - history.tau[k - 1];
    history.kappa[k] = history.kappa[k - 1] - 0.5 * h * (history.lambda[k - 1] + history.lambda[k]);
  }
  const Eigen::Matrix2cd eps = epsilon().cast<Complex>();
  history.transform.resize(n);
  for (std::size_t k = 0; k < n; ++k) history.transform[k] = eps + history.kappa[k];
  return history;
}

SpinorPair lower_index(const SpinorPair& upper) { return {-upper[1], upper[0]}; }

SpinorPair raise_index(const SpinorPair& lower) { return {lower[1], -lower[0]}; }

SpinorPair involution(const SpinorPair& p) { return {involution(p[0]), involution(p[1])}; }

double SymmetricConstraint::max_abs() const {
  double m = 0.0;
  for (const auto& c : components) m = std::max(m, std::abs(c));
  return m;
}

SymmetricConstraint symmetric_constraint(const SpinorPair& c_upper, const SpinorPair& d_lower) {
  const SpinorPair c = lower_index(c_upper);
  const SpinorPair dstar = involution(d_lower);
  SymmetricConstraint out;
  constexpr std::array<std::array<std::size_t, 2>, 3> index = {{{0, 0}, {0, 1}, {1, 1}}};
  for (std::size_t k = 0; k < 3; ++k) {
    const auto [a, b] = index[k];
    const CliffordElement sym =
        (anticommutator(c[a], dstar[b]) + anticommutator(c[b], dstar[a])) * Complex(0.5, 0.0);
    out.components[k] = sym.scalar_part();
    out.non_scalar_residual = std::max(out.non_scalar_residual, sym.non_scalar_norm());
  }
  return out;
}

}  // namespace cliffsub
