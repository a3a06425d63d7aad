#pragma once

// Reference implementations used only by tests. None of these call into the
// library code paths they are compared against.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "cliffsub/clifford.hpp"
#include "cliffsub/rng.hpp"

namespace cliffsub::oracle {

/// Dense matrices γ_0 .. γ_{K-1} with γ_i γ_j + γ_j γ_i = 2 δ_ij s_i for
/// non-degenerate signs s_i, built from Jordan-Wigner strings of Pauli
/// matrices on ceil(K/2) qubits.
inline std::vector<Eigen::MatrixXcd> gamma_matrices(const std::vector<int>& signs) {
  const std::size_t k = signs.size();
  const std::size_t qubits = (k + 1) / 2;
  const Eigen::Index dim = Eigen::Index{1} << qubits;
  Eigen::Matrix2cd x, y, z, id;
  x << 0, 1, 1, 0;
  y << 0, std::complex<double>(0, -1), std::complex<double>(0, 1), 0;
  z << 1, 0, 0, -1;
  id.setIdentity();

  auto kron = [](const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
  };

  std::vector<Eigen::MatrixXcd> gammas;
  for (std::size_t g = 0; g < k; ++g) {
    const std::size_t site = g / 2;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
    for (std::size_t q = 0; q < qubits; ++q) {
      if (q < site) m = kron(m, z);
      else if (q == site) m = kron(m, g % 2 == 0 ? x : y);
      else m = kron(m, id);
    }
    if (signs[g] < 0) m *= std::complex<double>(0, 1);
    gammas.push_back(m);
  }
  (void)dim;
  return gammas;
}

inline Eigen::MatrixXcd to_matrix(const CliffordElement& x, const std::vector<Eigen::MatrixXcd>& gammas) {
  const Eigen::Index dim = gammas.empty() ? 1 : gammas.front().rows();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [blade, c] : x.terms()) {
    Eigen::MatrixXcd prod = Eigen::MatrixXcd::Identity(dim, dim);
    for (std::size_t i = 0; i < gammas.size(); ++i) {
      if (blade.contains(i)) prod = prod * gammas[i];
    }
    out += c * prod;
  }
  return out;
}

inline CliffordElement random_element(const Algebra& alg, Rng& rng, std::size_t terms) {
  const std::size_t k = alg.generator_count();
  const std::uint64_t span = k >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << k) - 1);
  CliffordElement x = alg.zero();
  for (std::size_t t = 0; t < terms; ++t) {
    const Blade b{rng.next() & span};
    x += alg.blade(b, Complex(rng.normal(), rng.normal()));
  }
  return x;
}

inline Eigen::MatrixXcd random_unitary(std::size_t n, Rng& rng) {
  const auto dim = static_cast<Eigen::Index>(n);
  Eigen::MatrixXcd a(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) a(i, j) = Complex(rng.normal(), rng.normal());
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
  return qr.householderQ() * Eigen::MatrixXcd::Identity(dim, dim);
}

/// Random Hermitian matrix U diag(d) U† whose spectrum mixes signs and
/// includes repeated and zero eigenvalues.
inline Eigen::MatrixXcd random_hermitian(std::size_t n, Rng& rng) {
  const auto dim = static_cast<Eigen::Index>(n);
  Eigen::VectorXd d(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double pick = rng.uniform();
    if (pick < 0.2) d(i) = 0.0;
    else if (pick < 0.35 && i > 0) d(i) = d(i - 1);
    else d(i) = rng.uniform(-3.0, 3.0);
  }
  const Eigen::MatrixXcd u = random_unitary(n, rng);
  Eigen::MatrixXcd h = u * d.cast<Complex>().asDiagonal() * u.adjoint();
  return 0.5 * (h + h.adjoint());
}

/// Composite trapezoid rule, independent of the library's quadrature.
template <typename F>
double trapezoid(F&& f, double a, double b, std::size_t steps) {
  const double h = (b - a) / static_cast<double>(steps);
  double s = 0.5 * (f(a) + f(b));
  for (std::size_t k = 1; k < steps; ++k) s += f(a + h * static_cast<double>(k));
  return s * h;
}

}  // namespace cliffsub::oracle
