#include "cliffsub/factor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cliffsub/error.hpp"

namespace cliffsub {

namespace {

void fix_phase(Eigen::Ref<Eigen::VectorXcd> v, double tol) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    if (mag > tol) {
      v *= std::conj(v(i)) / mag;
      v(i) = Complex(mag, 0.0);
      return;
    }
  }
}

bool lex_less(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i).real() != b(i).real()) return a(i).real() < b(i).real();
    if (a(i).imag() != b(i).imag()) return a(i).imag() < b(i).imag();
  }
  return false;
}

}  // namespace

Signature HermitianFactorPlan::signature() const {
  std::vector<int> signs;
  for (Eigen::Index k = 0; k < eigenvalues.size(); ++k) {
    const double d = eigenvalues(k);
    if (d == 0.0) {
      signs.push_back(0);
    } else {
      const int s = d > 0 ? 1 : -1;
      signs.push_back(s);
      signs.push_back(s);
    }
  }
  return Signature(std::move(signs));
}

HermitianFactorPlan plan_factorization(const Eigen::MatrixXcd& h, double tol) {
  if (h.rows() != h.cols()) throw ValidationError("matrix is not square");
  const Eigen::Index n = h.rows();
  if (n > 0) {
    const double skew = (h - h.adjoint()).cwiseAbs().maxCoeff();
    if (skew > tol) {
      throw ValidationError("matrix is not Hermitian: max|H - H^dagger| = " + std::to_string(skew));
    }
  }

  HermitianFactorPlan plan;
  plan.tolerance = tol;
  if (n == 0) {
    plan.eigenvalues.resize(0);
    plan.eigenvectors.resize(0, 0);
    return plan;
  }

  const Eigen::MatrixXcd sym = (h + h.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sym);
  if (solver.info() != Eigen::Success) throw NumericError("Hermitian eigensolver failed to converge");

  Eigen::VectorXd values = solver.eigenvalues();
  Eigen::MatrixXcd vectors = solver.eigenvectors();
  for (Eigen::Index k = 0; k < n; ++k) {
    if (std::abs(values(k)) <= tol) values(k) = 0.0;
    fix_phase(vectors.col(k), tol);
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return values(a) > values(b); });
  // Runs of eigenvalues equal within tol are ordered by their eigenvectors.
  for (std::size_t start = 0; start < order.size();) {
    std::size_t end = start + 1;
    while (end < order.size() && values(order[start]) - values(order[end]) <= tol) ++end;
    std::sort(order.begin() + static_cast<std::ptrdiff_t>(start),
              order.begin() + static_cast<std::ptrdiff_t>(end), [&](Eigen::Index a, Eigen::Index b) {
                return lex_less(vectors.col(a), vectors.col(b));
              });
    start = end;
  }

  plan.eigenvalues.resize(n);
  plan.eigenvectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    plan.eigenvalues(k) = values(order[static_cast<std::size_t>(k)]);
    plan.eigenvectors.col(k) = vectors.col(order[static_cast<std::size_t>(k)]);
  }
  return plan;
}

std::vector<CliffordElement> realize_factorization(const HermitianFactorPlan& plan,
                                                   const Algebra& algebra, std::size_t offset) {
  const Signature needed = plan.signature();
  const Signature& have = algebra.signature();
  if (offset + needed.size() > have.size()) {
    throw ConfigError("algebra too small for factorization block");
  }
  for (std::size_t i = 0; i < needed.size(); ++i) {
    if (have[offset + i] != needed[i]) {
      throw ConfigError("algebra signature does not match factorization block at generator " +
                        std::to_string(offset + i));
    }
  }

  // One complex generator g_k per eigenvalue with {g_k, g_k*} = d_k.
  std::vector<CliffordElement> g;
  std::size_t cursor = offset;
  for (Eigen::Index k = 0; k < plan.eigenvalues.size(); ++k) {
    const double d = plan.eigenvalues(k);
    if (d == 0.0) {
      g.push_back(algebra.generator(cursor));
      cursor += 1;
    } else {
      const double norm[] = {d};
      g.push_back(complex_generators(algebra, norm, cursor).generators.front());
      cursor += 2;
    }
  }

  const std::size_t n = plan.dimension();
  std::vector<CliffordElement> v;
  v.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    CliffordElement vi = algebra.zero();
    for (std::size_t k = 0; k < n; ++k) {
      vi += plan.eigenvectors(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) * g[k];
    }
    v.push_back(std::move(vi));
  }
  return v;
}

HermitianFactorization factor_hermitian(const Eigen::MatrixXcd& h, double tol) {
  HermitianFactorPlan plan = plan_factorization(h, tol);
  Algebra algebra = Algebra::make(plan.signature());
  std::vector<CliffordElement> elements = realize_factorization(plan, algebra, 0);
  return {std::move(algebra), std::move(elements), std::move(plan)};
}

FactorResidual factorization_residual(std::span<const CliffordElement> elements,
                                      const Eigen::MatrixXcd& h) {
  const auto n = static_cast<Eigen::Index>(elements.size());
  if (h.rows() != n || h.cols() != n) throw UsageError("factorization and matrix sizes differ");
  FactorResidual r;
  r.entry_residual = Eigen::MatrixXd::Zero(n, n);
  std::vector<CliffordElement> conj;
  conj.reserve(elements.size());
  for (const auto& v : elements) conj.push_back(involution(v));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto ui = static_cast<std::size_t>(i);
      const auto uj = static_cast<std::size_t>(j);
      const CliffordElement ac = anticommutator(elements[ui], conj[uj]);
      r.entry_residual(i, j) = std::abs(ac.scalar_part() - h(i, j));
      r.max_non_scalar = std::max(r.max_non_scalar, ac.non_scalar_norm());
      const CliffordElement self = anticommutator(elements[ui], elements[uj]);
      r.max_self_anticommutator = std::max(r.max_self_anticommutator, self.max_norm());
      if (!self.is_zero()) ++r.nonzero_self_anticommutators;
    }
  }
  r.max_entry_residual = n > 0 ? r.entry_residual.maxCoeff() : 0.0;
  return r;
}

}  // namespace cliffsub
