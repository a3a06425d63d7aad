#include "cliffsub/substructure.hpp"

#include <cmath>

#include "cliffsub/error.hpp"

namespace cliffsub {

Eigen::MatrixXcd SpinorOperator::combined() const {
  const auto n = static_cast<Eigen::Index>(n_);
  Eigen::MatrixXcd out(2 * n, 2 * n);
  for (std::size_t a = 0; a < n_; ++a) {
    for (std::size_t b = 0; b < n_; ++b) {
      out.block<2, 2>(2 * static_cast<Eigen::Index>(a), 2 * static_cast<Eigen::Index>(b)) = (*this)(a, b);
    }
  }
  return out;
}

std::array<Eigen::MatrixXcd, 4> SpinorOperator::four_operators() const {
  const auto n = static_cast<Eigen::Index>(n_);
  std::array<Eigen::MatrixXcd, 4> out;
  for (std::size_t mu = 0; mu < 4; ++mu) {
    out[mu].resize(n, n);
    for (std::size_t a = 0; a < n_; ++a) {
      for (std::size_t b = 0; b < n_; ++b) {
        out[mu](static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
            0.5 * (pauli(mu) * (*this)(a, b)).trace();
      }
    }
  }
  return out;
}

double SpinorOperator::hermiticity_defect() const {
  if (n_ == 0) return 0.0;
  const Eigen::MatrixXcd m = combined();
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double SpinorOperator::max_abs_diff(const SpinorOperator& other) const {
  if (other.n_ != n_) throw UsageError("operator dimensions differ");
  double m = 0.0;
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    m = std::max(m, (blocks_[k] - other.blocks_[k]).cwiseAbs().maxCoeff());
  }
  return m;
}

AnticommutatorTable anticommutator_table(std::span<const SpinorPair> ket,
                                         std::span<const SpinorPair> bra) {
  if (ket.size() != bra.size()) throw UsageError("ket and bra dimensions differ");
  AnticommutatorTable out{SpinorOperator(ket.size()), 0.0};
  for (std::size_t a = 0; a < ket.size(); ++a) {
    for (std::size_t b = 0; b < bra.size(); ++b) {
      for (std::size_t A = 0; A < 2; ++A) {
        for (std::size_t B = 0; B < 2; ++B) {
          const CliffordElement ac = anticommutator(ket[a][A], bra[b][B]);
          out.table(a, b)(static_cast<Eigen::Index>(A), static_cast<Eigen::Index>(B)) = ac.scalar_part();
          out.non_scalar_residual = std::max(out.non_scalar_residual, ac.non_scalar_norm());
        }
      }
    }
  }
  return out;
}

Signature SpinorBlockLayout::signature() const {
  Signature sig;
  for (const auto& p : plans) sig = sig.concat(p.signature());
  return sig;
}

std::size_t SpinorBlockLayout::generator_count() const {
  return blocks.empty() ? 0 : blocks.back().offset + blocks.back().count;
}

SpinorBlockLayout plan_spinor_blocks(std::span<const SpinorMatrix> spinors, double tol) {
  SpinorBlockLayout layout;
  std::size_t cursor = 0;
  for (const auto& m : spinors) {
    HermitianFactorPlan plan = plan_factorization(m, tol);
    const std::size_t count = plan.signature().size();
    layout.blocks.push_back({cursor, count});
    cursor += count;
    layout.plans.push_back(std::move(plan));
  }
  return layout;
}

std::vector<SpinorPair> realize_spinor_blocks(const SpinorBlockLayout& layout, const Algebra& algebra,
                                              std::size_t offset) {
  std::vector<SpinorPair> out;
  out.reserve(layout.plans.size());
  for (std::size_t r = 0; r < layout.plans.size(); ++r) {
    auto v = realize_factorization(layout.plans[r], algebra, offset + layout.blocks[r].offset);
    out.push_back({std::move(v[0]), std::move(v[1])});
  }
  return out;
}

CliffordPosition build_position(const SpaceTimeSpectrum& spectrum, const SubstructureOptions& options) {
  const std::size_t n = spectrum.points.size();
  if (n == 0) throw ValidationError("spectrum has no points");
  if (n > options.max_points) {
    throw ConfigError("spectrum of " + std::to_string(n) + " points exceeds cap " +
                      std::to_string(options.max_points));
  }
  std::vector<SpinorMatrix> spinors;
  spinors.reserve(n);
  for (const auto& x : spectrum.points) spinors.push_back(vector_to_spinor(x));

  SpinorBlockLayout layout = plan_spinor_blocks(spinors, options.factor_tolerance);
  CliffordPosition pos{Algebra::make(layout.signature(), options.generator_cap), {}, layout.blocks};
  pos.pairs = realize_spinor_blocks(layout, pos.algebra, 0);

  const OrthogonalityReport report = orthogonality_report(pos, spectrum);
  if (report.max_value_residual > options.residual_tolerance ||
      report.max_non_scalar > options.residual_tolerance) {
    throw NumericError("Clifford position residual " + std::to_string(report.max_value_residual) +
                       " above tolerance");
  }
  return pos;
}

CliffordKet assemble_ket(const CliffordPosition& position) { return CliffordKet{position.pairs}; }

SpinorPair contract(const CliffordKet& ket, std::size_t r) {
  if (r >= ket.dimension()) throw UsageError("basis index out of range");
  return ket.entries[r];
}

CliffordKet negate(const CliffordKet& ket) {
  CliffordKet out = ket;
  for (auto& e : out.entries) e = {-e[0], -e[1]};
  return out;
}

std::vector<SpinorPair> bra_of(const CliffordKet& ket) {
  std::vector<SpinorPair> bra;
  bra.reserve(ket.entries.size());
  for (const auto& e : ket.entries) bra.push_back(involution(e));
  return bra;
}

AnticommutatorTable reconstruct_X(const CliffordKet& ket) {
  return anticommutator_table(ket.entries, bra_of(ket));
}

OrthogonalityReport orthogonality_report(const CliffordPosition& position,
                                         const SpaceTimeSpectrum& spectrum) {
  const std::size_t n = position.dimension();
  if (spectrum.points.size() != n) throw UsageError("spectrum and position sizes differ");
  OrthogonalityReport out;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t s = 0; s < n; ++s) {
      const SpinorMatrix expected = r == s ? vector_to_spinor(spectrum.points[s]) : SpinorMatrix::Zero();
      for (std::size_t A = 0; A < 2; ++A) {
        for (std::size_t B = 0; B < 2; ++B) {
          const CliffordElement ac = anticommutator(position.pairs[r][A], involution(position.pairs[s][B]));
          const Complex want = expected(static_cast<Eigen::Index>(A), static_cast<Eigen::Index>(B));
          out.max_value_residual = std::max(out.max_value_residual, std::abs(ac.scalar_part() - want));
          out.max_non_scalar = std::max(out.max_non_scalar, ac.non_scalar_norm());
          if (r != s && !ac.is_zero()) out.structurally_exact = false;

          const CliffordElement plain = anticommutator(position.pairs[r][A], position.pairs[s][B]);
          out.max_plain_anticommutator = std::max(out.max_plain_anticommutator, plain.max_norm());
          if (!plain.is_zero()) out.structurally_exact = false;
        }
      }
    }
  }
  return out;
}

HilbertState HilbertState::basis(std::size_t n, std::size_t r) {
  if (r >= n) throw UsageError("basis index out of range");
  HilbertState s{std::vector<Complex>(n)};
  s.amplitudes[r] = 1.0;
  return s;
}

void HilbertState::validate(double tol) const {
  double norm = 0.0;
  for (const auto& a : amplitudes) norm += std::norm(a);
  if (std::abs(norm - 1.0) > tol) {
    throw ValidationError("state is not normalized: norm^2 = " + std::to_string(norm));
  }
}

SpinorPair expectation_substructure(const CliffordKet& ket, const HilbertState& s) {
  if (ket.dimension() != s.dimension()) throw ValidationError("state and ket dimensions differ");
  SpinorPair out;
  for (std::size_t r = 0; r < ket.dimension(); ++r) {
    for (std::size_t A = 0; A < 2; ++A) out[A] += s.amplitudes[r] * ket.entries[r][A];
  }
  return out;
}

FourVector expected_position(const SpaceTimeSpectrum& spectrum, const HilbertState& s) {
  if (spectrum.points.size() != s.dimension()) throw ValidationError("state and spectrum dimensions differ");
  FourVector mean;
  for (std::size_t r = 0; r < s.dimension(); ++r) mean += std::norm(s.amplitudes[r]) * spectrum.points[r];
  return mean;
}

double verify_expectation(const SpinorPair& cbar, const SpaceTimeSpectrum& spectrum,
                          const HilbertState& s) {
  SpinorMatrix m;
  for (std::size_t A = 0; A < 2; ++A) {
    for (std::size_t B = 0; B < 2; ++B) {
      m(static_cast<Eigen::Index>(A), static_cast<Eigen::Index>(B)) =
          anticommutator(cbar[A], involution(cbar[B])).scalar_part();
    }
  }
  const FourVector want = expected_position(spectrum, s);
  // Skip the Hermiticity gate: a defect shows up as a component residual.
  FourVector got;
  for (std::size_t mu = 0; mu < 4; ++mu) got[mu] = 0.5 * (pauli(mu) * m).trace().real();
  const double defect = hermiticity_defect(m);
  return std::max(max_abs_diff(got, want), defect);
}

}  // namespace cliffsub
