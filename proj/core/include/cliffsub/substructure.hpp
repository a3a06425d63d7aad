#pragma once

#include <span>
#include <string>
#include <vector>

#include "cliffsub/factor.hpp"
#include "cliffsub/spinor.hpp"

namespace cliffsub {

/// n×n Hilbert-space matrix whose entries are 2×2 spinors, i.e. an operator
/// X^{AḂ}_{ab}.
class SpinorOperator {
 public:
  SpinorOperator() = default;
  explicit SpinorOperator(std::size_t n) : n_(n), blocks_(n * n, SpinorMatrix::Zero()) {}

  std::size_t dimension() const noexcept { return n_; }
  SpinorMatrix& operator()(std::size_t a, std::size_t b) { return blocks_[a * n_ + b]; }
  const SpinorMatrix& operator()(std::size_t a, std::size_t b) const { return blocks_[a * n_ + b]; }

  /// Matrix in the combined indices (A, a), (B, b); row = 2a + A.
  Eigen::MatrixXcd combined() const;
  /// X^μ_ab = ½ tr(σ_μ X_ab) for μ = 0..3.
  std::array<Eigen::MatrixXcd, 4> four_operators() const;

  double hermiticity_defect() const;
  double max_abs_diff(const SpinorOperator& other) const;

 private:
  std::size_t n_ = 0;
  std::vector<SpinorMatrix> blocks_;
};

/// Table {ket[a]^A, bra[b]^B} of scalar parts, with the largest non-scalar
/// coefficient met along the way.
struct AnticommutatorTable {
  SpinorOperator table;
  double non_scalar_residual = 0.0;
};

AnticommutatorTable anticommutator_table(std::span<const SpinorPair> ket,
                                         std::span<const SpinorPair> bra);

/// Contiguous range of real generators owned by one Hilbert basis entry.
struct GeneratorBlock {
  std::size_t offset = 0;
  std::size_t count = 0;
};

/// Spectral plans for a list of 2×2 Hermitian spinors, laid out back to back.
struct SpinorBlockLayout {
  std::vector<HermitianFactorPlan> plans;
  std::vector<GeneratorBlock> blocks;

  Signature signature() const;
  std::size_t generator_count() const;
};

SpinorBlockLayout plan_spinor_blocks(std::span<const SpinorMatrix> spinors, double tol);

/// Realizes each plan's pair (v_0, v_1) with generators shifted by `offset`.
std::vector<SpinorPair> realize_spinor_blocks(const SpinorBlockLayout& layout, const Algebra& algebra,
                                              std::size_t offset);

struct SpaceTimeSpectrum {
  std::vector<FourVector> points;
  std::vector<std::string> labels;
};

struct SubstructureOptions {
  std::size_t max_points = 6;
  std::size_t generator_cap = kDefaultGeneratorCap;
  double factor_tolerance = kDefaultFactorTolerance;
  /// Bound on the a10 residual accepted by build_position.
  double residual_tolerance = 1e-10;
};

/// Clifford coordinates c_r^A of every eigenvalue x_r, each point using its
/// own block of at most four real generators.
struct CliffordPosition {
  Algebra algebra;
  std::vector<SpinorPair> pairs;
  std::vector<GeneratorBlock> blocks;

  std::size_t dimension() const noexcept { return pairs.size(); }
};

/// Throws ConfigError past the point or generator cap, NumericError when
/// the orthogonality residual exceeds options.residual_tolerance.
CliffordPosition build_position(const SpaceTimeSpectrum& spectrum, const SubstructureOptions& options = {});

/// Entries C^A_r of the Clifford ket in the eigenbasis |x_r⟩.
struct CliffordKet {
  std::vector<SpinorPair> entries;

  std::size_t dimension() const noexcept { return entries.size(); }
};

CliffordKet assemble_ket(const CliffordPosition& position);

/// ⟨x_r|C^A⟩.
SpinorPair contract(const CliffordKet& ket, std::size_t r);

CliffordKet negate(const CliffordKet& ket);

/// The conjugate bra entries C*^Ḃ_b.
std::vector<SpinorPair> bra_of(const CliffordKet& ket);

/// X^{AḂ}_{ab} = scalar part of {C^A_a, C*^Ḃ_b}.
AnticommutatorTable reconstruct_X(const CliffordKet& ket);

struct OrthogonalityReport {
  /// max |{c_r^A, c_s*^Ḃ} - δ_rs x_s^{AḂ}|.
  double max_value_residual = 0.0;
  double max_non_scalar = 0.0;
  /// Largest coefficient of any {c_r^A, c_s^B}.
  double max_plain_anticommutator = 0.0;
  /// Every r ≠ s anticommutator and every {c, c} is identically zero.
  bool structurally_exact = true;
};

OrthogonalityReport orthogonality_report(const CliffordPosition& position,
                                         const SpaceTimeSpectrum& spectrum);

/// Amplitudes ⟨s|x_r⟩ of a normalized state.
struct HilbertState {
  std::vector<Complex> amplitudes;

  static HilbertState basis(std::size_t n, std::size_t r);
  /// Throws ValidationError when |Σ|a_r|² - 1| > tol.
  void validate(double tol = 1e-12) const;
  std::size_t dimension() const noexcept { return amplitudes.size(); }
};

/// c̄^A = Σ_r ⟨s|x_r⟩ c_r^A.
SpinorPair expectation_substructure(const CliffordKet& ket, const HilbertState& s);

/// x̄^μ = Σ_r |⟨s|x_r⟩|² x_r^μ.
FourVector expected_position(const SpaceTimeSpectrum& spectrum, const HilbertState& s);

/// max |vector({c̄^A, c̄*^Ḃ}) - x̄| over components.
double verify_expectation(const SpinorPair& cbar, const SpaceTimeSpectrum& spectrum,
                          const HilbertState& s);

}  // namespace cliffsub
