#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cliffsub/clifford.hpp"
#include "cliffsub/rng.hpp"
#include "cliffsub/spinor.hpp"

namespace cliffsub {

// ---------------------------------------------------------------------------
// Event bookkeeping on degenerate paths
// ---------------------------------------------------------------------------

enum class EventKind { position, spin, composite_spin };

const char* to_string(EventKind kind);

/// One space-time measurement. It materializes twice, at -tau and +tau.
struct MeasurementEvent {
  std::string label;
  std::size_t point = 0;
  double tau = 1.0;
  EventKind kind = EventKind::position;
  std::string outcome;
};

struct SequenceEntry {
  double tau = 0.0;
  std::string label;
  EventKind kind = EventKind::position;
  std::string outcome;
  /// Basis index of the reduced state |c⟩ = |x_point⟩ holding after this entry.
  std::size_t state_after = 0;
};

/// Entries ordered by strictly increasing signed parameter time.
struct EventSequence {
  std::vector<SequenceEntry> entries;

  /// Every +τ entry has a -τ partner with the same label and outcome.
  bool mirror_symmetric() const;
  /// Labels in order, suffixed with "-" or "+" by branch.
  std::vector<std::string> ordering() const;
};

/// Throws ValidationError for a non-positive or repeated tau magnitude.
EventSequence build_event_sequence(const std::vector<MeasurementEvent>& events);

/// Π_k ⟨state_k|state_{k+1}⟩ with overlap(a, b) = ⟨x_a|x_b⟩.
Complex sequence_amplitude(const EventSequence& sequence, const Eigen::MatrixXcd& overlap);

struct PairAmplitude {
  /// ⟨c_Q-|c_P-⟩⟨c_P+|c_Q+⟩ = conj(z)·z.
  Complex amplitude;
  /// |z|² computed directly.
  double probability = 0.0;
};

/// z = ⟨x_P|x_Q⟩; requires |z| ≤ 1 + 1e-10.
PairAmplitude degenerate_pair_amplitude(Complex overlap);

// ---------------------------------------------------------------------------
// Slit experiments
// ---------------------------------------------------------------------------

/// Unitary propagator between two measurement layers.
class EvolutionKernel {
 public:
  /// Throws ValidationError when ‖U†U - 1‖ > tol or U is not square.
  static EvolutionKernel from_matrix(Eigen::MatrixXcd u, double tol = 1e-10);
  /// F_jk = exp(2πi jk/n)/√n.
  static EvolutionKernel dft(std::size_t n);
  static EvolutionKernel identity(std::size_t n);

  const Eigen::MatrixXcd& matrix() const noexcept { return u_; }
  std::size_t dimension() const noexcept { return static_cast<std::size_t>(u_.rows()); }
  /// ⟨x_from|U|x_to⟩.
  Complex operator()(std::size_t from, std::size_t to) const;

 private:
  explicit EvolutionKernel(Eigen::MatrixXcd u) : u_(std::move(u)) {}
  Eigen::MatrixXcd u_;
};

enum class DetectionMode {
  /// Particle found at the slit: only the path pair through it survives.
  post_selected,
  /// Detector records the slit without selecting: every term pairing the
  /// watched slit with another slit is removed.
  non_selective,
};

struct WhichSlit {
  std::size_t slit = 0;  // position in SlitSetup::slits
  DetectionMode mode = DetectionMode::non_selective;
};

struct SlitSetup {
  EvolutionKernel source_to_slits = EvolutionKernel::identity(1);
  EvolutionKernel slits_to_detector = EvolutionKernel::identity(1);
  std::size_t source = 0;
  std::size_t detector = 0;
  std::vector<std::size_t> slits;
  std::optional<WhichSlit> which_slit;
};

/// A sequence of Clifford positions c_{Q-}, c_{S_i-}, c_{P-}, c_{P+}, c_{S_j+}, c_{Q+}.
struct CliffordPath {
  std::size_t enter_slit = 0;  // i, crossed at -τ_S
  std::size_t exit_slit = 0;   // j, crossed at +τ_S
  std::vector<SequenceEntry> entries;
  /// Product of the five consecutive overlaps along the path.
  Complex amplitude;
};

struct PairTerm {
  std::size_t i = 0;
  std::size_t j = 0;
  Complex amplitude;
};

struct SlitResult {
  /// Sum of the surviving path amplitudes (real part; the sum is real).
  double probability = 0.0;
  /// Probability with every slit open and no detector.
  double open_probability = 0.0;
  /// term_table(i, j): amplitude of the path entering S_i at -τ, leaving S_j at +τ.
  Eigen::MatrixXcd term_table;
  /// term_table restricted to the paths allowed by the detector.
  Eigen::MatrixXcd surviving;
  /// a_i = ⟨x_P|U_PS|x_{S_i}⟩⟨x_{S_i}|U_SQ|x_Q⟩.
  std::vector<Complex> slit_amplitudes;
  double diagonal_sum = 0.0;
  double cross_sum = 0.0;
  /// Surviving off-diagonal terms, one per ordered pair i ≠ j.
  std::vector<PairTerm> pair_decomposition;
};

/// Layer parameter times for path narratives; 0 < p < s < q.
struct SlitTimes {
  double p = 1.0;
  double s = 2.0;
  double q = 3.0;
};

/// Enumerates all n² Clifford paths through the slits.
std::vector<CliffordPath> slit_paths(const SlitSetup& setup, const SlitTimes& times = {});

/// Throws ValidationError for out-of-range indices or kernel size mismatch.
SlitResult slit_experiment(const SlitSetup& setup);

/// Same computation for any number of slits; equivalent to slit_experiment.
SlitResult multi_slit(const SlitSetup& setup);

// ---------------------------------------------------------------------------
// EPR on a degenerate path
// ---------------------------------------------------------------------------

using Axis = std::array<double, 3>;

struct EprTimes {
  double p = 2.0;
  double q = 3.0;
  double pq = 1.0;
};

struct EprResult {
  /// joint(i, j): P outcome (+½ if i == 0) along a, Q outcome along b.
  Eigen::Matrix2d joint;
  double correlation = 0.0;
  /// Sampled spin results for P and Q (+1 or -1 in units of ½).
  std::array<int, 2> outcomes{};
  EventSequence narrative;
};

/// (|↑↓⟩ - |↓↑⟩)/√2 in the basis |↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩.
Eigen::Vector4cd singlet_state();

/// ⟨ψ|S²|ψ⟩ for the total spin of two spin-½ particles.
double total_spin_squared(const Eigen::Vector4cd& psi);

/// Throws ValidationError for non-unit axes, non-positive times, or
/// tau_pq ≥ min(tau_p, tau_q).
EprResult epr_run(const Axis& axis_a, const Axis& axis_b, const EprTimes& times, Rng& rng);

// ---------------------------------------------------------------------------
// Half-advanced plus half-retarded action identity
// ---------------------------------------------------------------------------

struct Trajectory {
  std::function<FourVector(double)> position;
  /// dx/dτ.
  std::function<FourVector(double)> velocity;
};

/// x(τ) = x0 + p τ²/4, the free particle expressed in parameter time.
Trajectory free_particle_trajectory(const FourVector& x0, const FourVector& momentum);

/// A^μ(x).
using FourPotential = std::function<FourVector(const FourVector&)>;

struct ActionCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double diff = 0.0;
};

struct ActionParams {
  double charge = 1.0;
  double mass = 1.0;
  double tau1 = 0.5;
  double tau2 = 2.0;
  std::size_t steps = 1000;
  double evenness_tolerance = 1e-12;
};

/// Trapezoid evaluation of both sides: the two half-branches in τ against
/// the single branch in τ̄ = mτ²/4 with the time-symmetric field. Throws
/// ValidationError when x(-τ) ≠ x(τ) on the samples or 0 < τ1 < τ2 fails.
ActionCheck wf_action_check(const Trajectory& path, const FourPotential& advanced,
                            const FourPotential& retarded, const ActionParams& params);

}  // namespace cliffsub
