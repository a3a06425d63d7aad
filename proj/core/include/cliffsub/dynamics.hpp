#pragma once

#include <span>
#include <vector>

#include "cliffsub/substructure.hpp"

namespace cliffsub {

/// Free relativistic point particle in Clifford space.
///
/// `position_ket[r]` holds C^A_r(τ) and `momentum_bra[r]` holds the bra
/// components D_{A,r} (the classical d*_A). Observables follow
///   X^{AḂ} = {C^A, C*^Ḃ},   P_{AḂ} = {D*_Ḃ, D_A},
/// so P is read back from the bra alone.
struct ParticleState {
  double tau = 0.0;
  double mass = 1.0;
  Algebra algebra = Algebra::make(Signature{});
  std::vector<SpinorPair> position_ket;
  std::vector<SpinorPair> momentum_bra;

  std::size_t dimension() const noexcept { return position_ket.size(); }
};

struct ParticleOptions {
  std::size_t generator_cap = kDefaultGeneratorCap;
  double shell_tolerance = 1e-10;
  double factor_tolerance = kDefaultFactorTolerance;
};

/// State at τ = 0 with C(0) and D(0) factored on disjoint generator blocks,
/// so {C(0), D(0)} = 0 exactly. Throws ValidationError for mismatched list
/// lengths, non-positive mass or an off-shell momentum.
ParticleState init_particle(double mass, std::span<const FourVector> momenta,
                            std::span<const FourVector> positions, const ParticleOptions& options = {});

/// P_{AḂ} operator (lower indices).
AnticommutatorTable momentum_lower(const ParticleState& state);

/// dC^A/dτ = (1/2m) P^{AĖ} D_Ė, with P raised by ε.
std::vector<SpinorPair> position_velocity(const ParticleState& state);

/// C(τ) = C(τ_0) + (1/2m) P^{AĖ} D_Ė (τ - τ_0), D(τ) = D(τ_0).
ParticleState evolve_closed(const ParticleState& state, double tau);

/// Classical fourth-order Runge-Kutta on the coefficient vectors of C and D.
/// Throws UsageError for steps == 0.
ParticleState evolve_numeric(const ParticleState& state, double tau_end, std::size_t steps);

/// Largest coefficient difference across all entries of two states.
double max_coefficient_diff(const ParticleState& a, const ParticleState& b);

struct SpacetimeObservables {
  SpinorOperator X;
  /// P^{AḂ} with raised indices, so spinor_to_vector yields P^μ.
  SpinorOperator P;
  double non_scalar_residual = 0.0;
};

SpacetimeObservables spacetime_observables(const ParticleState& state);

struct MuSample {
  double tau = 0.0;
  double mu = 0.0;
  /// Distance of {C^A, D_B} from μ·δ^A_B·1, including imaginary parts.
  double off_delta = 0.0;
};

struct MuTrace {
  std::vector<MuSample> samples;
  double slope = 0.0;
  double intercept = 0.0;
  double max_off_delta = 0.0;
};

/// Evolves to every τ of the grid (closed form) and extracts μ(τ).
MuTrace mu_trace(const ParticleState& state, std::span<const double> tau_grid);

/// μ(τ) read from a single state.
MuSample extract_mu(const ParticleState& state);

/// τ̄ = m τ² / 4.
double reparametrize(double mass, double tau);

/// μ(τ) = m τ / 2.
double mu_closed_form(double mass, double tau);

struct EvennessReport {
  /// max over the grid of |X(τ) - X(-τ)|.
  double max_residual = 0.0;
  /// min over the grid (τ ≠ 0) of the coefficient distance between C(τ) and C(-τ).
  double min_ket_separation = 0.0;
  /// max distance between -C(-τ) and the evolution of the state with C(0) negated.
  double sign_flip_residual = 0.0;
};

EvennessReport evenness_check(const ParticleState& state, std::span<const double> tau_grid);

/// max over entries of |½{d*_A, d_Ḃ}{d*^A, d^Ḃ} - m²|.
double shell_residual(const ParticleState& state);

/// max over entries of |scalar part of (P·P - m²)/2m|.
double hamiltonian_residual(const ParticleState& state);

}  // namespace cliffsub
