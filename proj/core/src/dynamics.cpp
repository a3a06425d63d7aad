#include "cliffsub/dynamics.hpp"

#include <cmath>
#include <limits>

#include "cliffsub/error.hpp"

namespace cliffsub {

namespace {

using PairVector = std::vector<SpinorPair>;

PairVector axpy(const PairVector& y, double h, const PairVector& k) {
  PairVector out = y;
  for (std::size_t r = 0; r < out.size(); ++r) {
    for (std::size_t A = 0; A < 2; ++A) out[r][A] += Complex(h, 0.0) * k[r][A];
  }
  return out;
}

double max_diff(const PairVector& a, const PairVector& b) {
  if (a.size() != b.size()) throw UsageError("state dimensions differ");
  double m = 0.0;
  for (std::size_t r = 0; r < a.size(); ++r) {
    for (std::size_t A = 0; A < 2; ++A) m = std::max(m, max_abs_diff(a[r][A], b[r][A]));
  }
  return m;
}

PairVector zeros_like(const PairVector& v) {
  PairVector out(v.size());
  for (std::size_t r = 0; r < v.size(); ++r) {
    for (std::size_t A = 0; A < 2; ++A) out[r][A] = v[r][A].algebra().zero();
  }
  return out;
}

}  // namespace

ParticleState init_particle(double mass, std::span<const FourVector> momenta,
                            std::span<const FourVector> positions, const ParticleOptions& options) {
  if (!(mass > 0.0)) throw ValidationError("mass must be positive");
  if (momenta.size() != positions.size()) throw ValidationError("momenta and positions differ in length");
  if (momenta.empty()) throw ValidationError("particle needs at least one Hilbert basis entry");
  for (std::size_t r = 0; r < momenta.size(); ++r) {
    const double shell = std::abs(momenta[r].minkowski_norm() - mass * mass);
    if (shell > options.shell_tolerance) {
      throw ValidationError("momentum " + std::to_string(r) + " is off shell by " + std::to_string(shell));
    }
  }

  std::vector<SpinorMatrix> x_spinors;
  std::vector<SpinorMatrix> p_spinors;
  for (const auto& x : positions) x_spinors.push_back(vector_to_spinor(x));
  for (const auto& p : momenta) p_spinors.push_back(lower_indices(vector_to_spinor(p)));

  const SpinorBlockLayout x_layout = plan_spinor_blocks(x_spinors, options.factor_tolerance);
  const SpinorBlockLayout p_layout = plan_spinor_blocks(p_spinors, options.factor_tolerance);

  ParticleState state;
  state.tau = 0.0;
  state.mass = mass;
  state.algebra = Algebra::make(x_layout.signature().concat(p_layout.signature()), options.generator_cap);
  state.position_ket = realize_spinor_blocks(x_layout, state.algebra, 0);
  state.momentum_bra = realize_spinor_blocks(p_layout, state.algebra, x_layout.generator_count());
  return state;
}

AnticommutatorTable momentum_lower(const ParticleState& state) {
  PairVector ket;
  ket.reserve(state.dimension());
  for (const auto& d : state.momentum_bra) ket.push_back(involution(d));
  AnticommutatorTable t = anticommutator_table(ket, state.momentum_bra);
  // The table holds {D*_Ḃ, D_A} at (Ḃ, A); P_{AḂ} is its transpose.
  for (std::size_t a = 0; a < t.table.dimension(); ++a) {
    for (std::size_t b = 0; b < t.table.dimension(); ++b) {
      t.table(a, b).transposeInPlace();
    }
  }
  return t;
}

std::vector<SpinorPair> position_velocity(const ParticleState& state) {
  const std::size_t n = state.dimension();
  const AnticommutatorTable p = momentum_lower(state);
  PairVector vel = zeros_like(state.position_ket);
  const Complex scale(1.0 / (2.0 * state.mass), 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const SpinorMatrix p_upper = raise_indices(p.table(a, b));
      for (std::size_t E = 0; E < 2; ++E) {
        const CliffordElement d_dot = involution(state.momentum_bra[b][E]);
        for (std::size_t A = 0; A < 2; ++A) {
          const Complex coeff = p_upper(static_cast<Eigen::Index>(A), static_cast<Eigen::Index>(E));
          if (coeff == Complex{}) continue;
          vel[a][A] += (scale * coeff) * d_dot;
        }
      }
    }
  }
  return vel;
}

ParticleState evolve_closed(const ParticleState& state, double tau) {
  ParticleState out = state;
  out.position_ket = axpy(state.position_ket, tau - state.tau, position_velocity(state));
  out.tau = tau;
  return out;
}

ParticleState evolve_numeric(const ParticleState& state, double tau_end, std::size_t steps) {
  if (steps == 0) throw UsageError("evolve_numeric needs at least one step");
  const double h = (tau_end - state.tau) / static_cast<double>(steps);

  // dC/dτ from the current D; dD/dτ = 0.
  auto rhs = [](const ParticleState& s) {
    return std::pair{position_velocity(s), zeros_like(s.momentum_bra)};
  };
  auto shifted = [](const ParticleState& s, double dt, const std::pair<PairVector, PairVector>& k) {
    ParticleState t = s;
    t.position_ket = axpy(s.position_ket, dt, k.first);
    t.momentum_bra = axpy(s.momentum_bra, dt, k.second);
    t.tau = s.tau + dt;
    return t;
  };

  ParticleState y = state;
  for (std::size_t i = 0; i < steps; ++i) {
    const auto k1 = rhs(y);
    const auto k2 = rhs(shifted(y, h / 2, k1));
    const auto k3 = rhs(shifted(y, h / 2, k2));
    const auto k4 = rhs(shifted(y, h, k3));
    ParticleState next = y;
    next.position_ket = axpy(axpy(axpy(axpy(y.position_ket, h / 6, k1.first), h / 3, k2.first), h / 3, k3.first),
                             h / 6, k4.first);
    next.momentum_bra =
        axpy(axpy(axpy(axpy(y.momentum_bra, h / 6, k1.second), h / 3, k2.second), h / 3, k3.second), h / 6,
             k4.second);
    next.tau = state.tau + h * static_cast<double>(i + 1);
    y = std::move(next);
  }
  y.tau = tau_end;
  return y;
}

double max_coefficient_diff(const ParticleState& a, const ParticleState& b) {
  return std::max(max_diff(a.position_ket, b.position_ket), max_diff(a.momentum_bra, b.momentum_bra));
}

SpacetimeObservables spacetime_observables(const ParticleState& state) {
  CliffordKet ket{state.position_ket};
  const AnticommutatorTable x = reconstruct_X(ket);
  AnticommutatorTable p = momentum_lower(state);
  for (std::size_t a = 0; a < p.table.dimension(); ++a) {
    for (std::size_t b = 0; b < p.table.dimension(); ++b) p.table(a, b) = raise_indices(p.table(a, b));
  }
  return {x.table, p.table, std::max(x.non_scalar_residual, p.non_scalar_residual)};
}

MuSample extract_mu(const ParticleState& state) {
  const AnticommutatorTable t = anticommutator_table(state.position_ket, state.momentum_bra);
  const std::size_t n = state.dimension();
  Complex sum{};
  for (std::size_t a = 0; a < n; ++a) sum += t.table(a, a).trace();
  const double mu = (sum / (2.0 * static_cast<double>(n))).real();

  double off = t.non_scalar_residual;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      const SpinorMatrix want = a == b ? SpinorMatrix(SpinorMatrix::Identity() * mu) : SpinorMatrix::Zero();
      off = std::max(off, (t.table(a, b) - want).cwiseAbs().maxCoeff());
    }
  }
  return {state.tau, mu, off};
}

MuTrace mu_trace(const ParticleState& state, std::span<const double> tau_grid) {
  MuTrace trace;
  for (double tau : tau_grid) {
    MuSample s = extract_mu(evolve_closed(state, tau));
    trace.max_off_delta = std::max(trace.max_off_delta, s.off_delta);
    trace.samples.push_back(s);
  }
  // Ordinary least squares for μ = slope·τ + intercept.
  const auto n = static_cast<double>(trace.samples.size());
  if (trace.samples.size() >= 2) {
    double st = 0, sm = 0, stt = 0, stm = 0;
    for (const auto& s : trace.samples) {
      st += s.tau;
      sm += s.mu;
      stt += s.tau * s.tau;
      stm += s.tau * s.mu;
    }
    const double denom = n * stt - st * st;
    if (denom != 0.0) {
      trace.slope = (n * stm - st * sm) / denom;
      trace.intercept = (sm - trace.slope * st) / n;
    }
  } else if (trace.samples.size() == 1) {
    trace.intercept = trace.samples.front().mu;
  }
  return trace;
}

double reparametrize(double mass, double tau) { return mass * tau * tau / 4.0; }

double mu_closed_form(double mass, double tau) { return mass * tau / 2.0; }

EvennessReport evenness_check(const ParticleState& state, std::span<const double> tau_grid) {
  EvennessReport report;
  report.min_ket_separation = std::numeric_limits<double>::infinity();
  ParticleState flipped = state;
  for (auto& e : flipped.position_ket) e = {-e[0], -e[1]};

  for (double tau : tau_grid) {
    const ParticleState plus = evolve_closed(state, tau);
    const ParticleState minus = evolve_closed(state, -tau);
    const SpinorOperator xp = spacetime_observables(plus).X;
    const SpinorOperator xm = spacetime_observables(minus).X;
    report.max_residual = std::max(report.max_residual, xp.max_abs_diff(xm));
    if (tau != 0.0) {
      report.min_ket_separation = std::min(report.min_ket_separation, max_diff(plus.position_ket, minus.position_ket));
    }

    PairVector neg_minus = minus.position_ket;
    for (auto& e : neg_minus) e = {-e[0], -e[1]};
    const ParticleState flipped_plus = evolve_closed(flipped, tau);
    report.sign_flip_residual = std::max(report.sign_flip_residual, max_diff(neg_minus, flipped_plus.position_ket));
  }
  if (!std::isfinite(report.min_ket_separation)) report.min_ket_separation = 0.0;
  return report;
}

double shell_residual(const ParticleState& state) {
  double worst = 0.0;
  const double m2 = state.mass * state.mass;
  for (const auto& dstar_lower : state.momentum_bra) {
    const SpinorPair d_lower = involution(dstar_lower);
    const SpinorPair dstar_upper = raise_index(dstar_lower);
    const SpinorPair d_upper = raise_index(d_lower);
    Complex value{};
    for (std::size_t A = 0; A < 2; ++A) {
      for (std::size_t B = 0; B < 2; ++B) {
        value += anticommutator(dstar_lower[A], d_lower[B]).scalar_part() *
                 anticommutator(dstar_upper[A], d_upper[B]).scalar_part();
      }
    }
    worst = std::max(worst, std::abs(0.5 * value - m2));
  }
  return worst;
}

double hamiltonian_residual(const ParticleState& state) {
  const auto p = spacetime_observables(state).P.four_operators();
  const auto n = static_cast<Eigen::Index>(state.dimension());
  Eigen::MatrixXcd pp = p[0] * p[0] - p[1] * p[1] - p[2] * p[2] - p[3] * p[3];
  const Eigen::MatrixXcd h =
      (pp - Eigen::MatrixXcd::Identity(n, n) * (state.mass * state.mass)) / (2.0 * state.mass);
  return h.cwiseAbs().maxCoeff();
}

}  // namespace cliffsub
