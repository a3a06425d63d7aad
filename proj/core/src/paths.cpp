#include "cliffsub/paths.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "cliffsub/dynamics.hpp"
#include "cliffsub/error.hpp"

namespace cliffsub {

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::position:
      return "position";
    case EventKind::spin:
      return "spin";
    case EventKind::composite_spin:
      return "composite-spin";
  }
  return "unknown";
}

bool EventSequence::mirror_symmetric() const {
  std::map<std::pair<std::string, std::string>, int> balance;
  std::map<double, std::pair<std::string, std::string>> by_tau;
  for (const auto& e : entries) {
    const auto key = std::pair{e.label, e.outcome};
    balance[key] += e.tau < 0 ? -1 : 1;
    by_tau[e.tau] = key;
  }
  for (const auto& [key, count] : balance) {
    if (count != 0) return false;
  }
  for (const auto& [tau, key] : by_tau) {
    auto it = by_tau.find(-tau);
    if (it == by_tau.end() || it->second != key) return false;
  }
  return true;
}

std::vector<std::string> EventSequence::ordering() const {
  std::vector<std::string> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.label + (e.tau < 0 ? "-" : "+"));
  return out;
}

EventSequence build_event_sequence(const std::vector<MeasurementEvent>& events) {
  std::vector<double> magnitudes;
  for (const auto& e : events) {
    if (!(e.tau > 0.0)) throw ValidationError("event '" + e.label + "' needs a positive tau magnitude");
    magnitudes.push_back(e.tau);
  }
  std::sort(magnitudes.begin(), magnitudes.end());
  if (std::adjacent_find(magnitudes.begin(), magnitudes.end()) != magnitudes.end()) {
    throw ValidationError("events share a tau magnitude");
  }

  EventSequence seq;
  for (const auto& e : events) {
    for (double sign : {-1.0, 1.0}) {
      seq.entries.push_back({sign * e.tau, e.label, e.kind, e.outcome, e.point});
    }
  }
  std::sort(seq.entries.begin(), seq.entries.end(),
            [](const SequenceEntry& a, const SequenceEntry& b) { return a.tau < b.tau; });
  return seq;
}

Complex sequence_amplitude(const EventSequence& sequence, const Eigen::MatrixXcd& overlap) {
  Complex amp(1.0, 0.0);
  for (std::size_t k = 0; k + 1 < sequence.entries.size(); ++k) {
    const auto a = static_cast<Eigen::Index>(sequence.entries[k].state_after);
    const auto b = static_cast<Eigen::Index>(sequence.entries[k + 1].state_after);
    if (a >= overlap.rows() || b >= overlap.cols()) throw ValidationError("state index outside overlap matrix");
    amp *= overlap(a, b);
  }
  return amp;
}

PairAmplitude degenerate_pair_amplitude(Complex overlap) {
  if (std::abs(overlap) > 1.0 + 1e-10) throw ValidationError("overlap modulus exceeds 1");
  // ⟨c_Q-|c_P-⟩ = ⟨x_Q|x_P⟩ and ⟨c_P+|c_Q+⟩ = ⟨x_P|x_Q⟩.
  return {std::conj(overlap) * overlap, std::norm(overlap)};
}

EvolutionKernel EvolutionKernel::from_matrix(Eigen::MatrixXcd u, double tol) {
  if (u.rows() != u.cols() || u.rows() == 0) throw ValidationError("kernel must be a non-empty square matrix");
  const auto n = u.rows();
  const double defect = (u.adjoint() * u - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (defect > tol) throw ValidationError("kernel is not unitary: defect " + std::to_string(defect));
  return EvolutionKernel(std::move(u));
}

EvolutionKernel EvolutionKernel::dft(std::size_t n) {
  if (n == 0) throw ValidationError("kernel dimension must be positive");
  const auto dim = static_cast<Eigen::Index>(n);
  Eigen::MatrixXcd f(dim, dim);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index k = 0; k < dim; ++k) {
      // Reduce jk mod n first so the phase argument stays small.
      const auto jk = static_cast<double>((j * k) % dim);
      f(j, k) = std::polar(norm, 2.0 * std::numbers::pi * jk / static_cast<double>(n));
    }
  }
  return EvolutionKernel(std::move(f));
}

EvolutionKernel EvolutionKernel::identity(std::size_t n) {
  const auto dim = static_cast<Eigen::Index>(n);
  return EvolutionKernel(Eigen::MatrixXcd::Identity(dim, dim));
}

Complex EvolutionKernel::operator()(std::size_t from, std::size_t to) const {
  if (from >= dimension() || to >= dimension()) throw ValidationError("kernel index out of range");
  return u_(static_cast<Eigen::Index>(from), static_cast<Eigen::Index>(to));
}

namespace {

void validate_setup(const SlitSetup& s) {
  const std::size_t mid = s.source_to_slits.dimension();
  if (s.slits_to_detector.dimension() != mid) throw ValidationError("kernel dimensions differ");
  if (s.source >= mid || s.detector >= mid) throw ValidationError("endpoint index out of range");
  if (s.slits.empty()) throw ValidationError("no slits");
  std::vector<std::size_t> sorted = s.slits;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw ValidationError("repeated slit");
  for (std::size_t k : s.slits) {
    if (k >= mid) throw ValidationError("slit index out of range");
  }
  if (s.which_slit && s.which_slit->slit >= s.slits.size()) throw ValidationError("which_slit out of range");
}

bool survives(const std::optional<WhichSlit>& w, std::size_t i, std::size_t j) {
  if (!w) return true;
  const std::size_t k = w->slit;
  if (w->mode == DetectionMode::post_selected) return i == k && j == k;
  return (i == k) == (j == k);
}

}  // namespace

std::vector<CliffordPath> slit_paths(const SlitSetup& setup, const SlitTimes& times) {
  validate_setup(setup);
  if (!(0.0 < times.p && times.p < times.s && times.s < times.q)) {
    throw ValidationError("slit times must satisfy 0 < p < s < q");
  }
  const auto& ps = setup.source_to_slits;
  const auto& sq = setup.slits_to_detector;
  const std::size_t P = setup.source;
  const std::size_t Q = setup.detector;

  std::vector<CliffordPath> paths;
  for (std::size_t i = 0; i < setup.slits.size(); ++i) {
    for (std::size_t j = 0; j < setup.slits.size(); ++j) {
      const std::size_t si = setup.slits[i];
      const std::size_t sj = setup.slits[j];
      CliffordPath path;
      path.enter_slit = i;
      path.exit_slit = j;
      path.entries = {
          {-times.q, "Q", EventKind::position, "", Q},  {-times.s, "S" + std::to_string(i + 1), EventKind::position, "", si},
          {-times.p, "P", EventKind::position, "", P},  {times.p, "P", EventKind::position, "", P},
          {times.s, "S" + std::to_string(j + 1), EventKind::position, "", sj}, {times.q, "Q", EventKind::position, "", Q},
      };
      // On the negative branch the legs are traversed backwards, giving
      // conjugated overlaps; ⟨c_P-|c_P+⟩ = 1.
      const Complex q_to_si = std::conj(sq(si, Q));
      const Complex si_to_p = std::conj(ps(P, si));
      const Complex p_to_p(1.0, 0.0);
      const Complex p_to_sj = ps(P, sj);
      const Complex sj_to_q = sq(sj, Q);
      path.amplitude = q_to_si * si_to_p * p_to_p * p_to_sj * sj_to_q;
      paths.push_back(std::move(path));
    }
  }
  return paths;
}

SlitResult slit_experiment(const SlitSetup& setup) {
  validate_setup(setup);
  const std::size_t n = setup.slits.size();
  const auto dim = static_cast<Eigen::Index>(n);

  SlitResult out;
  out.term_table = Eigen::MatrixXcd::Zero(dim, dim);
  out.surviving = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& path : slit_paths(setup)) {
    const auto i = static_cast<Eigen::Index>(path.enter_slit);
    const auto j = static_cast<Eigen::Index>(path.exit_slit);
    out.term_table(i, j) = path.amplitude;
    if (survives(setup.which_slit, path.enter_slit, path.exit_slit)) out.surviving(i, j) = path.amplitude;
  }

  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t s = setup.slits[i];
    out.slit_amplitudes.push_back(setup.source_to_slits(setup.source, s) *
                                  setup.slits_to_detector(s, setup.detector));
  }

  out.open_probability = out.term_table.sum().real();
  out.probability = out.surviving.sum().real();
  out.diagonal_sum = out.surviving.diagonal().sum().real();
  out.cross_sum = out.probability - out.diagonal_sum;
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      if (i == j || !survives(setup.which_slit, static_cast<std::size_t>(i), static_cast<std::size_t>(j))) continue;
      out.pair_decomposition.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j), out.surviving(i, j)});
    }
  }
  return out;
}

SlitResult multi_slit(const SlitSetup& setup) { return slit_experiment(setup); }

Eigen::Vector4cd singlet_state() {
  const double r = 1.0 / std::numbers::sqrt2;
  Eigen::Vector4cd psi;
  psi << 0.0, r, -r, 0.0;
  return psi;
}

namespace {

Eigen::Matrix2cd spin_projector(const Axis& n, int sign) {
  const Eigen::Matrix2cd ns = n[0] * pauli(1) + n[1] * pauli(2) + n[2] * pauli(3);
  return 0.5 * (Eigen::Matrix2cd::Identity() + static_cast<double>(sign) * ns);
}

void require_unit(const Axis& n) {
  const double norm = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
  if (std::abs(norm - 1.0) > 1e-12) throw ValidationError("measurement axis must be a unit vector");
}

Eigen::Matrix4cd kron(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Eigen::Matrix4cd out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  }
  return out;
}

}  // namespace

double total_spin_squared(const Eigen::Vector4cd& psi) {
  Eigen::Matrix4cd s2 = Eigen::Matrix4cd::Zero();
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  for (std::size_t k = 1; k <= 3; ++k) {
    const Eigen::Matrix4cd total = 0.5 * (kron(pauli(k), id) + kron(id, pauli(k)));
    s2 += total * total;
  }
  return (psi.adjoint() * s2 * psi)(0, 0).real();
}

EprResult epr_run(const Axis& axis_a, const Axis& axis_b, const EprTimes& times, Rng& rng) {
  require_unit(axis_a);
  require_unit(axis_b);
  if (!(times.p > 0 && times.q > 0 && times.pq > 0)) throw ValidationError("EPR times must be positive");
  if (!(times.pq < times.p && times.pq < times.q)) {
    throw ValidationError("composite measurement must satisfy tau_pq < tau_p and tau_pq < tau_q");
  }

  const Eigen::Vector4cd psi = singlet_state();
  EprResult out;
  std::array<double, 4> weights{};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const Eigen::Matrix4cd proj = kron(spin_projector(axis_a, i == 0 ? 1 : -1), spin_projector(axis_b, j == 0 ? 1 : -1));
      const double p = (psi.adjoint() * proj * psi)(0, 0).real();
      out.joint(i, j) = p;
      weights[static_cast<std::size_t>(2 * i + j)] = p;
    }
  }
  out.correlation = out.joint(0, 0) - out.joint(0, 1) - out.joint(1, 0) + out.joint(1, 1);

  // Sample one joint outcome from the Born weights.
  const double u = rng.uniform();
  double acc = 0.0;
  std::size_t pick = 3;
  for (std::size_t k = 0; k < 4; ++k) {
    acc += weights[k];
    if (u < acc) {
      pick = k;
      break;
    }
  }
  out.outcomes = {pick / 2 == 0 ? 1 : -1, pick % 2 == 0 ? 1 : -1};
  auto spin_label = [](int s) { return std::string(s > 0 ? "+1/2" : "-1/2"); };

  const std::vector<MeasurementEvent> events = {
      {"P", 0, times.p, EventKind::spin, spin_label(out.outcomes[0])},
      {"Q", 1, times.q, EventKind::spin, spin_label(out.outcomes[1])},
      {"PQ", 2, times.pq, EventKind::composite_spin, "0"},
  };
  out.narrative = build_event_sequence(events);
  return out;
}

Trajectory free_particle_trajectory(const FourVector& x0, const FourVector& momentum) {
  return {[x0, momentum](double tau) { return x0 + momentum * (tau * tau / 4.0); },
          [momentum](double tau) { return momentum * (tau / 2.0); }};
}

namespace {

double timelike_length(const FourVector& v) {
  const double n = v.minkowski_norm();
  if (n < -1e-12) throw ValidationError("trajectory velocity is spacelike");
  return std::sqrt(std::max(0.0, n));
}

template <typename F>
double trapezoid(F&& f, double a, double b, std::size_t steps) {
  const double h = (b - a) / static_cast<double>(steps);
  double sum = 0.5 * (f(a) + f(b));
  for (std::size_t k = 1; k < steps; ++k) sum += f(a + h * static_cast<double>(k));
  return sum * h;
}

}  // namespace

ActionCheck wf_action_check(const Trajectory& path, const FourPotential& advanced,
                            const FourPotential& retarded, const ActionParams& params) {
  if (!(0.0 < params.tau1 && params.tau1 < params.tau2)) throw ValidationError("need 0 < tau1 < tau2");
  if (params.steps == 0) throw ValidationError("need at least one quadrature step");
  if (!(params.mass > 0.0)) throw ValidationError("mass must be positive");

  const double h = (params.tau2 - params.tau1) / static_cast<double>(params.steps);
  for (std::size_t k = 0; k <= params.steps; ++k) {
    const double tau = params.tau1 + h * static_cast<double>(k);
    const FourVector plus = path.position(tau);
    const FourVector minus = path.position(-tau);
    double scale = 1.0;
    for (std::size_t mu = 0; mu < 4; ++mu) scale = std::max(scale, std::abs(plus[mu]));
    if (max_abs_diff(plus, minus) > params.evenness_tolerance * scale) {
      throw ValidationError("trajectory is not even in tau");
    }
  }

  const double m = params.mass;
  const double e = params.charge;
  auto minus_branch = [&](double tau) {
    const FourVector v = path.velocity(tau);
    return m * timelike_length(v) + e * minkowski_dot(advanced(path.position(tau)), v * -1.0);
  };
  auto plus_branch = [&](double tau) {
    const FourVector v = path.velocity(tau);
    return m * timelike_length(v) + e * minkowski_dot(retarded(path.position(tau)), v);
  };
  auto affine = [&](double tau_bar) {
    const double tau = std::sqrt(4.0 * tau_bar / m);
    const FourVector x = path.position(tau);
    const FourVector u = path.velocity(tau) * (1.0 / mu_closed_form(m, tau));
    const FourVector field = (advanced(x) + retarded(x)) * 0.5;
    return m * timelike_length(u) + e * minkowski_dot(field, u);
  };

  ActionCheck out;
  out.lhs = 0.5 * trapezoid(minus_branch, -params.tau2, -params.tau1, params.steps) +
            0.5 * trapezoid(plus_branch, params.tau1, params.tau2, params.steps);
  out.rhs = trapezoid(affine, reparametrize(m, params.tau1), reparametrize(m, params.tau2), params.steps);
  out.diff = std::abs(out.lhs - out.rhs);
  return out;
}

}  // namespace cliffsub
