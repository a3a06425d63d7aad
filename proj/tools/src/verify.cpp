#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include "cliffsub/app/commands.hpp"
#include "cliffsub/app/sampling.hpp"
#include "cliffsub/dynamics.hpp"
#include "cliffsub/error.hpp"
#include "cliffsub/factor.hpp"
#include "cliffsub/paths.hpp"

namespace cliffsub::app {

namespace {

// Size of the deliberate corruption applied in fault mode.
constexpr double kFault = 1e-3;

IdentityResult result(std::string tag, std::string description, double residual, double tol, bool extra = true) {
  IdentityResult r;
  r.tag = std::move(tag);
  r.description = std::move(description);
  r.residual = residual;
  r.tolerance = tol;
  r.pass = std::isfinite(residual) && residual <= tol && extra;
  return r;
}

double spinor_diff(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) { return (a - b).cwiseAbs().maxCoeff(); }

// Dense Jordan-Wigner representation of generators with squares ±1.
std::vector<Eigen::MatrixXcd> dense_generators(const std::vector<int>& signs) {
  const std::size_t qubits = (signs.size() + 1) / 2;
  Eigen::Matrix2cd x, y, z;
  x << 0, 1, 1, 0;
  y << 0, Complex(0, -1), Complex(0, 1), 0;
  z << 1, 0, 0, -1;
  auto kron = [](const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
  };
  std::vector<Eigen::MatrixXcd> out;
  for (std::size_t g = 0; g < signs.size(); ++g) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
    for (std::size_t q = 0; q < qubits; ++q) {
      if (q < g / 2) m = kron(m, z);
      else if (q == g / 2) m = kron(m, g % 2 == 0 ? x : y);
      else m = kron(m, Eigen::Matrix2cd::Identity());
    }
    if (signs[g] < 0) m *= Complex(0, 1);
    out.push_back(std::move(m));
  }
  return out;
}

Eigen::MatrixXcd dense(const CliffordElement& x, const std::vector<Eigen::MatrixXcd>& gammas) {
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

CliffordElement random_element(const Algebra& alg, Rng& rng, std::size_t terms) {
  const std::uint64_t span = (std::uint64_t{1} << alg.generator_count()) - 1;
  CliffordElement x = alg.zero();
  for (std::size_t t = 0; t < terms; ++t) x += alg.blade(Blade{rng.next() & span}, Complex(rng.normal(), rng.normal()));
  return x;
}

IdentityResult check_e2(std::uint64_t seed, const Tolerances& tol, bool fault) {
  Rng rng(seed);
  double worst = 0.0;
  double anticomm = 0.0;
  const std::size_t pairs = 200;
  for (std::size_t t = 0; t < pairs; ++t) {
    const std::size_t k = 1 + rng.index(8);
    std::vector<int> signs(k);
    for (auto& s : signs) s = rng.uniform() < 0.5 ? 1 : -1;
    const Algebra alg = Algebra::make(Signature(signs));
    const auto gammas = dense_generators(signs);
    const CliffordElement x = random_element(alg, rng, 6);
    const CliffordElement y = random_element(alg, rng, 6);
    CliffordElement xy = x * y;
    if (fault && t == 0) xy += alg.scalar(kFault);
    const Eigen::MatrixXcd mx = dense(x, gammas), my = dense(y, gammas);
    const double scale = std::max(1.0, mx.cwiseAbs().maxCoeff() * my.cwiseAbs().maxCoeff());
    worst = std::max(worst, (dense(xy, gammas) - mx * my).cwiseAbs().maxCoeff() / scale);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        const Complex want = i == j ? Complex(2.0 * signs[i]) : Complex{};
        const auto ac = anticommutator(alg.generator(i), alg.generator(j));
        anticomm = std::max({anticomm, std::abs(ac.scalar_part() - want), ac.non_scalar_norm()});
      }
    }
  }
  auto r = result("e2", "blade products match a dense matrix representation; {e_i, e_j} = 2 delta_ij s_i",
                  std::max(worst, anticomm), tol["e2"]);
  r.detail = {{"pairs", pairs}, {"max_relative_product_error", worst}, {"max_generator_anticommutator_error", anticomm}};
  return r;
}

IdentityResult check_e8(std::uint64_t seed, const Tolerances& tol, bool fault) {
  Rng rng(seed);
  double worst = 0.0, non_scalar = 0.0;
  std::size_t self_nonzero = 0;
  const std::size_t count = 60;
  for (std::size_t t = 0; t < count; ++t) {
    const std::size_t n = 1 + t % 6;
    const Eigen::MatrixXcd h = random_hermitian(n, rng);
    auto f = factor_hermitian(h, tol["factor"]);
    if (fault && t == 0) f.elements[0] = Complex(1.0 + kFault) * f.elements[0];
    const auto res = factorization_residual(f.elements, h);
    worst = std::max(worst, res.max_entry_residual);
    non_scalar = std::max(non_scalar, res.max_non_scalar);
    self_nonzero += res.nonzero_self_anticommutators;
  }
  auto r = result("e8", "{v_i, v_j*} reproduces H and {v_i, v_j} = 0 exactly", std::max(worst, non_scalar),
                  tol["e8"], self_nonzero == 0);
  r.detail = {{"matrices", count},
              {"max_entry_residual", worst},
              {"max_non_scalar", non_scalar},
              {"nonzero_self_anticommutators", self_nonzero}};
  return r;
}

IdentityResult check_a2(std::uint64_t seed, const Tolerances& tol, bool fault) {
  Rng rng(seed);
  double round_trip = 0.0, det = 0.0, lorentz = 0.0, cover = 0.0;
  for (int t = 0; t < 200; ++t) {
    const FourVector v = random_four_vector(rng);
    const SpinorMatrix m = vector_to_spinor(v);
    FourVector back = spinor_to_vector(m);
    if (fault && t == 0) back[0] += kFault;
    round_trip = std::max(round_trip, max_abs_diff(back, v));
    det = std::max(det, std::abs(m.determinant().real() - v.minkowski_norm()));

    Axis n{rng.normal(), rng.normal(), rng.normal()};
    const double len = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
    for (double& c : n) c /= len;
    const auto s = SL2CElement::from_matrix(
        SL2CElement::boost(n, rng.uniform(-1, 1)).matrix() * SL2CElement::rotation(n, rng.uniform(0, 6)).matrix(), 1e-10);
    const SpinorMatrix image = sl2c_apply(s, m);
    const FourVector w = spinor_to_vector(image, 1e-9);
    lorentz = std::max(lorentz, std::abs(w.minkowski_norm() - v.minkowski_norm()));
    cover = std::max(cover, spinor_diff(image, sl2c_apply(-s, m)));
  }
  auto r = result("a2", "vector/spinor round trip, det = V.V, SL(2,C) preserves the norm with S and -S equal",
                  std::max({round_trip, det, lorentz, cover}), tol["a2"]);
  r.detail = {{"round_trip", round_trip}, {"determinant", det}, {"norm_preservation", lorentz}, {"double_cover", cover}};
  return r;
}

IdentityResult check_h3(std::uint64_t seed, const Tolerances& tol, bool fault) {
  Rng rng(seed);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    auto id = spinor_norm_identity(vector_to_spinor(random_four_vector(rng)));
    if (fault && t == 0) id.lhs(0, 0) += kFault;
    worst = std::max(worst, spinor_diff(id.lhs, Eigen::Matrix2cd::Identity() * id.rhs));
  }
  auto r = result("h3", "V_AF V^BF = delta_A^B V.V for Hermitian spinors", worst, tol["h3"]);
  r.detail = {{"samples", 1000}};
  return r;
}

IdentityResult check_a10(std::uint64_t seed, const Tolerances& tol, bool fault) {
  Rng rng(seed);
  OrthogonalityReport worst;
  for (std::size_t n = 1; n <= 6; ++n) {
    for (int t = 0; t < 3; ++t) {
      const SpaceTimeSpectrum spec = random_spectrum(n, rng);
      CliffordPosition pos = build_position(spec);
      if (fault && n == 1 && t == 0) pos.pairs[0][1] = Complex(-1.0) * pos.pairs[0][1];
      const auto rep = orthogonality_report(pos, spec);
      worst.max_value_residual = std::max(worst.max_value_residual, rep.max_value_residual);
      worst.max_non_scalar = std::max(worst.max_non_scalar, rep.max_non_scalar);
      worst.max_plain_anticommutator = std::max(worst.max_plain_anticommutator, rep.max_plain_anticommutator);
      worst.structurally_exact = worst.structurally_exact && rep.structurally_exact;
    }
  }
  const bool exact = worst.structurally_exact && worst.max_plain_anticommutator == 0.0;
  auto r = result("a10", "{c_r^A, c_s*^B} = delta_rs x_s^AB and {c_r^A, c_s^B} = 0",
                  std::max(worst.max_value_residual, worst.max_non_scalar), tol["a10"], exact);
  r.detail = {{"max_value_residual", worst.max_value_residual},
              {"max_non_scalar", worst.max_non_scalar},
              {"max_plain_anticommutator", worst.max_plain_anticommutator},
              {"structurally_exact", worst.structurally_exact}};
  return r;
}

IdentityResult check_a14(std::uint64_t seed, const Tolerances& tol, bool fault) {
  Rng rng(seed);
  std::vector<SpaceTimeSpectrum> specs;
  std::vector<CliffordKet> kets;
  for (std::size_t n = 1; n <= 4; ++n) {
    specs.push_back(random_spectrum(n, rng));
    kets.push_back(assemble_ket(build_position(specs.back())));
  }
  double worst = 0.0;
  const int states = 1000;
  for (int t = 0; t < states; ++t) {
    const std::size_t k = static_cast<std::size_t>(t) % 4;
    const HilbertState s = random_state(k + 1, rng);
    SpinorPair cbar = expectation_substructure(kets[k], s);
    if (fault && t == 0) cbar[0] = Complex(1.0 + kFault) * cbar[0];
    worst = std::max(worst, verify_expectation(cbar, specs[k], s));
  }
  auto r = result("a14", "{cbar^A, cbar*^B} gives the expected coordinates sum_r |<s|x_r>|^2 x_r", worst,
                  tol["a14"]);
  r.detail = {{"states", states}, {"max_dimension", 4}};
  return r;
}

IdentityResult check_a7(std::uint64_t seed, const Tolerances& tol, bool fault) {
  Rng rng(seed);
  double herm = 0.0, sign = 0.0, plain = 0.0;
  for (std::size_t n = 1; n <= 5; ++n) {
    const auto ket = assemble_ket(build_position(random_spectrum(n, rng)));
    auto x = reconstruct_X(ket);
    if (fault && n == 1) x.table(0, 0)(0, 1) += kFault;
    herm = std::max(herm, x.table.hermiticity_defect());
    sign = std::max(sign, reconstruct_X(negate(ket)).table.max_abs_diff(x.table));
    for (const auto& p : ket.entries)
      for (const auto& q : ket.entries)
        for (std::size_t a = 0; a < 2; ++a)
          for (std::size_t b = 0; b < 2; ++b) plain = std::max(plain, anticommutator(p[a], q[b]).max_norm());
  }
  auto r = result("a7", "reconstructed X is Hermitian, unchanged under C -> -C, and {C^A, C^B} = 0",
                  std::max({herm, sign, plain}), tol["a7"]);
  r.detail = {{"hermiticity_defect", herm}, {"sign_degeneracy", sign}, {"max_plain_anticommutator", plain}};
  return r;
}

IdentityResult check_f23(std::uint64_t, const Tolerances& tol, bool fault) {
  Eigen::Matrix2cd lam;
  lam << Complex(0.3, 0.1), Complex(-0.2, 0.5), Complex(-0.2, 0.5), Complex(1.0, -0.4);
  GaugeHistory h;
  const std::size_t steps = 1000;
  for (std::size_t k = 0; k <= steps; ++k) {
    const double tau = std::numbers::pi * static_cast<double>(k) / static_cast<double>(steps);
    h.tau.push_back(tau);
    h.lambda.push_back(lam * std::sin(tau));
  }
  if (fault) h.lambda[steps / 2] += lam;
  const auto out = solve_gauge_absorption(h);
  const double sine = spinor_diff(out.kappa.back(), -2.0 * lam);
  double symmetric = 0.0;
  for (const auto& k : out.kappa) symmetric = std::max(symmetric, std::abs(k(0, 1) - k(1, 0)));
  auto r = result("f23", "kappa' = -lambda absorbs the multipliers; kappa(pi) = -2 Lambda for lambda = Lambda sin",
                  std::max(sine, symmetric), tol["f23"]);
  r.detail = {{"steps", steps}, {"analytic_error", sine}, {"kappa_asymmetry", symmetric}};
  return r;
}

IdentityResult check_f17(std::uint64_t seed, const Tolerances& tol, bool fault) {
  Rng rng(seed);
  const Algebra alg = Algebra::make(Signature({1, 1, 1, 1}));
  const double q[] = {1.0, 1.0};
  const auto f = complex_generators(alg, q).generators;
  const SpinorPair c = {f[0], f[1]};
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const Complex mu(rng.normal(), 0.0);
    const SpinorPair d = {mu * f[0], mu * f[1]};
    worst = std::max(worst, symmetric_constraint(c, d).max_abs());
  }
  const SpinorPair violating = {f[1], alg.zero()};
  const auto flagged = symmetric_constraint(c, violating);
  if (fault) worst = std::max(worst, flagged.max_abs());
  const bool caught = !flagged.satisfied(tol["f17"]);
  auto r = result("f17", "symmetric part of {c_A, d*_B} vanishes on compliant data and flags violations", worst,
                  tol["f17"], caught);
  r.detail = {{"compliant_max", worst}, {"violation_flagged", caught}, {"violation_size", flagged.max_abs()}};
  return r;
}

ParticleState random_particle(Rng& rng, std::size_t n, double mass) {
  std::vector<FourVector> p, x;
  for (std::size_t r = 0; r < n; ++r) {
    p.push_back(random_on_shell(mass, rng));
    x.push_back(random_four_vector(rng));
  }
  return init_particle(mass, p, x);
}

std::vector<ParticleState> particle_set(Rng& rng) {
  std::vector<ParticleState> out;
  for (std::size_t n = 1; n <= 3; ++n) out.push_back(random_particle(rng, n, 0.5 + rng.uniform(0, 2)));
  return out;
}

std::vector<double> symmetric_grid() {
  std::vector<double> g;
  for (int k = -10; k <= 10; ++k) g.push_back(0.5 * k);
  return g;
}

IdentityResult check_h7(std::uint64_t seed, const Tolerances& tol, bool fault) {
  Rng rng(seed);
  double worst = 0.0;
  for (const auto& s : particle_set(rng)) {
    for (auto [tau, steps] : {std::pair{0.7, std::size_t{1}}, std::pair{10.0, std::size_t{1000}}}) {
      ParticleState num = evolve_numeric(s, tau, steps);
      if (fault) num.position_ket[0][0] += Complex(kFault) * num.position_ket[0][0];
      worst = std::max(worst, max_coefficient_diff(num, evolve_closed(s, tau)));
    }
  }
  auto r = result("h7", "fourth-order integrator matches the closed-form solution coefficientwise", worst, tol["h7"]);
  r.detail = {{"states", 3}};
  return r;
}

IdentityResult check_h10(std::uint64_t seed, const Tolerances& tol, bool fault) {
  Rng rng(seed);
  double slope = 0.0, off = 0.0, intercept = 0.0;
  const auto grid = symmetric_grid();
  for (const auto& s : particle_set(rng)) {
    const auto trace = mu_trace(s, grid);
    const double expected = (fault ? 1.0 + kFault : 1.0) * s.mass / 2.0;
    slope = std::max(slope, std::abs(trace.slope - expected));
    intercept = std::max(intercept, std::abs(trace.intercept));
    off = std::max(off, trace.max_off_delta);
  }
  auto r = result("h10", "{C^A, D_B} = mu delta^A_B with mu = m tau / 2",
                  std::max({slope, intercept, off}), tol["h10"]);
  r.detail = {{"slope_error", slope}, {"intercept", intercept}, {"max_off_delta", off}};
  return r;
}

IdentityResult check_h11(std::uint64_t seed, const Tolerances& tol, bool fault) {
  Rng rng(seed);
  double worst = 0.0, evenness = 0.0;
  std::vector<double> grid;
  for (int k = 0; k <= 40; ++k) grid.push_back(0.25 * k);
  for (const auto& s : particle_set(rng)) {
    const auto trace = mu_trace(s, grid);
    // dtau_bar = mu dtau; trapezoid is exact because mu is linear.
    double integral = 0.0;
    for (std::size_t k = 1; k < trace.samples.size(); ++k) {
      const auto& a = trace.samples[k - 1];
      const auto& b = trace.samples[k];
      integral += 0.5 * (a.mu + b.mu) * (b.tau - a.tau);
      const double want = reparametrize(s.mass, b.tau) * (fault ? 1.0 + kFault : 1.0);
      worst = std::max(worst, std::abs(integral - want));
      evenness = std::max(evenness, std::abs(reparametrize(s.mass, -b.tau) - reparametrize(s.mass, b.tau)));
    }
  }
  auto r = result("h11", "tau_bar = integral of mu dtau = m tau^2 / 4, even in tau", std::max(worst, evenness),
                  tol["h11"]);
  r.detail = {{"integral_error", worst}, {"evenness", evenness}};
  return r;
}

IdentityResult check_h12(std::uint64_t seed, const Tolerances& tol, bool fault) {
  Rng rng(seed);
  double linear = 0.0, constant = 0.0, non_scalar = 0.0;
  for (const auto& s : particle_set(rng)) {
    const auto obs0 = spacetime_observables(s);
    for (double tau : {-4.0, -1.0, 1.0, 5.0, 10.0}) {
      const auto obs = spacetime_observables(evolve_closed(s, tau));
      const double tau_bar = reparametrize(s.mass, tau) * (fault ? 1.0 + kFault : 1.0);
      constant = std::max(constant, obs.P.max_abs_diff(obs0.P));
      non_scalar = std::max(non_scalar, obs.non_scalar_residual);
      for (std::size_t a = 0; a < s.dimension(); ++a) {
        for (std::size_t b = 0; b < s.dimension(); ++b) {
          const Eigen::Matrix2cd want = obs0.X(a, b) + obs0.P(a, b) * (tau_bar / s.mass);
          linear = std::max(linear, spinor_diff(obs.X(a, b), want));
        }
      }
    }
  }
  auto r = result("h12", "P constant and X(tau_bar) = X(0) + P tau_bar / m", std::max({linear, constant, non_scalar}),
                  tol["h12"]);
  r.detail = {{"linear_residual", linear}, {"momentum_drift", constant}, {"non_scalar", non_scalar}};
  return r;
}

ParticleState overlapping(ParticleState s) {
  for (std::size_t r = 0; r < s.dimension(); ++r)
    for (std::size_t A = 0; A < 2; ++A) s.position_ket[r][A] += Complex(0.3) * involution(s.momentum_bra[r][A]);
  return s;
}

IdentityResult check_g4(std::uint64_t seed, const Tolerances& tol, bool fault) {
  Rng rng(seed);
  const std::vector<double> grid = {0.5, 1.0, 2.0, 3.0, 7.5};
  double worst = 0.0, flip = 0.0, separation = std::numeric_limits<double>::infinity(), control = 0.0;
  for (const auto& s : particle_set(rng)) {
    const auto rep = evenness_check(fault ? overlapping(s) : s, grid);
    worst = std::max(worst, rep.max_residual);
    flip = std::max(flip, rep.sign_flip_residual);
    separation = std::min(separation, rep.min_ket_separation);
    control = std::max(control, evenness_check(overlapping(s), grid).max_residual);
  }
  const bool covered_twice = separation > 0.0;
  const bool control_caught = control > tol["g4"];
  auto r = result("g4", "X(tau) = X(-tau) while C(tau) != C(-tau); -C(-tau) solves the sign-flipped problem",
                  std::max(worst, flip), tol["g4"], covered_twice && control_caught);
  r.detail = {{"max_residual", worst},
              {"sign_flip_residual", flip},
              {"min_ket_separation", separation},
              {"negative_control_residual", control}};
  return r;
}

IdentityResult check_h5(std::uint64_t seed, const Tolerances& tol, bool fault) {
  Rng rng(seed);
  double shell = 0.0, ham = 0.0, control = 0.0;
  for (auto s : particle_set(rng)) {
    ParticleState perturbed = s;
    for (auto& d : perturbed.momentum_bra) d = {Complex(1.1) * d[0], Complex(1.1) * d[1]};
    control = std::max(control, shell_residual(perturbed));
    if (fault) s = perturbed;
    for (double tau : {0.0, 3.0, -8.0}) {
      const auto e = evolve_closed(s, tau);
      shell = std::max(shell, shell_residual(e));
      ham = std::max(ham, hamiltonian_residual(e));
    }
  }
  auto r = result("h5", "mass shell p.p = m^2 and H = 0 along the evolution", std::max(shell, ham), tol["h5"],
                  control > tol["h5"]);
  r.detail = {{"shell_residual", shell}, {"hamiltonian_residual", ham}, {"negative_control_residual", control}};
  return r;
}

IdentityResult check_b16(std::uint64_t seed, const Tolerances& tol, bool fault) {
  Rng rng(seed);
  double worst = 0.0;
  for (int t = 0; t < 40; ++t) {
    const Eigen::MatrixXcd u = random_unitary(5, rng);
    for (Eigen::Index i = 0; i < 5; ++i) {
      for (Eigen::Index j = 0; j < 5; ++j) {
        const auto pa = degenerate_pair_amplitude(u(i, j));
        const double p = std::norm(u(i, j)) + (fault && t == 0 ? kFault : 0.0);
        worst = std::max({worst, std::abs(pa.amplitude - p), std::abs(pa.probability - p)});
      }
    }
  }
  auto r = result("b16", "<c_Q-|c_P-><c_P+|c_Q+> = |<x_P|x_Q>|^2", worst, tol["b16"]);
  r.detail = {{"overlaps", 1000}};
  return r;
}

IdentityResult check_c2(std::uint64_t seed, const Tolerances& tol, bool fault) {
  Rng rng(seed);
  double born = 0.0, accounting = 0.0, which = 0.0, range = 0.0;
  for (std::size_t n = 1; n <= 6; ++n) {
    for (int t = 0; t < 10; ++t) {
      SlitSetup setup;
      const Eigen::MatrixXcd u1 = random_unitary(n, rng);
      const Eigen::MatrixXcd u2 = random_unitary(n, rng);
      setup.source_to_slits = EvolutionKernel::from_matrix(u1);
      setup.slits_to_detector = EvolutionKernel::from_matrix(u2);
      setup.source = rng.index(n);
      setup.detector = rng.index(n);
      for (std::size_t k = 0; k < n; ++k) setup.slits.push_back(k);
      const SlitResult open = multi_slit(setup);

      Complex total{};
      std::vector<Complex> a;
      for (std::size_t k = 0; k < n; ++k) {
        a.push_back(u1(static_cast<Eigen::Index>(setup.source), static_cast<Eigen::Index>(k)) *
                    u2(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(setup.detector)));
        total += a.back();
      }
      const double p = open.probability + (fault && n == 2 && t == 0 ? kFault : 0.0);
      born = std::max(born, std::abs(p - std::norm(total)));
      Complex pairs{};
      for (const auto& term : open.pair_decomposition) pairs += term.amplitude;
      accounting = std::max(accounting, std::abs(open.diagonal_sum + pairs.real() - open.probability));
      range = std::max(range, std::max(0.0, -open.probability) + std::max(0.0, open.probability - 1.0));

      // Watching slit k removes exactly the pairs that involve k once.
      const std::size_t k = rng.index(n);
      setup.which_slit = WhichSlit{k, DetectionMode::non_selective};
      const SlitResult watched = multi_slit(setup);
      double removed = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (i != k) removed += 2.0 * (std::conj(a[i]) * a[k]).real();
      }
      which = std::max(which, std::abs(watched.probability - (std::norm(total) - removed)));
      if (n == 2) {
        which = std::max(which, std::abs(watched.probability - (std::norm(a[0]) + std::norm(a[1]))));
      }
    }
  }
  auto r = result("c2", "slit probability is the Born sum; diagonal plus pair terms add up; which-slit removes pairs",
                  std::max({born, accounting, which, range}), tol["c2"]);
  r.detail = {{"born_error", born}, {"accounting_error", accounting}, {"which_slit_error", which}, {"range_excess", range}};
  return r;
}

IdentityResult check_epr(std::uint64_t seed, const Tolerances& tol, bool fault) {
  Rng rng(seed);
  double worst = 0.0;
  bool mirrored = true;
  const double base = rng.uniform(0, std::numbers::pi);
  auto axis = [](double t) { return Axis{std::sin(t), 0.0, std::cos(t)}; };
  for (int k = 0; k <= 18; ++k) {
    const double theta = std::numbers::pi * k / 18.0;
    const auto out = epr_run(axis(base), axis(base + theta), {}, rng);
    const double c = out.correlation + (fault && k == 3 ? kFault : 0.0);
    worst = std::max(worst, std::abs(c + std::cos(theta)));
    mirrored = mirrored && out.narrative.mirror_symmetric();
  }
  auto r = result("epr", "singlet correlation equals -cos theta; every narrative is mirror symmetric", worst,
                  tol["epr"], mirrored);
  r.detail = {{"angles", 19}, {"mirror_symmetric", mirrored}};
  return r;
}

FourPotential smooth_field(double s) {
  return [s](const FourVector& x) {
    return FourVector{{std::sin(s * x[0]) + 0.1 * x[1], 0.3 * std::cos(x[0] + s * x[3]), 0.2 * x[2] * x[0],
                       0.5 * std::exp(-0.1 * x[0])}};
  };
}

IdentityResult check_d1(std::uint64_t, const Tolerances& tol, bool fault) {
  const auto path = free_particle_trajectory({{0.2, 0.1, 0, 0}}, {{std::sqrt(1.25), 0.5, 0, 0}});
  const FourPotential zero = [](const FourVector&) { return FourVector{}; };
  ActionCheck free = wf_action_check(path, zero, zero, {});
  if (fault) free.diff += kFault;

  std::vector<double> diffs;
  const std::vector<std::size_t> steps = {100, 200, 400, 800};
  for (std::size_t s : steps) diffs.push_back(wf_action_check(path, smooth_field(0.7), smooth_field(-0.4), {.steps = s}).diff);
  Json orders = Json::array();
  bool second = true;
  for (std::size_t k = 1; k < diffs.size(); ++k) {
    const double order = std::log2(diffs[k - 1] / diffs[k]);
    orders.push_back(order);
    second = second && std::abs(order - 2.0) <= 0.1;
  }
  auto r = result("d1", "half-advanced plus half-retarded action identity; zero field exact, O(h^2) otherwise",
                  free.diff, tol["d1"], second);
  r.detail = {{"zero_field_diff", free.diff}, {"convergence_orders", orders}, {"steps", steps}, {"diffs", diffs}};
  return r;
}

}  // namespace

const std::vector<VerifySuite>& verify_suites() {
  static const std::vector<VerifySuite> suites = {
      {"e2", check_e2},   {"e8", check_e8},   {"a2", check_a2},   {"h3", check_h3},   {"a10", check_a10},
      {"a14", check_a14}, {"a7", check_a7},   {"f23", check_f23}, {"f17", check_f17}, {"h7", check_h7},
      {"h10", check_h10}, {"h11", check_h11}, {"h12", check_h12}, {"g4", check_g4},   {"h5", check_h5},
      {"b16", check_b16}, {"c2", check_c2},   {"epr", check_epr}, {"d1", check_d1},
  };
  return suites;
}

CommandOutput run_verify(const RunConfig& config) {
  const auto& suites = verify_suites();
  if (config.fault) {
    const bool known = std::any_of(suites.begin(), suites.end(), [&](const VerifySuite& s) { return s.tag == *config.fault; });
    if (!known) throw ConfigError("unknown fault tag '" + *config.fault + "'");
  }

  std::vector<IdentityResult> results(suites.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < suites.size(); i = next++) {
      const auto& suite = suites[i];
      const bool fault = config.fault && *config.fault == suite.tag;
      try {
        results[i] = suite.run(derive_seed(config.seed, i), config.tol, fault);
      } catch (const std::exception& e) {
        results[i] = result(suite.tag, "suite raised an error", std::numeric_limits<double>::infinity(), 0.0, false);
        results[i].detail = {{"error", e.what()}};
      }
    }
  };

  unsigned threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(suites.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  CommandOutput out;
  Json identities = Json::object();
  Json failed = Json::array();
  for (const auto& r : results) {
    identities[r.tag] = {{"description", r.description},
                         {"residual", r.residual},
                         {"tolerance", r.tolerance},
                         {"pass", r.pass},
                         {"detail", r.detail}};
    if (!r.pass) failed.push_back(r.tag);
    out.pass = out.pass && r.pass;
  }
  out.report = {{"command", "verify"},
                {"seed", config.seed},
                {"identities", identities},
                {"order", [&] {
                   Json o = Json::array();
                   for (const auto& s : suites) o.push_back(s.tag);
                   return o;
                 }()},
                {"failed", failed},
                {"pass", out.pass}};
  if (config.fault) out.report["injected_fault"] = *config.fault;
  return out;
}

}  // namespace cliffsub::app
