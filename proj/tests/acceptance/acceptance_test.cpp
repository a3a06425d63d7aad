// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
//
// Usage: cliffsub_acceptance [path/to/cliffsub]
// With the binary path, criterion 9 also runs the CLI as a subprocess.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sys/wait.h>
#include <sstream>
#include <string>
#include <vector>

#include "cliffsub/app/commands.hpp"
#include "cliffsub/dynamics.hpp"
#include "cliffsub/factor.hpp"
#include "cliffsub/paths.hpp"
#include "oracles.hpp"

using namespace cliffsub;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream note;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      note << " [failed: " << what << "]";
    }
  }
};

template <typename... T>
std::string fmt(const char* f, T... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

FourVector random_vector(Rng& rng, double scale = 1.0) {
  return {{scale * rng.normal(), scale * rng.normal(), scale * rng.normal(), scale * rng.normal()}};
}

FourVector on_shell(double m, Rng& rng) {
  const double x = rng.normal(), y = rng.normal(), z = rng.normal();
  return {{std::sqrt(m * m + x * x + y * y + z * z), x, y, z}};
}

HilbertState random_state(std::size_t n, Rng& rng) {
  HilbertState s;
  double norm = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    s.amplitudes.emplace_back(rng.normal(), rng.normal());
    norm += std::norm(s.amplitudes.back());
  }
  for (auto& a : s.amplitudes) a /= std::sqrt(norm);
  return s;
}

SpaceTimeSpectrum random_spectrum(std::size_t n, Rng& rng) {
  SpaceTimeSpectrum s;
  for (std::size_t r = 0; r < n; ++r) {
    s.points.push_back(random_vector(rng, 2.0));
    s.labels.push_back("x" + std::to_string(r));
  }
  return s;
}

// 1. Factorization suite.
void criterion1(Outcome& o) {
  Rng rng(101);
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  bool exact = true;
  for (std::size_t t = 0; t < 200; ++t) {
    const std::size_t n = 1 + t % 6;
    const Eigen::MatrixXcd h = oracle::random_hermitian(n, rng);
    const auto f = factor_hermitian(h);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const auto ac = anticommutator(f.elements[i], involution(f.elements[j]));
        worst = std::max(worst, std::abs(ac.scalar_part() - h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))));
        worst = std::max(worst, ac.non_scalar_norm());
        exact = exact && anticommutator(f.elements[i], f.elements[j]).is_zero();
      }
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.note << fmt("200 matrices, max residual %.3e, plain anticommutators exact, %.2f s", worst, seconds);
  o.require(worst <= 1e-9, "residual <= 1e-9");
  o.require(exact, "{v_i, v_j} = 0 exactly");
  o.require(seconds <= 30.0, "runtime <= 30 s");
}

// 2. Matrix-oracle equivalence.
void criterion2(Outcome& o) {
  Rng rng(202);
  double worst = 0.0;
  for (int t = 0; t < 500; ++t) {
    const std::size_t k = 1 + rng.index(8);
    std::vector<int> signs(k);
    for (auto& s : signs) s = rng.uniform() < 0.5 ? 1 : -1;
    const Algebra alg = Algebra::make(Signature(signs));
    const auto gammas = oracle::gamma_matrices(signs);
    const auto x = oracle::random_element(alg, rng, 6);
    const auto y = oracle::random_element(alg, rng, 6);
    worst = std::max(worst, (oracle::to_matrix(x * y, gammas) - oracle::to_matrix(x, gammas) * oracle::to_matrix(y, gammas))
                                .cwiseAbs()
                                .maxCoeff());
  }
  o.note << fmt("500 pairs, K <= 8, max deviation %.3e", worst);
  o.require(worst <= 1e-12, "deviation <= 1e-12");
}

// 3. Substructure identities.
void criterion3(Outcome& o) {
  Rng rng(303);
  double a10 = 0.0;
  bool structural = true;
  for (std::size_t n = 1; n <= 6; ++n) {
    for (int t = 0; t < 5; ++t) {
      const auto spec = random_spectrum(n, rng);
      const auto rep = orthogonality_report(build_position(spec), spec);
      a10 = std::max({a10, rep.max_value_residual, rep.max_non_scalar});
      structural = structural && rep.structurally_exact && rep.max_plain_anticommutator == 0.0;
    }
  }
  double expectation = 0.0;
  std::vector<SpaceTimeSpectrum> specs;
  std::vector<CliffordKet> kets;
  for (std::size_t n = 1; n <= 4; ++n) {
    specs.push_back(random_spectrum(n, rng));
    kets.push_back(assemble_ket(build_position(specs.back())));
  }
  for (int t = 0; t < 1000; ++t) {
    const std::size_t k = static_cast<std::size_t>(t) % 4;
    const auto s = random_state(k + 1, rng);
    expectation = std::max(expectation, verify_expectation(expectation_substructure(kets[k], s), specs[k], s));
  }
  o.note << fmt("a10 residual %.3e, structurally exact; expectation residual %.3e over 1000 states", a10, expectation);
  o.require(structural, "delta_rs structure exact");
  o.require(a10 <= 1e-10, "a10 <= 1e-10");
  o.require(expectation <= 1e-9, "expectation <= 1e-9");
}

// 4. Particle dynamics.
void criterion4(Outcome& o) {
  Rng rng(404);
  double slope = 0.0, off = 0.0, tau_bar = 0.0, linear = 0.0, even = 0.0, p_drift = 0.0, shell = 0.0, integ = 0.0;
  std::vector<double> grid;
  for (int k = -12; k <= 12; ++k) grid.push_back(0.5 * k);
  for (std::size_t n = 1; n <= 3; ++n) {
    const double m = 0.5 + rng.uniform(0, 2);
    std::vector<FourVector> p, x;
    for (std::size_t r = 0; r < n; ++r) {
      p.push_back(on_shell(m, rng));
      x.push_back(random_vector(rng));
    }
    const auto s0 = init_particle(m, p, x);
    const auto trace = mu_trace(s0, grid);
    slope = std::max(slope, std::abs(trace.slope - m / 2));
    off = std::max(off, trace.max_off_delta);
    const auto obs0 = spacetime_observables(s0);
    const double shell0 = shell_residual(s0);
    for (double tau : grid) {
      tau_bar = std::max(tau_bar, std::abs(reparametrize(m, tau) - m * tau * tau / 4.0));
      const auto s = evolve_closed(s0, tau);
      const auto obs = spacetime_observables(s);
      for (std::size_t r = 0; r < n; ++r) {
        const Eigen::Matrix2cd want = obs0.X(r, r) + obs0.P(r, r) * (reparametrize(m, tau) / m);
        linear = std::max(linear, (obs.X(r, r) - want).cwiseAbs().maxCoeff());
      }
      p_drift = std::max(p_drift, obs.P.max_abs_diff(obs0.P));
      shell = std::max(shell, std::abs(shell_residual(s) - shell0));
    }
    even = std::max(even, evenness_check(s0, grid).max_residual);
    integ = std::max(integ, max_coefficient_diff(evolve_numeric(s0, 10.0, 1000), evolve_closed(s0, 10.0)));
    integ = std::max(integ, max_coefficient_diff(evolve_numeric(s0, -3.0, 1), evolve_closed(s0, -3.0)));
  }
  o.note << fmt("slope err %.2e, off-delta %.2e, tau_bar err %.1e, X(tau_bar) %.2e, even %.2e, P drift %.2e, "
                "shell drift %.2e, RK4 %.2e",
                slope, off, tau_bar, linear, even, p_drift, shell, integ);
  o.require(slope <= 1e-9 && off <= 1e-9, "mu slope m/2 within 1e-9");
  o.require(tau_bar == 0.0, "tau_bar exact");
  o.require(linear <= 1e-9, "X linear in tau_bar within 1e-9");
  o.require(even <= 1e-9, "X(tau) = X(-tau) within 1e-9");
  o.require(p_drift <= 1e-12 && shell <= 1e-12, "P and shell constant");
  o.require(integ <= 1e-12, "numeric vs closed <= 1e-12");
}

// 5. Measurement identities.
void criterion5(Outcome& o) {
  Rng rng(505);
  double b16 = 0.0;
  for (int t = 0; t < 40; ++t) {
    const Eigen::MatrixXcd u = oracle::random_unitary(5, rng);
    for (Eigen::Index i = 0; i < 5; ++i)
      for (Eigen::Index j = 0; j < 5; ++j)
        b16 = std::max(b16, std::abs(degenerate_pair_amplitude(u(i, j)).amplitude - std::norm(u(i, j))));
  }
  double born = 0.0, split = 0.0, which = 0.0, pairs = 0.0;
  for (std::size_t n = 1; n <= 6; ++n) {
    for (int t = 0; t < 20; ++t) {
      const Eigen::MatrixXcd u1 = oracle::random_unitary(n, rng), u2 = oracle::random_unitary(n, rng);
      SlitSetup setup;
      setup.source_to_slits = EvolutionKernel::from_matrix(u1);
      setup.slits_to_detector = EvolutionKernel::from_matrix(u2);
      setup.source = rng.index(n);
      setup.detector = rng.index(n);
      for (std::size_t k = 0; k < n; ++k) setup.slits.push_back(k);
      Complex total{};
      double diag = 0.0, cross = 0.0;
      std::vector<Complex> a;
      for (std::size_t k = 0; k < n; ++k) {
        a.push_back(u1(static_cast<Eigen::Index>(setup.source), static_cast<Eigen::Index>(k)) *
                    u2(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(setup.detector)));
        total += a.back();
        diag += std::norm(a.back());
      }
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (i != j) cross += (std::conj(a[i]) * a[j]).real();
      const auto r = multi_slit(setup);
      born = std::max(born, std::abs(r.probability - std::norm(total)));
      split = std::max(split, std::abs(r.probability - (diag + cross)));
      Complex decomposed{};
      for (const auto& term : r.pair_decomposition) decomposed += term.amplitude;
      pairs = std::max(pairs, std::abs(r.term_table.diagonal().sum().real() + decomposed.real() - r.probability));

      // Watching every slit but keeping the record unselected leaves the diagonal.
      if (n == 2) {
        setup.which_slit = WhichSlit{0, DetectionMode::non_selective};
        which = std::max(which, std::abs(multi_slit(setup).probability - diag));
      }
    }
  }
  o.note << fmt("b16 %.2e over 1000 overlaps; Born %.2e; diag+cross %.2e; which-slit %.2e; pair sum %.2e", b16, born, split,
                which, pairs);
  o.require(b16 <= 1e-12, "b16 <= 1e-12");
  o.require(born <= 1e-12, "Born oracle <= 1e-12");
  o.require(split <= 1e-12, "diagonal + cross terms");
  o.require(which <= 1e-12, "which-slit leaves the diagonal");
  o.require(pairs <= 1e-12, "pair decomposition sums to total for n <= 6");
}

// 6. EPR.
void criterion6(Outcome& o) {
  Rng rng(606);
  double worst = 0.0;
  bool mirrored = true;
  auto axis = [](double t) { return Axis{std::sin(t), 0.0, std::cos(t)}; };
  for (int k = 0; k <= 18; ++k) {
    const double theta = std::numbers::pi * k / 18.0;
    const auto r = epr_run(axis(0.4), axis(0.4 + theta), {}, rng);
    worst = std::max(worst, std::abs(r.correlation + std::cos(theta)));
    mirrored = mirrored && r.narrative.mirror_symmetric();
  }
  for (int t = 0; t < 100; ++t) {
    std::vector<MeasurementEvent> events;
    const std::size_t count = 1 + rng.index(5);
    for (std::size_t e = 0; e < count; ++e) {
      events.push_back({"E" + std::to_string(e), e, 0.5 + static_cast<double>(e) + rng.uniform(0, 0.5), EventKind::spin,
                        rng.uniform() < 0.5 ? "+1/2" : "-1/2"});
    }
    mirrored = mirrored && build_event_sequence(events).mirror_symmetric();
  }
  o.note << fmt("19 angles, max |C + cos| %.2e; mirror symmetry on %d sequences", worst, 119);
  o.require(worst <= 1e-12, "correlation within 1e-12");
  o.require(mirrored, "mirror symmetry");
}

// 7. Action identity quadrature.
void criterion7(Outcome& o) {
  const auto path = free_particle_trajectory({{0.2, 0.1, 0, 0}}, {{std::sqrt(1.25), 0.5, 0, 0}});
  const FourPotential zero = [](const FourVector&) { return FourVector{}; };
  const FourPotential adv = [](const FourVector& x) {
    return FourVector{{std::sin(0.7 * x[0]) + 0.1 * x[1], 0.3 * std::cos(x[0]), 0.2 * x[2] * x[0], 0.5 * std::exp(-0.1 * x[0])}};
  };
  const FourPotential ret = [](const FourVector& x) {
    return FourVector{{0.4 * std::cos(0.3 * x[0]), -0.2 * x[1], std::sin(x[0] - x[1]), 0.1}};
  };
  const double free = wf_action_check(path, zero, zero, {}).diff;
  std::vector<double> diffs;
  for (std::size_t s : {100u, 200u, 400u, 800u, 1600u}) diffs.push_back(wf_action_check(path, adv, ret, {.steps = s}).diff);
  double min_order = 10, max_order = 0;
  for (std::size_t k = 1; k < diffs.size(); ++k) {
    const double order = std::log2(diffs[k - 1] / diffs[k]);
    min_order = std::min(min_order, order);
    max_order = std::max(max_order, order);
  }
  o.note << fmt("zero field diff %.2e; observed orders in [%.4f, %.4f]", free, min_order, max_order);
  o.require(free <= 1e-10, "zero field <= 1e-10");
  o.require(min_order >= 1.9 && max_order <= 2.1, "second-order convergence");
}

// 8. Gauge absorption and the symmetric constraint.
void criterion8(Outcome& o) {
  Eigen::Matrix2cd lam;
  lam << Complex(0.3, 0.1), Complex(-0.2, 0.5), Complex(-0.2, 0.5), Complex(1.0, -0.4);
  GaugeHistory h;
  for (std::size_t k = 0; k <= 1000; ++k) {
    const double tau = std::numbers::pi * static_cast<double>(k) / 1000.0;
    h.tau.push_back(tau);
    h.lambda.push_back(lam * std::sin(tau));
  }
  const double gauge = (solve_gauge_absorption(h).kappa.back() + 2.0 * lam).cwiseAbs().maxCoeff();

  const Algebra alg = Algebra::make(Signature({1, 1, 1, 1}));
  const double q[] = {1.0, 1.0};
  const auto f = complex_generators(alg, q).generators;
  const SpinorPair c = {f[0], f[1]};
  const auto compliant = symmetric_constraint(c, {Complex(0.8) * f[0], Complex(0.8) * f[1]});
  const auto violating = symmetric_constraint(c, {f[1], alg.zero()});
  o.note << fmt("kappa(pi) error %.2e at 1000 steps; compliant %.1e; violation %.2e", gauge, compliant.max_abs(),
                violating.max_abs());
  o.require(gauge <= 1e-5, "gauge within 1e-5");
  o.require(compliant.max_abs() == 0.0 && compliant.non_scalar_residual == 0.0, "compliant data gives 0");
  o.require(!violating.satisfied(1e-6), "violation flagged");
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

// 9. CLI determinism and fault injection.
void criterion9(Outcome& o, const char* binary) {
  app::RunConfig cfg;
  cfg.threads = 4;
  const std::string first = app::dump_json(app::run_verify(cfg).report);
  cfg.threads = 1;
  const std::string second = app::dump_json(app::run_verify(cfg).report);
  o.require(first == second, "in-process verify byte-identical across thread counts");

  app::RunConfig faulty;
  faulty.fault = "a10";
  const auto bad = app::run_verify(faulty);
  const bool tagged = !bad.pass && bad.report["failed"] == app::Json::array({"a10"});
  o.require(tagged, "injected a10 fault fails only a10");
  o.note << "in-process verify identical (" << first.size() << " bytes), fault tag a10 reported";

  if (binary != nullptr) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::current_path() / "acceptance_runs";
    fs::create_directories(dir);
    const std::string bin = binary;
    auto run = [&](const std::string& args, const fs::path& out) {
      const std::string cmd = "\"" + bin + "\" " + args + " --out \"" + out.string() + "\" 2>/dev/null";
      const int status = std::system(cmd.c_str());
      return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    };
    const int rc1 = run("verify", dir / "verify_1.json");
    const int rc2 = run("verify", dir / "verify_2.json");
    const int rc3 = run("verify --inject-fault a10", dir / "verify_fault.json");
    const std::string j1 = slurp((dir / "verify_1.json").string());
    const std::string j2 = slurp((dir / "verify_2.json").string());
    const auto fault_report = app::Json::parse(slurp((dir / "verify_fault.json").string()), nullptr, false);
    const bool fault_ok = rc3 == 1 && !fault_report.is_discarded() && fault_report["failed"] == app::Json::array({"a10"});
    o.require(rc1 == 0 && rc2 == 0, "CLI verify exits 0");
    o.require(!j1.empty() && j1 == j2, "CLI verify byte-identical");
    o.require(j1 == first, "CLI output matches library output");
    o.require(fault_ok, "CLI fault run exits 1 naming a10");
    o.note << "; CLI runs exit " << rc1 << "/" << rc2 << "/" << rc3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  const char* binary = argc > 1 ? argv[1] : nullptr;
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"factorization suite", criterion1},
      {"matrix-oracle equivalence", criterion2},
      {"substructure identities", criterion3},
      {"particle dynamics", criterion4},
      {"measurement identities", criterion5},
      {"EPR correlations", criterion6},
      {"action identity quadrature", criterion7},
      {"gauge absorption and constraint", criterion8},
      {"CLI determinism", [binary](Outcome& o) { criterion9(o, binary); }},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.note << " [exception: " << e.what() << "]";
    }
    all = all && o.pass;
    std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.note.str().c_str());
  }
  return all ? 0 : 1;
}
