#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cliffsub/dynamics.hpp"
#include "cliffsub/error.hpp"
#include "cliffsub/paths.hpp"
#include "oracles.hpp"

using namespace cliffsub;

namespace {

SlitSetup dft_setup(std::size_t n, std::size_t detector, std::vector<std::size_t> slits) {
  SlitSetup s;
  s.source_to_slits = EvolutionKernel::dft(n);
  s.slits_to_detector = EvolutionKernel::dft(n);
  s.source = 0;
  s.detector = detector;
  s.slits = std::move(slits);
  return s;
}

Axis axis_at(double theta) { return {std::sin(theta), 0.0, std::cos(theta)}; }

// Textbook singlet correlation from explicit Kronecker products.
double oracle_correlation(const Axis& a, const Axis& b) {
  Eigen::Matrix2cd sa = a[0] * pauli(1) + a[1] * pauli(2) + a[2] * pauli(3);
  Eigen::Matrix2cd sb = b[0] * pauli(1) + b[1] * pauli(2) + b[2] * pauli(3);
  Eigen::Matrix4cd k;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) k.block<2, 2>(2 * i, 2 * j) = sa(i, j) * sb;
  Eigen::Vector4cd psi(0, 1, -1, 0);
  psi /= std::sqrt(2.0);
  return (psi.adjoint() * k * psi)(0, 0).real();
}

}  // namespace

TEST(DegeneratePair, Examples) {
  EXPECT_EQ(degenerate_pair_amplitude(1.0).amplitude, Complex(1.0));
  const auto r = degenerate_pair_amplitude(Complex(0.6, 0.8));
  EXPECT_NEAR(r.amplitude.real(), 1.0, 1e-15);
  EXPECT_EQ(r.amplitude.imag(), 0.0);
  EXPECT_NEAR(r.probability, 1.0, 1e-15);
  EXPECT_EQ(degenerate_pair_amplitude(0.0).amplitude, Complex(0.0));
  EXPECT_THROW(degenerate_pair_amplitude(1.1), ValidationError);
}

TEST(DegeneratePair, MatchesBornProbability) {
  Rng rng(1);
  const Eigen::MatrixXcd u = oracle::random_unitary(5, rng);
  for (Eigen::Index i = 0; i < 5; ++i)
    for (Eigen::Index j = 0; j < 5; ++j) {
      const auto r = degenerate_pair_amplitude(u(i, j));
      EXPECT_NEAR(r.amplitude.real(), std::norm(u(i, j)), 1e-15);
      EXPECT_NEAR(r.probability, std::norm(u(i, j)), 1e-15);
    }
}

TEST(EventSequence, TwoEventOrdering) {
  const auto seq = build_event_sequence({{"P", 0, 1.0, EventKind::position, ""}, {"Q", 1, 2.0, EventKind::position, ""}});
  EXPECT_EQ(seq.ordering(), (std::vector<std::string>{"Q-", "P-", "P+", "Q+"}));
  EXPECT_TRUE(seq.mirror_symmetric());
  for (std::size_t k = 1; k < seq.entries.size(); ++k) EXPECT_LT(seq.entries[k - 1].tau, seq.entries[k].tau);
}

TEST(EventSequence, SingleEventSelfConsistency) {
  const auto seq = build_event_sequence({{"Q", 2, 1.5, EventKind::position, ""}});
  EXPECT_EQ(seq.ordering(), (std::vector<std::string>{"Q-", "Q+"}));
  Rng rng(2);
  const Eigen::MatrixXcd overlap = oracle::random_unitary(3, rng).adjoint() * oracle::random_unitary(3, rng);
  Eigen::MatrixXcd gram = Eigen::MatrixXcd::Identity(3, 3);
  gram(0, 1) = overlap(0, 1);
  EXPECT_EQ(sequence_amplitude(seq, gram), Complex(1.0));
}

TEST(EventSequence, Rejections) {
  EXPECT_THROW(build_event_sequence({{"P", 0, 1.0}, {"Q", 1, 1.0}}), ValidationError);
  EXPECT_THROW(build_event_sequence({{"P", 0, 0.0}}), ValidationError);
}

TEST(EventSequence, MirrorDetectsMismatch) {
  auto seq = build_event_sequence({{"P", 0, 1.0, EventKind::spin, "+1/2"}});
  EXPECT_TRUE(seq.mirror_symmetric());
  seq.entries.back().outcome = "-1/2";
  EXPECT_FALSE(seq.mirror_symmetric());
}

TEST(Slits, DoubleSlitPathOrderings) {
  const auto paths = slit_paths(dft_setup(2, 0, {0, 1}));
  ASSERT_EQ(paths.size(), 4u);
  std::vector<std::vector<std::string>> orders;
  for (const auto& p : paths) orders.push_back(EventSequence{p.entries}.ordering());
  EXPECT_EQ(orders[0], (std::vector<std::string>{"Q-", "S1-", "P-", "P+", "S1+", "Q+"}));
  EXPECT_EQ(orders[1], (std::vector<std::string>{"Q-", "S1-", "P-", "P+", "S2+", "Q+"}));
  EXPECT_EQ(orders[2], (std::vector<std::string>{"Q-", "S2-", "P-", "P+", "S1+", "Q+"}));
  EXPECT_EQ(orders[3], (std::vector<std::string>{"Q-", "S2-", "P-", "P+", "S2+", "Q+"}));
}

TEST(Slits, ConstructiveDoubleSlit) {
  auto setup = dft_setup(2, 0, {0, 1});
  const auto open = slit_experiment(setup);
  EXPECT_NEAR(std::abs(open.slit_amplitudes[0] - 0.5), 0, 1e-15);
  EXPECT_NEAR(std::abs(open.slit_amplitudes[1] - 0.5), 0, 1e-15);
  EXPECT_NEAR(open.probability, 1.0, 1e-15);
  setup.which_slit = WhichSlit{0, DetectionMode::non_selective};
  const auto watched = slit_experiment(setup);
  EXPECT_NEAR(watched.probability, 0.5, 1e-15);
  EXPECT_NEAR(watched.open_probability, 1.0, 1e-15);
  EXPECT_TRUE(watched.pair_decomposition.empty());
  setup.which_slit = WhichSlit{0, DetectionMode::post_selected};
  EXPECT_NEAR(slit_experiment(setup).probability, 0.25, 1e-15);
}

TEST(Slits, DestructiveDoubleSlit) {
  auto setup = dft_setup(2, 1, {0, 1});
  const auto open = slit_experiment(setup);
  EXPECT_NEAR(std::abs(open.slit_amplitudes[1] + 0.5), 0, 1e-15);
  EXPECT_NEAR(open.probability, 0.0, 1e-15);
  setup.which_slit = WhichSlit{1, DetectionMode::non_selective};
  EXPECT_NEAR(slit_experiment(setup).probability, 0.5, 1e-15);
}

TEST(Slits, SingleSlit) {
  Rng rng(3);
  SlitSetup setup;
  setup.source_to_slits = EvolutionKernel::from_matrix(oracle::random_unitary(3, rng));
  setup.slits_to_detector = EvolutionKernel::from_matrix(oracle::random_unitary(3, rng));
  setup.source = 1;
  setup.detector = 2;
  setup.slits = {0};
  const auto r = slit_experiment(setup);
  EXPECT_EQ(r.term_table.rows(), 1);
  EXPECT_NEAR(r.probability, std::norm(r.slit_amplitudes[0]), 1e-15);
}

TEST(Slits, ThreeEqualSlits) {
  const auto r = multi_slit(dft_setup(3, 0, {0, 1, 2}));
  EXPECT_NEAR(r.probability, 1.0, 1e-14);
  ASSERT_EQ(r.pair_decomposition.size(), 6u);
  for (const auto& t : r.pair_decomposition) EXPECT_NEAR(std::abs(t.amplitude - 1.0 / 9.0), 0, 1e-15);
  Complex sum{};
  for (const auto& t : r.pair_decomposition) sum += t.amplitude;
  EXPECT_NEAR(r.cross_sum, sum.real(), 1e-15);
  EXPECT_NEAR(r.diagonal_sum + r.cross_sum, r.probability, 1e-15);
}

TEST(Slits, OrthogonalAmplitudesHaveNoCrossTerms) {
  auto setup = dft_setup(3, 0, {0, 1, 2});
  setup.source_to_slits = EvolutionKernel::identity(3);
  const auto r = multi_slit(setup);
  for (const auto& t : r.pair_decomposition) EXPECT_EQ(t.amplitude, Complex(0.0));
}

TEST(Slits, WhichSlitOnMiddleOfThree) {
  auto setup = dft_setup(3, 0, {0, 1, 2});
  setup.which_slit = WhichSlit{1, DetectionMode::non_selective};
  const auto r = multi_slit(setup);
  ASSERT_EQ(r.pair_decomposition.size(), 2u);
  for (const auto& t : r.pair_decomposition) {
    EXPECT_NE(t.i, 1u);
    EXPECT_NE(t.j, 1u);
  }
  EXPECT_NEAR(r.probability, 3.0 / 9.0 + 2.0 / 9.0, 1e-14);
}

TEST(Slits, BornEquivalenceForRandomKernels) {
  Rng rng(4);
  for (std::size_t n = 1; n <= 6; ++n) {
    for (int t = 0; t < 20; ++t) {
      const Eigen::MatrixXcd u1 = oracle::random_unitary(n, rng);
      const Eigen::MatrixXcd u2 = oracle::random_unitary(n, rng);
      SlitSetup setup;
      setup.source_to_slits = EvolutionKernel::from_matrix(u1);
      setup.slits_to_detector = EvolutionKernel::from_matrix(u2);
      setup.source = rng.index(n);
      setup.detector = rng.index(n);
      for (std::size_t k = 0; k < n; ++k) setup.slits.push_back(k);
      const auto r = slit_experiment(setup);
      Complex total{};
      double diag = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const Complex a = u1(static_cast<Eigen::Index>(setup.source), static_cast<Eigen::Index>(k)) *
                          u2(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(setup.detector));
        total += a;
        diag += std::norm(a);
      }
      EXPECT_NEAR(r.probability, std::norm(total), 1e-12);
      EXPECT_NEAR(r.diagonal_sum, diag, 1e-12);
      EXPECT_GE(r.probability, -1e-12);
      EXPECT_LE(r.probability, 1.0 + 1e-12);
      EXPECT_LE(std::abs(r.term_table.sum().imag()), 1e-12);
    }
  }
}

TEST(Slits, Rejections) {
  Eigen::MatrixXcd bad(2, 2);
  bad << 1, 1, 0, 1;
  EXPECT_THROW(EvolutionKernel::from_matrix(bad), ValidationError);
  auto setup = dft_setup(2, 0, {0, 2});
  EXPECT_THROW(slit_experiment(setup), ValidationError);
  setup = dft_setup(2, 0, {0, 0});
  EXPECT_THROW(slit_experiment(setup), ValidationError);
  setup = dft_setup(2, 0, {0, 1});
  setup.slits_to_detector = EvolutionKernel::dft(3);
  EXPECT_THROW(slit_experiment(setup), ValidationError);
}

TEST(Epr, SingletPreparation) {
  EXPECT_NEAR(total_spin_squared(singlet_state()), 0.0, 1e-15);
  EXPECT_NEAR(singlet_state().norm(), 1.0, 1e-15);
}

TEST(Epr, ParallelPerpendicularAndSixtyDegrees) {
  Rng rng(5);
  const auto par = epr_run(axis_at(0), axis_at(0), {}, rng);
  EXPECT_NEAR(par.correlation, -1.0, 1e-12);
  EXPECT_NEAR(par.joint(0, 0), 0.0, 1e-15);
  EXPECT_NEAR(par.joint(1, 1), 0.0, 1e-15);
  EXPECT_EQ(par.outcomes[0], -par.outcomes[1]);
  EXPECT_NEAR(epr_run(axis_at(0), axis_at(std::numbers::pi / 2), {}, rng).correlation, 0.0, 1e-12);
  EXPECT_NEAR(epr_run(axis_at(0), axis_at(std::numbers::pi / 3), {}, rng).correlation, -0.5, 1e-12);
}

TEST(Epr, AngleSweepMatchesOracle) {
  Rng rng(6);
  for (int k = 0; k <= 18; ++k) {
    const double theta = std::numbers::pi * k / 18.0;
    const auto r = epr_run(axis_at(0.3), axis_at(0.3 + theta), {}, rng);
    EXPECT_NEAR(r.correlation, -std::cos(theta), 1e-12);
    EXPECT_NEAR(r.correlation, oracle_correlation(axis_at(0.3), axis_at(0.3 + theta)), 1e-12);
    EXPECT_NEAR(r.joint.sum(), 1.0, 1e-12);
    EXPECT_TRUE(r.narrative.mirror_symmetric());
  }
}

TEST(Epr, NarrativeOrdering) {
  Rng rng(7);
  const auto r = epr_run(axis_at(0), axis_at(1), {2.0, 3.0, 1.0}, rng);
  EXPECT_EQ(r.narrative.ordering(), (std::vector<std::string>{"Q-", "P-", "PQ-", "PQ+", "P+", "Q+"}));
  EXPECT_EQ(r.narrative.entries[2].kind, EventKind::composite_spin);
  EXPECT_EQ(r.narrative.entries[2].outcome, "0");
}

TEST(Epr, DeterministicUnderSeed) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng a(seed), b(seed);
    EXPECT_EQ(epr_run(axis_at(0), axis_at(1.1), {}, a).outcomes, epr_run(axis_at(0), axis_at(1.1), {}, b).outcomes);
  }
}

TEST(Epr, Rejections) {
  Rng rng(8);
  EXPECT_THROW(epr_run({1, 1, 0}, axis_at(0), {}, rng), ValidationError);
  EXPECT_THROW(epr_run(axis_at(0), axis_at(0), {2.0, 3.0, 2.5}, rng), ValidationError);
  EXPECT_THROW(epr_run(axis_at(0), axis_at(0), {2.0, 3.0, -1.0}, rng), ValidationError);
}

namespace {

FourPotential constant_field(FourVector a) {
  return [a](const FourVector&) { return a; };
}

FourPotential smooth_field(double s) {
  return [s](const FourVector& x) {
    return FourVector{{std::sin(s * x[0]) + 0.1 * x[1], 0.3 * std::cos(x[0] + s * x[3]), 0.2 * x[2] * x[0], 0.5 * std::exp(-0.1 * x[0])}};
  };
}

}  // namespace

TEST(WfAction, ZeroField) {
  const auto path = free_particle_trajectory({{0, 1, 0, 0}}, {{std::sqrt(2.0), 1, 0, 0}});
  const auto zero = constant_field({});
  const auto r = wf_action_check(path, zero, zero, {});
  EXPECT_LE(r.diff, 1e-10);
  // Free action m·Δτ̄·|u| with |u| = 1.
  EXPECT_NEAR(r.rhs, reparametrize(1.0, 2.0) - reparametrize(1.0, 0.5), 1e-10);
}

TEST(WfAction, ConstantField) {
  const auto path = free_particle_trajectory({{0, 0, 0, 0}}, {{std::sqrt(5.0), 0, 2, 0}});
  const auto a = constant_field({{0.4, -0.1, 0.7, 0.2}});
  const auto r = wf_action_check(path, a, a, {.charge = 0.8});
  EXPECT_LE(r.diff, 1e-10);
}

TEST(WfAction, SecondOrderConvergence) {
  const auto path = free_particle_trajectory({{0.2, 0.1, 0, 0}}, {{std::sqrt(1.25), 0.5, 0, 0}});
  const auto adv = smooth_field(0.7);
  const auto ret = smooth_field(-0.4);
  std::vector<double> diffs;
  for (std::size_t steps : {100u, 200u, 400u, 800u}) {
    diffs.push_back(wf_action_check(path, adv, ret, {.steps = steps}).diff);
  }
  for (std::size_t k = 1; k < diffs.size(); ++k) {
    const double order = std::log2(diffs[k - 1] / diffs[k]);
    EXPECT_NEAR(order, 2.0, 0.1);
  }
  EXPECT_LE(wf_action_check(path, adv, ret, {.steps = 10000}).diff, 1e-6);
}

TEST(WfAction, Rejections) {
  const auto zero = constant_field({});
  Trajectory odd{[](double t) { return FourVector{{t, 0, 0, 0}}; }, [](double) { return FourVector{{1, 0, 0, 0}}; }};
  EXPECT_THROW(wf_action_check(odd, zero, zero, {}), ValidationError);
  const auto path = free_particle_trajectory({}, {{1, 0, 0, 0}});
  EXPECT_THROW(wf_action_check(path, zero, zero, {.tau1 = 2.0, .tau2 = 1.0}), ValidationError);
}
