#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>

#include "cliffsub/app/commands.hpp"
#include "cliffsub/dynamics.hpp"
#include "cliffsub/error.hpp"
#include "cliffsub/factor.hpp"
#include "cliffsub/paths.hpp"

namespace cliffsub::app {

namespace {

Json config_or(const RunConfig& c, Json fallback) {
  return c.config_path ? load_json_file(*c.config_path) : std::move(fallback);
}

template <typename T>
T get_or(const Json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j[key].get<T>();
  } catch (const Json::exception&) {
    throw ConfigError(std::string("field '") + key + "' has the wrong type");
  }
}

std::vector<FourVector> vector_list(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array()) throw ConfigError(std::string("scenario needs a \"") + key + "\" array");
  std::vector<FourVector> out;
  for (const auto& v : j[key]) out.push_back(parse_four_vector(v));
  return out;
}

Json signature_json(const Signature& s) {
  Json out = Json::array();
  for (std::size_t i = 0; i < s.size(); ++i) out.push_back(s[i]);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

CommandOutput run_factor(const RunConfig& config) {
  if (!config.config_path) throw ConfigError("factor needs --config with a matrix file");
  const Eigen::MatrixXcd h = parse_hermitian(load_json_file(*config.config_path));
  const double tol = config.tol["factor"];
  const auto f = factor_hermitian(h, tol);
  const auto res = factorization_residual(f.elements, h);
  const auto n = static_cast<double>(h.rows());
  const double bound = n * n * tol;

  Json table = Json::array();
  for (Eigen::Index i = 0; i < res.entry_residual.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < res.entry_residual.cols(); ++j) row.push_back(res.entry_residual(i, j));
    table.push_back(row);
  }
  Json elements = Json::array();
  for (const auto& v : f.elements) elements.push_back(to_json(v));
  Json eigen = Json::array();
  for (Eigen::Index k = 0; k < f.plan.eigenvalues.size(); ++k) eigen.push_back(f.plan.eigenvalues(k));

  CommandOutput out;
  out.pass = res.max_entry_residual <= bound && res.max_non_scalar <= bound && res.nonzero_self_anticommutators == 0;
  out.report = {{"command", "factor"},
                {"n", h.rows()},
                {"tolerance", tol},
                {"bound", bound},
                {"eigenvalues", eigen},
                {"signature", signature_json(f.algebra.signature())},
                {"residual_table", table},
                {"max_entry_residual", res.max_entry_residual},
                {"max_non_scalar", res.max_non_scalar},
                {"nonzero_self_anticommutators", res.nonzero_self_anticommutators},
                {"elements", elements},
                {"pass", out.pass}};

  CsvTable csv({"i", "j", "residual"});
  for (Eigen::Index i = 0; i < res.entry_residual.rows(); ++i)
    for (Eigen::Index j = 0; j < res.entry_residual.cols(); ++j)
      csv.add_row({std::to_string(i), std::to_string(j), CsvTable::number(res.entry_residual(i, j))});
  out.csv = csv.str();
  return out;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<double> parse_grid(const Json& j) {
  if (j.is_array()) {
    std::vector<double> g;
    for (const auto& t : j) {
      if (!t.is_number()) throw ConfigError("tau_grid entries must be numbers");
      g.push_back(t.get<double>());
    }
    return g;
  }
  if (!j.is_object()) throw ConfigError("tau_grid must be an array or {start, stop, count}");
  const double a = get_or(j, "start", 0.0);
  const double b = get_or(j, "stop", 1.0);
  const auto count = get_or<std::size_t>(j, "count", 11);
  if (count == 0) throw ConfigError("tau_grid count must be positive");
  std::vector<double> g;
  for (std::size_t k = 0; k < count; ++k) {
    g.push_back(count == 1 ? a : a + (b - a) * static_cast<double>(k) / static_cast<double>(count - 1));
  }
  return g;
}

}  // namespace

CommandOutput run_particle(const RunConfig& config) {
  const Json j = config_or(config, Json{{"mass", 2.0},
                                        {"momenta", Json::array({Json::array({2.0, 0.0, 0.0, 0.0})})},
                                        {"positions", Json::array({Json::array({0.0, 0.0, 0.0, 0.0})})},
                                        {"tau_grid", {{"start", -4.0}, {"stop", 4.0}, {"count", 17}}}});
  const double mass = get_or(j, "mass", 1.0);
  const auto momenta = vector_list(j, "momenta");
  const auto positions = vector_list(j, "positions");
  const auto grid = parse_grid(j.contains("tau_grid") ? j["tau_grid"] : Json::array({0.0, 1.0}));
  ParticleOptions opts;
  opts.shell_tolerance = config.tol["h5"];
  opts.factor_tolerance = config.tol["factor"];
  const ParticleState s0 = init_particle(mass, momenta, positions, opts);
  const std::size_t n = s0.dimension();

  std::vector<std::string> header = {"tau", "tau_bar", "mu"};
  for (std::size_t r = 0; r < n; ++r)
    for (int mu = 0; mu < 4; ++mu) header.push_back("X" + std::to_string(r) + "_" + std::to_string(mu));
  for (std::size_t r = 0; r < n; ++r)
    for (int mu = 0; mu < 4; ++mu) header.push_back("P" + std::to_string(r) + "_" + std::to_string(mu));
  header.push_back("shell_residual");
  header.push_back("evenness_residual");
  CsvTable csv(header);

  const auto obs0 = spacetime_observables(s0);
  const MuTrace trace = mu_trace(s0, grid);
  const EvennessReport even = evenness_check(s0, grid);
  double shell = 0.0, linear = 0.0, drift = 0.0;
  Json samples = Json::array();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double tau = grid[k];
    const ParticleState s = evolve_closed(s0, tau);
    const auto obs = spacetime_observables(s);
    const auto obs_mirror = spacetime_observables(evolve_closed(s0, -tau));
    const double tau_bar = reparametrize(mass, tau);
    const double sh = shell_residual(s);
    shell = std::max(shell, sh);
    drift = std::max(drift, obs.P.max_abs_diff(obs0.P));

    std::vector<std::string> row = {CsvTable::number(tau), CsvTable::number(tau_bar),
                                    CsvTable::number(trace.samples[k].mu)};
    Json xs = Json::array();
    for (std::size_t r = 0; r < n; ++r) {
      const FourVector x = spinor_to_vector(obs.X(r, r), 1e-9);
      const FourVector want = spinor_to_vector(obs0.X(r, r), 1e-9) + spinor_to_vector(obs0.P(r, r), 1e-9) * (tau_bar / mass);
      linear = std::max(linear, max_abs_diff(x, want));
      for (std::size_t mu = 0; mu < 4; ++mu) row.push_back(CsvTable::number(x[mu]));
      xs.push_back(to_json(x));
    }
    for (std::size_t r = 0; r < n; ++r) {
      const FourVector p = spinor_to_vector(obs.P(r, r), 1e-9);
      for (std::size_t mu = 0; mu < 4; ++mu) row.push_back(CsvTable::number(p[mu]));
    }
    row.push_back(CsvTable::number(sh));
    row.push_back(CsvTable::number(obs.X.max_abs_diff(obs_mirror.X)));
    csv.add_row(std::move(row));
    samples.push_back({{"tau", tau}, {"tau_bar", tau_bar}, {"mu", trace.samples[k].mu}, {"X", xs}});
  }

  const double expected = mass / 2.0;
  const double slope_error = grid.size() >= 2 ? std::abs(trace.slope - expected) : 0.0;
  const double integrator = max_coefficient_diff(evolve_numeric(s0, grid.back(), 1000), evolve_closed(s0, grid.back()));

  CommandOutput out;
  out.pass = slope_error <= config.tol["h10"] && trace.max_off_delta <= config.tol["h10"] &&
             even.max_residual <= config.tol["g4"] && shell <= config.tol["h5"] && linear <= config.tol["h12"] &&
             drift <= config.tol["h12"] && integrator <= config.tol["h7"];
  Json momenta_json = Json::array();
  for (std::size_t r = 0; r < n; ++r) momenta_json.push_back(to_json(spinor_to_vector(obs0.P(r, r), 1e-9)));
  out.report = {{"command", "particle"},
                {"mass", mass},
                {"dimension", n},
                {"momenta", momenta_json},
                {"mu_slope", trace.slope},
                {"mu_intercept", trace.intercept},
                {"expected_slope", expected},
                {"slope_error", slope_error},
                {"max_off_delta", trace.max_off_delta},
                {"shell_residual", shell},
                {"hamiltonian_residual", hamiltonian_residual(s0)},
                {"evenness_residual", even.max_residual},
                {"min_ket_separation", even.min_ket_separation},
                {"tau_bar_linearity_residual", linear},
                {"momentum_drift", drift},
                {"integrator_residual", integrator},
                {"samples", samples},
                {"pass", out.pass}};
  out.csv = csv.str();
  return out;
}

// ---------------------------------------------------------------------------

namespace {

DetectionMode parse_mode(const std::string& m) {
  if (m == "non_selective") return DetectionMode::non_selective;
  if (m == "post_selected") return DetectionMode::post_selected;
  throw ConfigError("which_slit mode must be non_selective or post_selected");
}

const char* mode_name(DetectionMode m) {
  return m == DetectionMode::post_selected ? "post_selected" : "non_selective";
}

}  // namespace

CommandOutput run_slits(const RunConfig& config) {
  const Json j = config_or(config, Json{{"dimension", 2},
                                        {"source_to_slits", "dft"},
                                        {"slits_to_detector", "dft"},
                                        {"source", 0},
                                        {"detector", 0},
                                        {"slits", Json::array({0, 1})}});
  const auto dim = get_or<std::size_t>(j, "dimension", 2);
  SlitSetup setup;
  setup.source_to_slits = parse_kernel(j.contains("source_to_slits") ? j["source_to_slits"] : Json("dft"), dim);
  setup.slits_to_detector = parse_kernel(j.contains("slits_to_detector") ? j["slits_to_detector"] : Json("dft"), dim);
  setup.source = get_or<std::size_t>(j, "source", 0);
  setup.detector = get_or<std::size_t>(j, "detector", 0);
  setup.slits = get_or<std::vector<std::size_t>>(j, "slits", {});
  if (j.contains("which_slit")) {
    const Json& w = j["which_slit"];
    setup.which_slit = WhichSlit{get_or<std::size_t>(w, "slit", 0), parse_mode(get_or<std::string>(w, "mode", "non_selective"))};
  }

  const SlitResult r = multi_slit(setup);
  Complex total{};
  Json amps = Json::array();
  for (const Complex a : r.slit_amplitudes) {
    total += a;
    amps.push_back(to_json(a));
  }
  const double born_error = std::abs(r.open_probability - std::norm(total));
  Json pairs = Json::array();
  for (const auto& t : r.pair_decomposition) pairs.push_back({{"i", t.i}, {"j", t.j}, {"amplitude", to_json(t.amplitude)}});
  Json paths = Json::array();
  for (const auto& p : slit_paths(setup)) {
    paths.push_back({{"enter", p.enter_slit}, {"exit", p.exit_slit}, {"ordering", EventSequence{p.entries}.ordering()},
                     {"amplitude", to_json(p.amplitude)}});
  }
  Json which = Json::array();
  for (std::size_t k = 0; k < setup.slits.size(); ++k) {
    SlitSetup watched = setup;
    Json row = {{"slit", k}};
    for (DetectionMode m : {DetectionMode::non_selective, DetectionMode::post_selected}) {
      watched.which_slit = WhichSlit{k, m};
      row[mode_name(m)] = multi_slit(watched).probability;
    }
    which.push_back(row);
  }

  CommandOutput out;
  out.pass = born_error <= config.tol["c2"] && std::abs(r.diagonal_sum + r.cross_sum - r.probability) <= config.tol["c2"];
  out.report = {{"command", "slits"},
                {"probability", r.probability},
                {"open_probability", r.open_probability},
                {"born_probability", std::norm(total)},
                {"born_error", born_error},
                {"diagonal_sum", r.diagonal_sum},
                {"cross_sum", r.cross_sum},
                {"slit_amplitudes", amps},
                {"term_table", to_json(r.term_table)},
                {"surviving", to_json(r.surviving)},
                {"pair_decomposition", pairs},
                {"paths", paths},
                {"which_slit_table", which},
                {"pass", out.pass}};
  if (setup.which_slit) {
    out.report["which_slit"] = {{"slit", setup.which_slit->slit}, {"mode", mode_name(setup.which_slit->mode)}};
  }

  CsvTable csv({"i", "j", "re", "im", "surviving"});
  for (Eigen::Index i = 0; i < r.term_table.rows(); ++i)
    for (Eigen::Index jx = 0; jx < r.term_table.cols(); ++jx)
      csv.add_row({std::to_string(i), std::to_string(jx), CsvTable::number(r.term_table(i, jx).real()),
                   CsvTable::number(r.term_table(i, jx).imag()), r.surviving(i, jx) != Complex{} ? "1" : "0"});
  out.csv = csv.str();
  return out;
}

// ---------------------------------------------------------------------------

namespace {

Json narrative_json(const EventSequence& seq) {
  Json out = Json::array();
  for (const auto& e : seq.entries) {
    out.push_back({{"tau", e.tau}, {"label", e.label}, {"kind", to_string(e.kind)}, {"outcome", e.outcome},
                   {"state_after", e.state_after}});
  }
  return out;
}

double dot3(const Axis& a, const Axis& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

}  // namespace

CommandOutput run_epr(const RunConfig& config) {
  const double sixty = std::numbers::pi / 3;
  const Json j = config_or(config, Json{{"axis_a", Json::array({0.0, 0.0, 1.0})},
                                        {"axis_b", Json::array({std::sin(sixty), 0.0, std::cos(sixty)})}});
  const Axis a = parse_axis(j.contains("axis_a") ? j["axis_a"] : Json::array({0.0, 0.0, 1.0}));
  const Axis b = parse_axis(j.contains("axis_b") ? j["axis_b"] : Json::array({0.0, 0.0, 1.0}));
  EprTimes times;
  times.p = get_or(j, "tau_p", times.p);
  times.q = get_or(j, "tau_q", times.q);
  times.pq = get_or(j, "tau_pq", times.pq);
  const auto sweep = get_or<std::size_t>(j, "sweep_angles", 19);

  Rng rng(config.seed);
  const EprResult r = epr_run(a, b, times, rng);
  const double expected = -dot3(a, b);
  bool mirrored = r.narrative.mirror_symmetric();

  CsvTable csv({"theta", "correlation", "expected"});
  double sweep_error = 0.0;
  Json sweep_json = Json::array();
  for (std::size_t k = 0; k < sweep; ++k) {
    const double theta = sweep == 1 ? 0.0 : std::numbers::pi * static_cast<double>(k) / static_cast<double>(sweep - 1);
    const Axis bk = {std::sin(theta), 0.0, std::cos(theta)};
    const EprResult s = epr_run({0.0, 0.0, 1.0}, bk, times, rng);
    sweep_error = std::max(sweep_error, std::abs(s.correlation + std::cos(theta)));
    mirrored = mirrored && s.narrative.mirror_symmetric();
    csv.add_row({CsvTable::number(theta), CsvTable::number(s.correlation), CsvTable::number(-std::cos(theta))});
    sweep_json.push_back({{"theta", theta}, {"correlation", s.correlation}});
  }

  Json joint = Json::array();
  for (int i = 0; i < 2; ++i) joint.push_back(Json::array({r.joint(i, 0), r.joint(i, 1)}));
  CommandOutput out;
  const double error = std::abs(r.correlation - expected);
  out.pass = error <= config.tol["epr"] && sweep_error <= config.tol["epr"] && mirrored;
  out.report = {{"command", "epr"},
                {"seed", config.seed},
                {"joint", joint},
                {"correlation", r.correlation},
                {"expected_correlation", expected},
                {"correlation_error", error},
                {"outcomes", {{"P", r.outcomes[0]}, {"Q", r.outcomes[1]}}},
                {"narrative", narrative_json(r.narrative)},
                {"ordering", r.narrative.ordering()},
                {"mirror_symmetric", mirrored},
                {"total_spin_squared", total_spin_squared(singlet_state())},
                {"sweep", sweep_json},
                {"sweep_max_error", sweep_error},
                {"pass", out.pass}};
  out.csv = csv.str();
  return out;
}

// ---------------------------------------------------------------------------

namespace {

FourPotential parse_field(const Json& j) {
  if (j.is_string() && j.get<std::string>() == "zero") return [](const FourVector&) { return FourVector{}; };
  if (j.is_object() && j.contains("constant")) {
    const FourVector a = parse_four_vector(j["constant"]);
    return [a](const FourVector&) { return a; };
  }
  if (j.is_object() && j.contains("plane")) {
    const Json& p = j["plane"];
    const FourVector amp = parse_four_vector(p.at("amplitude"));
    const FourVector k = parse_four_vector(p.at("wavevector"));
    const double phase = get_or(p, "phase", 0.0);
    return [amp, k, phase](const FourVector& x) { return amp * std::sin(minkowski_dot(k, x) + phase); };
  }
  throw ConfigError("field must be \"zero\", {\"constant\": [...]} or {\"plane\": {...}}");
}

}  // namespace

CommandOutput run_wf(const RunConfig& config) {
  const Json j = config_or(config, Json::object());
  ActionParams params;
  params.mass = get_or(j, "mass", params.mass);
  params.charge = get_or(j, "charge", params.charge);
  params.tau1 = get_or(j, "tau1", params.tau1);
  params.tau2 = get_or(j, "tau2", params.tau2);
  params.steps = get_or(j, "steps", params.steps);
  const FourVector x0 = j.contains("x0") ? parse_four_vector(j["x0"]) : FourVector{};
  const FourVector p = j.contains("momentum") ? parse_four_vector(j["momentum"]) : FourVector{{params.mass, 0, 0, 0}};
  const FourPotential adv = parse_field(j.contains("advanced") ? j["advanced"] : Json("zero"));
  const FourPotential ret = parse_field(j.contains("retarded") ? j["retarded"] : Json("zero"));
  const Trajectory path = free_particle_trajectory(x0, p);

  const ActionCheck check = wf_action_check(path, adv, ret, params);
  CsvTable csv({"steps", "lhs", "rhs", "diff"});
  csv.add_row({std::to_string(params.steps), CsvTable::number(check.lhs), CsvTable::number(check.rhs),
               CsvTable::number(check.diff)});
  Json convergence = Json::array();
  const auto steps = get_or<std::vector<std::size_t>>(j, "convergence", {});
  double previous = 0.0;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    ActionParams pk = params;
    pk.steps = steps[k];
    const ActionCheck c = wf_action_check(path, adv, ret, pk);
    Json row = {{"steps", steps[k]}, {"diff", c.diff}};
    if (k > 0 && c.diff > 0.0 && previous > 0.0) {
      row["order"] = std::log(previous / c.diff) / std::log(static_cast<double>(steps[k]) / static_cast<double>(steps[k - 1]));
    }
    previous = c.diff;
    convergence.push_back(row);
    csv.add_row({std::to_string(steps[k]), CsvTable::number(c.lhs), CsvTable::number(c.rhs), CsvTable::number(c.diff)});
  }

  CommandOutput out;
  out.pass = check.diff <= config.tol["d1"];
  out.report = {{"command", "wf"},
                {"lhs", check.lhs},
                {"rhs", check.rhs},
                {"diff", check.diff},
                {"tolerance", config.tol["d1"]},
                {"steps", params.steps},
                {"convergence", convergence},
                {"pass", out.pass}};
  out.csv = csv.str();
  return out;
}

// ---------------------------------------------------------------------------

CommandOutput run_command(const RunConfig& config) {
  if (config.fault && config.command != Command::verify) throw ConfigError("--inject-fault applies to verify only");
  switch (config.command) {
    case Command::verify: {
      CommandOutput out = run_verify(config);
      CsvTable csv({"tag", "residual", "tolerance", "pass"});
      for (const auto& tag : out.report["order"]) {
        const Json& r = out.report["identities"][tag.get<std::string>()];
        csv.add_row({tag.get<std::string>(), CsvTable::number(r["residual"].get<double>()),
                     CsvTable::number(r["tolerance"].get<double>()), r["pass"].get<bool>() ? "true" : "false"});
      }
      out.csv = csv.str();
      return out;
    }
    case Command::factor: return run_factor(config);
    case Command::particle: return run_particle(config);
    case Command::slits: return run_slits(config);
    case Command::epr: return run_epr(config);
    case Command::wf: return run_wf(config);
  }
  throw UsageError("unknown command");
}

namespace {

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  f << text;
}

}  // namespace

int execute(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const CommandOutput result = run_command(config);
    const std::string text = dump_json(result.report);
    if (config.out_path) write_file(*config.out_path, text);
    else out << text;
    if (config.csv_path && result.csv) write_file(*config.csv_path, *result.csv);
    if (!result.pass) {
      err << to_string(config.command) << ": checks failed";
      if (result.report.contains("failed")) {
        for (const auto& tag : result.report["failed"]) err << ' ' << tag.get<std::string>();
      }
      err << '\n';
    }
    return result.pass ? 0 : 1;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
  } catch (const ValidationError& e) {
    err << "invalid input: " << e.what() << '\n';
  } catch (const Json::exception& e) {
    err << "config error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace cliffsub::app
