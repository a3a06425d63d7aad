#include "cliffsub/app/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>

#include "cliffsub/error.hpp"

namespace cliffsub::app {

Tolerances Tolerances::defaults() {
  Tolerances t;
  t.values_ = {
      {"factor", kDefaultFactorTolerance},
      {"e2", 1e-12},
      {"e8", 1e-9},
      {"a2", 1e-10},
      {"h3", 1e-12},
      {"a7", 1e-12},
      {"a10", 1e-10},
      {"a14", 1e-9},
      {"f17", 1e-12},
      {"f23", 1e-5},
      {"h5", 1e-10},
      {"h7", 1e-12},
      {"h10", 1e-9},
      {"h11", 1e-9},
      {"h12", 1e-9},
      {"g4", 1e-9},
      {"b16", 1e-12},
      {"c2", 1e-12},
      {"epr", 1e-12},
      {"d1", 1e-10},
  };
  return t;
}

void Tolerances::apply(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("tolerance override must look like KEY=VALUE: " + assignment);
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown tolerance key '" + key + "'");
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value) || value < 0.0) {
    throw ConfigError("tolerance '" + key + "' needs a non-negative number, got '" + text + "'");
  }
  it->second = value;
}

double Tolerances::operator[](const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw UsageError("tolerance key '" + key + "' is not registered");
  return it->second;
}

std::optional<Command> parse_command(const std::string& name) {
  for (Command c : {Command::verify, Command::factor, Command::particle, Command::slits, Command::epr, Command::wf}) {
    if (name == to_string(c)) return c;
  }
  return std::nullopt;
}

const char* to_string(Command c) {
  switch (c) {
    case Command::verify: return "verify";
    case Command::factor: return "factor";
    case Command::particle: return "particle";
    case Command::slits: return "slits";
    case Command::epr: return "epr";
    case Command::wf: return "wf";
  }
  return "unknown";
}

unsigned threads_from_env() {
  const char* raw = std::getenv("CLIFFSUB_THREADS");
  if (raw == nullptr || *raw == '\0') return 0;
  unsigned n = 0;
  const std::string text(raw);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return 0;
  return n;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

namespace {

double number(const Json& j, const char* what) {
  if (!j.is_number()) throw ConfigError(std::string(what) + " must be a number");
  return j.get<double>();
}

Eigen::MatrixXd real_matrix(const Json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw ConfigError(std::string(what) + " must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array()) throw ConfigError(std::string(what) + " rows must be arrays");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ConfigError(std::string(what) + " is ragged");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = number(row[static_cast<std::size_t>(c)], what);
  }
  return m;
}

}  // namespace

FourVector parse_four_vector(const Json& j) {
  if (!j.is_array() || j.size() != 4) throw ConfigError("four-vector must be an array of 4 numbers");
  return {{number(j[0], "four-vector entry"), number(j[1], "four-vector entry"), number(j[2], "four-vector entry"),
           number(j[3], "four-vector entry")}};
}

Axis parse_axis(const Json& j) {
  if (!j.is_array() || j.size() != 3) throw ConfigError("axis must be an array of 3 numbers");
  return {number(j[0], "axis entry"), number(j[1], "axis entry"), number(j[2], "axis entry")};
}

Eigen::MatrixXcd parse_complex_matrix(const Json& j) {
  if (!j.is_object() || !j.contains("re")) throw ConfigError("complex matrix needs an \"re\" field");
  const Eigen::MatrixXd re = real_matrix(j["re"], "re");
  Eigen::MatrixXd im = Eigen::MatrixXd::Zero(re.rows(), re.cols());
  if (j.contains("im")) {
    im = real_matrix(j["im"], "im");
    if (im.rows() != re.rows() || im.cols() != re.cols()) throw ConfigError("re and im shapes differ");
  }
  Eigen::MatrixXcd m(re.rows(), re.cols());
  m.real() = re;
  m.imag() = im;
  return m;
}

Eigen::MatrixXcd parse_hermitian(const Json& j) {
  if (!j.is_object() || !j.contains("n") || !j["n"].is_number_integer()) {
    throw ConfigError("matrix file needs an integer \"n\"");
  }
  const auto n = j["n"].get<long long>();
  const Eigen::MatrixXcd m = parse_complex_matrix(j);
  if (m.rows() != n || m.cols() != n) throw ConfigError("matrix shape does not match n");
  return m;
}

SpaceTimeSpectrum parse_spectrum(const Json& j) {
  if (!j.is_object() || !j.contains("points") || !j["points"].is_array()) {
    throw ConfigError("spectrum needs a \"points\" array");
  }
  SpaceTimeSpectrum s;
  for (const auto& p : j["points"]) s.points.push_back(parse_four_vector(p));
  if (j.contains("labels")) {
    for (const auto& l : j["labels"]) {
      if (!l.is_string()) throw ConfigError("labels must be strings");
      s.labels.push_back(l.get<std::string>());
    }
    if (s.labels.size() != s.points.size()) throw ConfigError("labels and points differ in length");
  } else {
    for (std::size_t r = 0; r < s.points.size(); ++r) s.labels.push_back("x" + std::to_string(r));
  }
  return s;
}

EvolutionKernel parse_kernel(const Json& j, std::size_t default_dim) {
  try {
    if (j.is_string()) {
      const auto name = j.get<std::string>();
      if (name == "dft") return EvolutionKernel::dft(default_dim);
      if (name == "identity") return EvolutionKernel::identity(default_dim);
      throw ConfigError("unknown kernel '" + name + "'");
    }
    return EvolutionKernel::from_matrix(parse_complex_matrix(j));
  } catch (const ValidationError& e) {
    throw ConfigError(std::string("bad kernel: ") + e.what());
  }
}

}  // namespace cliffsub::app
