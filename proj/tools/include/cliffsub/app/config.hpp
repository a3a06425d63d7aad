#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "cliffsub/app/report.hpp"
#include "cliffsub/paths.hpp"
#include "cliffsub/substructure.hpp"

namespace cliffsub::app {

/// Named tolerances, keyed by the identity they bound. Only known keys may
/// be overridden.
class Tolerances {
 public:
  static Tolerances defaults();

  /// Parses "KEY=VALUE". Throws ConfigError for an unknown key or a value
  /// that is not a non-negative finite number.
  void apply(const std::string& assignment);
  double operator[](const std::string& key) const;
  const std::map<std::string, double>& values() const noexcept { return values_; }

 private:
  std::map<std::string, double> values_;
};

enum class Command { verify, factor, particle, slits, epr, wf };

std::optional<Command> parse_command(const std::string& name);
const char* to_string(Command c);

struct RunConfig {
  Command command = Command::verify;
  std::optional<std::string> config_path;
  std::optional<std::string> out_path;
  std::optional<std::string> csv_path;
  std::uint64_t seed = 0;
  Tolerances tol = Tolerances::defaults();
  /// Identity tag whose check is deliberately corrupted (verify only).
  std::optional<std::string> fault;
  /// Worker cap for verify; 0 means one per hardware thread.
  unsigned threads = 0;
};

/// Reads CLIFFSUB_THREADS; unset, empty or unparsable gives 0.
unsigned threads_from_env();

/// Throws ConfigError when the file is missing or not valid JSON.
Json load_json_file(const std::string& path);

// Scenario parsers. All throw ConfigError on malformed input.
FourVector parse_four_vector(const Json& j);
Axis parse_axis(const Json& j);
/// {"re": [[...]], "im": [[...]]}; "im" may be omitted.
Eigen::MatrixXcd parse_complex_matrix(const Json& j);
/// {"n": int, "re": [[...]], "im": [[...]]}
Eigen::MatrixXcd parse_hermitian(const Json& j);
/// {"points": [[t, x, y, z], ...], "labels": [...]}
SpaceTimeSpectrum parse_spectrum(const Json& j);
/// Either "dft", "identity" or a complex matrix object.
EvolutionKernel parse_kernel(const Json& j, std::size_t default_dim);

}  // namespace cliffsub::app
