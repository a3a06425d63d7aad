#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cliffsub/app/config.hpp"

namespace cliffsub::app {

struct CommandOutput {
  Json report;
  bool pass = true;
  std::optional<std::string> csv;
};

/// One checked identity of the verify suite.
struct IdentityResult {
  std::string tag;
  std::string description;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = true;
  Json detail = Json::object();
};

struct VerifySuite {
  std::string tag;
  std::function<IdentityResult(std::uint64_t seed, const Tolerances& tol, bool fault)> run;
};

/// Every identity checked by `verify`, in report order.
const std::vector<VerifySuite>& verify_suites();

CommandOutput run_verify(const RunConfig& config);
CommandOutput run_factor(const RunConfig& config);
CommandOutput run_particle(const RunConfig& config);
CommandOutput run_slits(const RunConfig& config);
CommandOutput run_epr(const RunConfig& config);
CommandOutput run_wf(const RunConfig& config);

CommandOutput run_command(const RunConfig& config);

/// Runs the command and writes its outputs. Returns the process exit code:
/// 0 on pass, 1 on a failed check or numeric failure, 2 on a config error.
int execute(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace cliffsub::app
