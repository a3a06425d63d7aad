#include <CLI11.hpp>
#include <iostream>

#include "cliffsub/app/commands.hpp"
#include "cliffsub/error.hpp"

using namespace cliffsub::app;

int main(int argc, char** argv) {
  CLI::App app{"Clifford-space substructure checks and scenario runs"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_path, csv_path, fault;
  std::uint64_t seed = 0;
  std::vector<std::string> tol;
  app.add_option("--config", config_path, "Scenario or matrix JSON file");
  app.add_option("--out", out_path, "Write the JSON report here instead of stdout");
  app.add_option("--csv", csv_path, "Also write the command's table as CSV");
  app.add_option("--seed", seed, "Random seed")->default_val(0);
  app.add_option("--tol", tol, "Tolerance override KEY=VALUE (repeatable)")->take_all();
  app.add_option("--inject-fault", fault, "Corrupt the named verify identity (test mode)");

  app.add_subcommand("verify", "Check every algebraic identity on seeded random inputs");
  app.add_subcommand("factor", "Factor a Hermitian matrix into Clifford elements");
  app.add_subcommand("particle", "Evolve a free particle and trace mu, X and P");
  app.add_subcommand("slits", "Multi-slit interference from Clifford paths");
  app.add_subcommand("epr", "Singlet spin correlations and the measurement narrative");
  app.add_subcommand("wf", "Action identity for a charge in advanced and retarded fields");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  RunConfig config;
  config.command = *parse_command(app.get_subcommands().front()->get_name());
  if (!config_path.empty()) config.config_path = config_path;
  if (!out_path.empty()) config.out_path = out_path;
  if (!csv_path.empty()) config.csv_path = csv_path;
  if (!fault.empty()) config.fault = fault;
  config.seed = seed;
  config.threads = threads_from_env();
  try {
    for (const auto& t : tol) config.tol.apply(t);
  } catch (const cliffsub::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }
  return execute(config, std::cout, std::cerr);
}
