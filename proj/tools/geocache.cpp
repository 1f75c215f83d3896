#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "geocache/cli/commands.hpp"
#include "geocache/error.hpp"

namespace {

using namespace geocache;
using namespace geocache::cli;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::invalid_argument, "cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Report dispatch(const std::string& command, const Scenario& scenario) {
  if (command == "solve") return solve_report(run_solve(scenario));
  if (command == "coverage") return run_coverage(scenario);
  if (command == "sweep") return run_sweep(scenario);
  return run_simulate(scenario);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal randomized cache placement over Poisson cellular networks"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_path;
  std::string format_name = "csv";
  Overrides overrides;

  for (const auto& [name, help] :
       {std::pair{"solve", "Optimal and most-popular placement for one scenario"},
        std::pair{"coverage", "Coverage-number distribution of the scenario's network"},
        std::pair{"sweep", "Optimal vs most-popular hit probability over a parameter grid"},
        std::pair{"simulate", "Monte Carlo coverage and hit rate with analytic comparison"}}) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "Scenario JSON file")->required();
    sub->add_option("--output", output_path, "Write to this file instead of standard output");
    sub->add_option("--format", format_name, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--seed", overrides.seed, "Simulation seed");
    sub->add_option("--tolerance", overrides.tolerance, "Solver dual-price tolerance");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  const std::string command = app.get_subcommands().front()->get_name();
  const Format format = format_name == "json" ? Format::json : Format::csv;
  try {
    Scenario scenario = parse_scenario(read_file(config_path));
    apply_overrides(scenario, overrides);
    const Report report = dispatch(command, scenario);
    if (output_path.empty()) {
      write_report(std::cout, report, format);
    } else {
      std::ofstream out(output_path, std::ios::binary);
      if (!out) fail(Errc::invalid_argument, "cannot open output file '" + output_path + "'");
      write_report(out, report, format);
    }
  } catch (const Error& e) {
    std::cerr << error_object(e.code(), e.what()).dump() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << error_object(Errc::numerical_failure, e.what()).dump() << '\n';
    return 1;
  }
  return 0;
}
