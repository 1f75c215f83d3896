#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "geocache/cli/report.hpp"
#include "geocache/cli/scenario.hpp"
#include "geocache/simulator.hpp"

namespace geocache::cli {

struct Overrides {
  std::optional<std::uint64_t> seed;  // simulation seed
  std::optional<double> tolerance;    // solver outer tolerance
};

void apply_overrides(Scenario& scenario, const Overrides& overrides);

struct SolveResult {
  std::vector<double> policy;  // original content order
  std::vector<double> popularity;
  double dual_price = 0.0;
  double hit_probability = 0.0;
  double mpc_hit_probability = 0.0;
  double relative_gain = 0.0;  // (f* - f_mpc) / f_mpc, 0 when f_mpc = 0
  std::size_t outer_iterations = 0;
  std::size_t inner_iterations = 0;
  double budget_residual = 0.0;
  bool degenerate = false;
};

SolveResult run_solve(const Scenario& scenario);
Report solve_report(const SolveResult& result);

Report run_coverage(const Scenario& scenario);
Report run_sweep(const Scenario& scenario);
Report run_simulate(const Scenario& scenario);

/// Simulator configuration for a single-network SINR or Boolean spec.
SimulationConfig simulation_config(const CoverageSpec& coverage, const SimulationSpec& sim,
                                   std::optional<double> threshold = std::nullopt);

}  // namespace geocache::cli
