#include "geocache/cli/commands.hpp"

#include <algorithm>
#include <cmath>

#include "geocache/error.hpp"
#include "geocache/optimizer.hpp"

namespace geocache::cli {
namespace {

using nlohmann::json;

const PopularitySpec& require_popularity(const Scenario& s) {
  if (!s.popularity) fail(Errc::invalid_argument, "scenario has no popularity block");
  return *s.popularity;
}

const CoverageSpec& require_coverage(const Scenario& s) {
  if (!s.coverage) fail(Errc::invalid_argument, "scenario has no coverage block");
  return *s.coverage;
}

double relative_gain(double optimal, double mpc) {
  return mpc > 0.0 ? (optimal - mpc) / mpc : 0.0;
}

std::vector<double> to_original_order(std::span<const double> ranked,
                                      const std::vector<std::size_t>& original_index) {
  std::vector<double> out(ranked.begin(), ranked.end());
  if (original_index.empty()) return out;
  for (std::size_t r = 0; r < ranked.size(); ++r) out[original_index[r]] = ranked[r];
  return out;
}

std::vector<double> to_ranked_order(const std::vector<double>& original,
                                    const std::vector<std::size_t>& original_index) {
  if (original_index.empty()) return original;
  std::vector<double> out(original.size());
  for (std::size_t r = 0; r < original.size(); ++r) out[r] = original[original_index[r]];
  return out;
}

// Coverage law for sweeps: analytic where the quadrature stays within the
// configured size, simulated below that.
CoverageDistribution sweep_coverage(const CoverageSpec& spec, double threshold,
                                    const SweepSpec& sweep, const SimulationSpec& sim,
                                    bool& simulated) {
  if (spec.model == CoverageSpec::Model::two_network) {
    return convolve(sweep_coverage(spec.networks[0], threshold, sweep, sim, simulated),
                    sweep_coverage(spec.networks[1], threshold, sweep, sim, simulated));
  }
  if (!needs_simulation(spec, threshold, sweep.analytic_max_coverage)) {
    return build_coverage(spec, threshold);
  }
  simulated = true;
  const auto report = estimate_coverage_pmf(simulation_config(spec, sim, threshold));
  std::vector<double> pmf;
  for (const auto& bin : report.empirical_pmf) pmf.push_back(bin.frequency.value);
  return CoverageDistribution::from_pmf(std::move(pmf));
}

Report threshold_sweep(const Scenario& s, const SweepSpec& sweep) {
  const auto ranked = build_popularity(require_popularity(s));
  const auto& popularity = ranked.distribution;
  const auto& coverage = require_coverage(s);
  const SimulationSpec sim = s.simulation.value_or(SimulationSpec{});
  const std::size_t library = popularity.library_size();

  Report report{"sweep", {}, {}};
  report.table.columns = {"T", "rate_bps", "f_opt", "f_mpc", "relative_gain", "pmf_source"};
  if (sweep.include_policy) {
    for (std::size_t j = 0; j < library; ++j) report.table.columns.push_back("b" + std::to_string(j + 1));
  }
  json simulated_points = json::array();
  for (const double t : sweep_grid(sweep)) {
    bool simulated = false;
    const auto cov = sweep_coverage(coverage, t, sweep, sim, simulated);
    const auto solution = solve_gcp(popularity, cov, s.cache_size, s.solver);
    const double mpc = mpc_policy(popularity, cov, s.cache_size).hit_probability;
    const double rate = sweep.bandwidth_hz * 0.5 * std::log2(1.0 + t);
    std::vector<Cell> row{t,
                          rate,
                          solution.hit_probability,
                          mpc,
                          relative_gain(solution.hit_probability, mpc),
                          std::string(simulated ? "simulated" : "analytic")};
    if (sweep.include_policy) {
      for (double b : to_original_order(solution.policy.probabilities, ranked.original_index)) {
        row.emplace_back(b);
      }
    }
    if (simulated) simulated_points.push_back(t);
    report.table.rows.push_back(std::move(row));
  }
  report.metadata = {{"variable", "T"},
                     {"bandwidth_hz", sweep.bandwidth_hz},
                     {"cache_size", s.cache_size},
                     {"library_size", library},
                     {"analytic_max_coverage", sweep.analytic_max_coverage},
                     {"simulated_points", simulated_points}};
  if (!simulated_points.empty()) {
    report.metadata["simulation"] = {{"replications", sim.replications}, {"seed", sim.seed}};
  }
  return report;
}

Report ratio_sweep(const Scenario& s, const SweepSpec& sweep) {
  Report report{"sweep", {}, {}};
  report.table.columns = {"a1",    "p1_over_p2",  "p1",    "p2",    "b1_opt",
                          "b1_closed_form", "f_opt", "f_mpc", "relative_gain"};
  const auto grid = sweep_grid(sweep);
  for (const double a1 : sweep.a1) {
    const std::vector<double> weights{a1, 1.0 - a1};
    const auto popularity = PopularityDistribution::from_weights(weights);
    for (const double ratio : grid) {
      const auto cov = two_coverage_from_ratio(sweep.p0, ratio);
      const auto solution = solve_gcp(popularity, cov, 1, s.solver);
      const double mpc = mpc_policy(popularity, cov, 1).hit_probability;
      report.table.rows.push_back({a1, ratio, cov[1], cov[2], solution.policy.probabilities[0],
                                   solve_2cp(a1, cov[1], cov[2]), solution.hit_probability, mpc,
                                   relative_gain(solution.hit_probability, mpc)});
    }
  }
  report.metadata = {{"variable", "p1_over_p2"}, {"p0", sweep.p0}, {"cache_size", 1}};
  return report;
}

Cell z_score(double simulated, double std_error, double analytic) {
  if (std_error > 0.0) return (simulated - analytic) / std_error;
  return std::monostate{};
}

}  // namespace

void apply_overrides(Scenario& scenario, const Overrides& overrides) {
  if (overrides.seed) {
    if (!scenario.simulation) scenario.simulation = SimulationSpec{};
    scenario.simulation->seed = *overrides.seed;
  }
  if (overrides.tolerance) {
    if (!(*overrides.tolerance > 0.0)) fail(Errc::invalid_argument, "--tolerance must be positive");
    scenario.solver.outer_tolerance = *overrides.tolerance;
  }
}

SimulationConfig simulation_config(const CoverageSpec& coverage, const SimulationSpec& sim,
                                   std::optional<double> threshold) {
  SimulationConfig config;
  switch (coverage.model) {
    case CoverageSpec::Model::sinr: {
      SinrModelParams params = coverage.sinr;
      if (threshold) params.sinr_threshold = *threshold;
      if (params.shadowing_moment != 1.0 && !sim.shadowing_sigma_db) {
        fail(Errc::invalid_argument,
             "simulating shadowing needs simulation.shadowing_sigma_db, not a moment");
      }
      // The simulator draws its own shadowing; the analytic side takes its moment.
      params.shadowing_moment = 1.0;
      config.model = params;
      break;
    }
    case CoverageSpec::Model::boolean:
      config.model = boolean_params(coverage.boolean, threshold);
      break;
    default:
      fail(Errc::invalid_argument, "only single-network \"sinr\" and \"boolean\" models can be simulated");
  }
  config.window_radius = sim.window_radius;
  config.replications = sim.replications;
  config.seed = sim.seed;
  config.threads = sim.threads;
  if (sim.shadowing_sigma_db) config.shadowing = LognormalShadowing{*sim.shadowing_sigma_db};
  return config;
}

SolveResult run_solve(const Scenario& s) {
  if (s.sweep) fail(Errc::invalid_argument, "solve takes a scenario without a sweep block");
  const auto ranked = build_popularity(require_popularity(s));
  const auto coverage = build_coverage(require_coverage(s));
  const auto solution = solve_gcp(ranked.distribution, coverage, s.cache_size, s.solver);
  const auto mpc = mpc_policy(ranked.distribution, coverage, s.cache_size);

  SolveResult result;
  result.policy = to_original_order(solution.policy.probabilities, ranked.original_index);
  result.popularity = to_original_order(ranked.distribution.probabilities(), ranked.original_index);
  result.dual_price = solution.dual_price;
  result.hit_probability = solution.hit_probability;
  result.mpc_hit_probability = mpc.hit_probability;
  result.relative_gain = relative_gain(solution.hit_probability, mpc.hit_probability);
  result.outer_iterations = solution.outer_iterations;
  result.inner_iterations = solution.inner_iterations;
  result.budget_residual = solution.budget_residual;
  result.degenerate = solution.degenerate;
  return result;
}

Report solve_report(const SolveResult& r) {
  Report report{"solve", {{"quantity", "index", "value"}, {}}, {}};
  auto& rows = report.table.rows;
  for (std::size_t j = 0; j < r.policy.size(); ++j) {
    rows.push_back({std::string("b"), static_cast<std::int64_t>(j + 1), r.policy[j]});
  }
  for (std::size_t j = 0; j < r.popularity.size(); ++j) {
    rows.push_back({std::string("a"), static_cast<std::int64_t>(j + 1), r.popularity[j]});
  }
  const auto scalar = [&](const char* name, Cell value) {
    rows.push_back({std::string(name), std::monostate{}, std::move(value)});
  };
  scalar("mu", r.dual_price);
  scalar("f_opt", r.hit_probability);
  scalar("f_mpc", r.mpc_hit_probability);
  scalar("relative_gain", r.relative_gain);
  scalar("outer_iterations", static_cast<std::int64_t>(r.outer_iterations));
  scalar("inner_iterations", static_cast<std::int64_t>(r.inner_iterations));
  scalar("budget_residual", r.budget_residual);
  report.metadata = {{"degenerate", r.degenerate}};
  return report;
}

Report run_coverage(const Scenario& s) {
  const auto& spec = require_coverage(s);
  Report report{"coverage", {{"quantity", "index", "value"}, {}}, {}};
  auto& rows = report.table.rows;
  std::optional<CoverageDistribution> coverage;
  try {
    if (spec.model == CoverageSpec::Model::sinr) {
      const auto detail = sinr_coverage_detail(spec.sinr);
      coverage = detail.distribution;
      for (std::size_t n = 0; n < detail.symmetric_sums.size(); ++n) {
        rows.push_back({std::string("S"), static_cast<std::int64_t>(n + 1), detail.symmetric_sums[n]});
      }
    } else {
      coverage = build_coverage(spec);
    }
  } catch (const Error& e) {
    if (e.code() != Errc::unsupported_dimension) throw;
    fail(Errc::unsupported_dimension,
         std::string(e.what()) + "; use the simulate command for an empirical pmf at this threshold");
  }
  std::vector<std::vector<Cell>> pmf_rows;
  for (std::size_t m = 0; m < coverage->pmf().size(); ++m) {
    pmf_rows.push_back({std::string("p"), static_cast<std::int64_t>(m), coverage->pmf()[m]});
  }
  rows.insert(rows.begin(), pmf_rows.begin(), pmf_rows.end());
  rows.push_back({std::string("mean"), std::monostate{}, mean_coverage(*coverage)});
  rows.push_back({std::string("truncation_error"), std::monostate{}, coverage->truncation_error()});
  report.metadata = {{"max_coverage", coverage->max_coverage()}};
  return report;
}

Report run_sweep(const Scenario& s) {
  if (!s.sweep) fail(Errc::invalid_argument, "scenario has no sweep block");
  return s.sweep->variable == SweepSpec::Variable::threshold ? threshold_sweep(s, *s.sweep)
                                                             : ratio_sweep(s, *s.sweep);
}

Report run_simulate(const Scenario& s) {
  if (!s.simulation) fail(Errc::invalid_argument, "scenario has no simulation block");
  const auto& sim = *s.simulation;
  auto config = simulation_config(require_coverage(s), sim);
  const auto analytic = analytic_coverage(config);

  Report report{"simulate", {{"quantity", "index", "simulated", "std_error", "analytic", "z_score"}, {}}, {}};
  SimulationReport result;
  std::optional<double> analytic_hit;
  std::string policy_source;
  std::vector<double> policy_original;
  if (s.popularity) {
    const auto ranked = build_popularity(*s.popularity);
    const auto& popularity = ranked.distribution;
    PlacementPolicy policy;
    policy.cache_size = s.cache_size;
    switch (sim.policy) {
      case SimulationSpec::Policy::optimal: {
        std::optional<CoverageDistribution> law = analytic;
        policy_source = "optimal";
        if (!law) {
          // No closed-form law at this threshold: optimize against the empirical one.
          const auto pmf_report = estimate_coverage_pmf(config);
          std::vector<double> pmf;
          for (const auto& bin : pmf_report.empirical_pmf) pmf.push_back(bin.frequency.value);
          law = CoverageDistribution::from_pmf(std::move(pmf));
          policy_source = "optimal_on_empirical_pmf";
        }
        policy = solve_gcp(popularity, *law, s.cache_size, s.solver).policy;
        break;
      }
      case SimulationSpec::Policy::mpc:
        policy = mpc_policy(popularity, analytic.value_or(CoverageDistribution::none()), s.cache_size).policy;
        policy_source = "mpc";
        break;
      case SimulationSpec::Policy::explicit_list:
        policy.probabilities = to_ranked_order(sim.explicit_policy, ranked.original_index);
        policy_source = "explicit";
        break;
    }
    require_valid(policy, popularity.library_size());
    policy_original = to_original_order(policy.probabilities, ranked.original_index);
    if (analytic) analytic_hit = hit_probability(policy, popularity, *analytic);
    config.popularity = popularity;
    config.policy = std::move(policy);
    result = estimate_hit_rate(config);
  } else {
    result = estimate_coverage_pmf(config);
  }

  const std::size_t bins =
      std::max(result.empirical_pmf.size(), analytic ? analytic->pmf().size() : std::size_t{0});
  for (std::size_t m = 0; m < bins; ++m) {
    const Estimate e = m < result.empirical_pmf.size() ? result.empirical_pmf[m].frequency : Estimate{};
    std::vector<Cell> row{std::string("p"), static_cast<std::int64_t>(m), e.value, e.std_error};
    if (analytic) {
      row.emplace_back((*analytic)[m]);
      row.push_back(z_score(e.value, e.std_error, (*analytic)[m]));
    } else {
      row.insert(row.end(), {std::monostate{}, std::monostate{}});
    }
    report.table.rows.push_back(std::move(row));
  }
  if (result.hit_rate) {
    const Estimate e = *result.hit_rate;
    std::vector<Cell> row{std::string("hit_rate"), std::monostate{}, e.value, e.std_error};
    if (analytic_hit) {
      row.emplace_back(*analytic_hit);
      row.push_back(z_score(e.value, e.std_error, *analytic_hit));
    } else {
      row.insert(row.end(), {std::monostate{}, std::monostate{}});
    }
    report.table.rows.push_back(std::move(row));
  }
  report.metadata = {{"replications", result.replications_used},
                     {"seed", sim.seed},
                     {"threads", sim.threads},
                     {"window_radius", result.window_radius},
                     {"excluded_interference", result.excluded_interference},
                     {"analytic_available", analytic.has_value()}};
  if (!policy_source.empty()) {
    report.metadata["policy_source"] = policy_source;
    report.metadata["policy"] = policy_original;
  }
  return report;
}

}  // namespace geocache::cli
