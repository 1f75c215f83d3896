// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "geocache/cli/commands.hpp"
#include "geocache/coverage.hpp"
#include "geocache/optimizer.hpp"
#include "geocache/placement.hpp"
#include "geocache/popularity.hpp"
#include "geocache/simulator.hpp"
#include "test_util.hpp"

using namespace geocache;
namespace gt = geocache::testing;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
  char buffer[512];
  std::snprintf(buffer, sizeof buffer, format, args...);
  return buffer;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) {
    grid[i] = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / double(n - 1));
  }
  return grid;
}

const std::vector<double> kA1{0.5, 0.6, 0.7, 0.8, 0.9};
constexpr double kP0 = 0.05;

Outcome closed_form_equivalence() {
  const auto start = Clock::now();
  double worst = 0.0;
  for (double a1 : kA1) {
    const auto pop = PopularityDistribution::from_weights(std::vector<double>{a1, 1.0 - a1});
    for (double ratio : log_grid(1e-2, 1e2, 50)) {
      const auto cov = two_coverage_from_ratio(kP0, ratio);
      const double solved = solve_gcp(pop, cov, 1).policy.probabilities[0];
      worst = std::max(worst, std::abs(solved - solve_2cp(a1, cov[1], cov[2])));
    }
  }
  const double elapsed = seconds_since(start);
  return {worst < 1e-6 && elapsed < 5.0,
          fmt("max |b1 - closed form| = %.3g over 250 points, %.3f s", worst, elapsed)};
}

Outcome ratio_endpoints() {
  double worst_low = 0.0;
  double worst_mpc = 0.0;
  std::size_t mpc_points = 0;
  for (double a1 : kA1) {
    const auto pop = PopularityDistribution::from_weights(std::vector<double>{a1, 1.0 - a1});
    const auto grid = log_grid(1e-2, 1e2, 50);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto cov = two_coverage_from_ratio(kP0, grid[i]);
      const double b1 = solve_gcp(pop, cov, 1).policy.probabilities[0];
      if (i == 0) worst_low = std::max(worst_low, std::abs(b1 - a1));
      if (a1 > 1.0 - cov[1] / (2.0 * (cov[1] + cov[2]))) {
        ++mpc_points;
        worst_mpc = std::max(worst_mpc, std::abs(b1 - 1.0));
      }
    }
  }
  return {worst_low <= 0.02 && worst_mpc < 1e-6,
          fmt("max |b1 - a1| at smallest ratio = %.4f; max |b1 - 1| on %zu saturated points = %.3g",
              worst_low, mpc_points, worst_mpc)};
}

Outcome mpc_dominance() {
  const auto start = Clock::now();
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  double worst_collapse = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t library = gt::uniform_index(rng, 2, 60);
    const std::size_t cache = gt::uniform_index(rng, 1, library - 1);
    const auto pop = PopularityDistribution::zipf(library, gt::uniform(rng, 0.0, 2.0));
    const auto cov = gt::random_coverage(rng, gt::uniform_index(rng, 1, 12));
    worst = std::max(worst, mpc_policy(pop, cov, cache).hit_probability -
                                solve_gcp(pop, cov, cache).hit_probability);

    const double p0 = gt::uniform(rng);
    const auto single = CoverageDistribution::from_pmf({p0, 1.0 - p0});
    worst_collapse = std::max(worst_collapse,
                              std::abs(solve_gcp(pop, single, cache).hit_probability -
                                       mpc_policy(pop, single, cache).hit_probability));
  }
  const double elapsed = seconds_since(start);
  return {worst <= 1e-9 && worst_collapse < 1e-9 && elapsed < 30.0,
          fmt("max (f_mpc - f*) = %.3g; single-coverage max |f* - f_mpc| = %.3g; %.2f s", worst,
              worst_collapse, elapsed)};
}

// Boolean figure scenario: beta = 4, unit path-loss constant, intensity set so
// that nu(T = 0.01) = 0.7 keeps the M = 10 tail below 1e-9.
Outcome boolean_sweep_shape() {
  cli::Scenario scenario;
  scenario.popularity = cli::ZipfSpec{25, 0.2};
  scenario.cache_size = 5;
  cli::CoverageSpec coverage;
  coverage.model = cli::CoverageSpec::Model::boolean;
  coverage.boolean.bs_intensity = 0.07 / std::numbers::pi;
  coverage.boolean.threshold = 1.0;
  coverage.boolean.truncation = 10;
  scenario.coverage = coverage;
  scenario.sweep = cli::SweepSpec{};  // T in [1e-2, 2e3], 60 log-spaced points
  const auto report = cli::run_sweep(scenario);

  double best_low = -1.0;
  double worst_high = 0.0;
  for (const auto& row : report.table.rows) {
    const double t = std::get<double>(row[0]);
    const double gain = std::get<double>(row[4]);
    if (t <= 10.0) best_low = std::max(best_low, gain);
    if (t >= 100.0) worst_high = std::max(worst_high, gain);
  }
  return {best_low > 0.05 && worst_high < 0.01,
          fmt("max gain for T <= 10 = %.2f%%; max gain for T >= 100 = %.3f%%", 100 * best_low,
              100 * worst_high)};
}

Outcome sinr_pmf() {
  const auto start = Clock::now();
  SinrModelParams params;
  params.sinr_threshold = 1.0;
  const double p1 = sinr_coverage(params)[1];
  const double analytic_error = std::abs(p1 - 2.0 / std::numbers::pi);

  SimulationConfig config;
  config.model = params;
  config.replications = 100000;
  config.seed = 5;
  const auto sim1 = estimate_coverage_pmf(config);
  const auto& f1 = sim1.empirical_pmf.at(1).frequency;
  const double z1 = (f1.value - p1) / f1.std_error;

  params.sinr_threshold = 0.6;
  const auto law = sinr_coverage(params);
  config.model = params;
  config.seed = 6;
  const auto sim2 = estimate_coverage_pmf(config);
  double worst_z = 0.0;
  for (std::size_t m = 0; m <= std::max(law.max_coverage(), sim2.empirical_pmf.size() - 1); ++m) {
    const auto e = m < sim2.empirical_pmf.size() ? sim2.empirical_pmf[m].frequency : Estimate{};
    if (e.std_error > 0) worst_z = std::max(worst_z, std::abs(e.value - law[m]) / e.std_error);
    else if (law[m] > 1e-4) worst_z = INFINITY;
  }
  const double elapsed = seconds_since(start);
  return {analytic_error < 1e-4 && std::abs(z1) < 3.0 && worst_z < 3.0 && elapsed < 120.0,
          fmt("|p1 - 2/pi| = %.2g; T=1 z = %.2f; T=0.6 max |z| over %zu bins = %.2f; %.1f s",
              analytic_error, z1, law.pmf().size(), worst_z, elapsed)};
}

Outcome hit_rate_oracle() {
  std::mt19937_64 rng(77);
  int passed = 0;
  std::string zs;
  for (int run = 0; run < 10; ++run) {
    SimulationConfig config;
    if (run % 2 == 0) {
      BooleanModelParams b;
      b.bs_intensity = gt::uniform(rng, 0.1, 1.0);
      b.coverage_radius = gt::uniform(rng, 0.5, 1.5);
      b.truncation = 30;
      config.model = b;
    } else {
      SinrModelParams s;
      s.sinr_threshold = gt::uniform(rng, 0.5, 1.5);  // at most two covering stations
      s.noise_power = gt::uniform(rng, 0.0, 0.3);
      s.bs_intensity = gt::uniform(rng, 0.5, 2.0);
      config.model = s;
    }
    const auto law = analytic_coverage(config).value();
    const std::size_t library = gt::uniform_index(rng, 2, 20);
    const std::size_t cache = gt::uniform_index(rng, 1, library - 1);
    const auto pop = PopularityDistribution::zipf(library, gt::uniform(rng, 0.0, 1.5));
    config.popularity = pop;
    config.policy = solve_gcp(pop, law, cache).policy;
    config.replications = 100000;
    config.seed = 1000 + run;
    const auto report = estimate_hit_rate(config);
    const double z = (report.hit_rate->value - hit_probability(*config.policy, pop, law)) /
                     report.hit_rate->std_error;
    passed += std::abs(z) < 3.0;
    zs += fmt("%s%.2f", run ? " " : "", z);
  }
  return {passed >= 9, fmt("%d/10 within 3 sigma (z: %s)", passed, zs.c_str())};
}

Outcome sampler_exactness() {
  std::mt19937_64 rng(3);
  const std::size_t grid = 1000000;
  double worst = 0.0;
  bool cardinality_ok = true;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t library = gt::uniform_index(rng, 1, 40);
    const std::size_t cache = gt::uniform_index(rng, 1, library);
    const bool full = trial % 2 == 0;
    const auto policy = full ? gt::random_full_policy(rng, library, cache)
                             : gt::random_policy(rng, library, cache);
    const StaircaseSampler sampler(policy);
    std::vector<std::size_t> hits(library, 0);
    for (std::size_t k = 0; k < grid; ++k) {
      const auto inventory = sampler.sample((static_cast<double>(k) + 0.5) / grid);
      if (inventory.size() > cache || (full && inventory.size() != cache)) cardinality_ok = false;
      for (std::size_t j : inventory) ++hits[j];
    }
    for (std::size_t j = 0; j < library; ++j) {
      worst = std::max(worst, std::abs(double(hits[j]) / grid - policy.probabilities[j]));
    }
  }
  return {worst <= 2e-6 && cardinality_ok,
          fmt("max marginal error = %.3g over 100 policies; cardinality %s", worst,
              cardinality_ok ? "ok" : "violated")};
}

Outcome solver_structure() {
  std::mt19937_64 rng(11);
  const SolverOptions options;
  const double kkt_tol = 10.0 * options.outer_tolerance;
  double worst_kkt = 0.0;
  double worst_budget = 0.0;  // in units of J
  bool monotone = true;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t library = gt::uniform_index(rng, 2, 60);
    const std::size_t cache = gt::uniform_index(rng, 1, library - 1);
    const auto pop = PopularityDistribution::zipf(library, gt::uniform(rng, 0.0, 2.0));
    const auto cov = gt::random_coverage(rng, gt::uniform_index(rng, 1, 12));
    const auto sol = solve_gcp(pop, cov, cache, options);
    const auto& b = sol.policy.probabilities;
    double total = 0.0;
    for (std::size_t j = 0; j < library; ++j) {
      total += b[j];
      const double gain = marginal_gain(b[j], pop[j], cov);
      double violation = 0.0;
      if (b[j] >= 1.0) violation = sol.dual_price - gain;
      else if (b[j] <= 0.0) violation = gain - sol.dual_price;
      else violation = std::abs(gain - sol.dual_price);
      worst_kkt = std::max(worst_kkt, violation);
    }
    worst_budget = std::max(worst_budget, std::abs(total - double(cache)) / double(library));

    const double mu_max = pop[0] * mean_coverage(cov);
    double previous = INFINITY;
    for (int k = 0; k < 100; ++k) {
      double sum = 0.0;
      for (double x : primal_responses(mu_max * k / 99.0, pop, cov)) sum += x;
      if (sum > previous + 1e-12) monotone = false;
      previous = sum;
    }
  }
  return {worst_kkt <= kkt_tol && worst_budget < 1e-8 && monotone,
          fmt("max KKT violation = %.3g (limit %.0e); max |sum b - K|/J = %.3g; dual monotone: %s",
              worst_kkt, kkt_tol, worst_budget, monotone ? "yes" : "no")};
}

Outcome concavity_monotonicity() {
  std::mt19937_64 rng(12);
  double worst_concave = 0.0;
  double worst_monotone = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t library = gt::uniform_index(rng, 1, 40);
    const std::size_t cache = gt::uniform_index(rng, 1, library);
    const auto pop = PopularityDistribution::zipf(library, gt::uniform(rng, 0.0, 2.0));
    const auto cov = gt::random_coverage(rng, gt::uniform_index(rng, 0, 12));
    const auto x = gt::random_policy(rng, library, cache);
    const auto y = gt::random_policy(rng, library, cache);
    const double theta = gt::uniform(rng);
    PlacementPolicy mix{std::vector<double>(library), cache};
    for (std::size_t j = 0; j < library; ++j) {
      mix.probabilities[j] = theta * x.probabilities[j] + (1.0 - theta) * y.probabilities[j];
    }
    worst_concave = std::max(worst_concave, theta * hit_probability(x, pop, cov) +
                                                (1.0 - theta) * hit_probability(y, pop, cov) -
                                                hit_probability(mix, pop, cov));
  }
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t library = gt::uniform_index(rng, 1, 40);
    const auto pop = PopularityDistribution::zipf(library, gt::uniform(rng, 0.0, 2.0));
    const auto cov = gt::random_coverage(rng, gt::uniform_index(rng, 0, 12));
    auto x = gt::random_policy(rng, library, library);
    const double before = hit_probability(x, pop, cov);
    auto& bj = x.probabilities[gt::uniform_index(rng, 0, library - 1)];
    bj = std::min(1.0, bj + gt::uniform(rng));
    worst_monotone = std::max(worst_monotone, before - hit_probability(x, pop, cov));
  }
  return {worst_concave <= 1e-12 && worst_monotone <= 0.0,
          fmt("max concavity violation = %.3g (limit 1e-12); max decrease = %.3g", worst_concave,
              worst_monotone)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"AC1 closed-form equivalence", closed_form_equivalence},
      {"AC2 ratio sweep endpoints", ratio_endpoints},
      {"AC3 MPC dominance and single-coverage collapse", mpc_dominance},
      {"AC4 Boolean threshold sweep shape", boolean_sweep_shape},
      {"AC5 SINR analytic pmf vs simulation", sinr_pmf},
      {"AC6 hit-rate oracle", hit_rate_oracle},
      {"AC7 placement sampler exactness", sampler_exactness},
      {"AC8 solver structure", solver_structure},
      {"AC9 concavity and monotonicity", concavity_monotonicity},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Outcome outcome;
    try {
      outcome = run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    failures += !outcome.pass;
    std::printf("%s %s: %s\n", outcome.pass ? "PASS" : "FAIL", name, outcome.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
