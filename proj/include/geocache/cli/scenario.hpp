#pragma once

#include "json.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "geocache/coverage.hpp"
#include "geocache/optimizer.hpp"
#include "geocache/popularity.hpp"

namespace geocache::cli {

inline constexpr std::string_view kSchema = "geocache.scenario.v1";

struct ZipfSpec {
  std::size_t library_size = 0;
  double exponent = 0.0;
};

struct WeightsSpec {
  std::vector<double> weights;
  bool sort = false;  // sort descending and report results in the original order
};

using PopularitySpec = std::variant<ZipfSpec, WeightsSpec>;

/// Boolean model given either by its radius or by a threshold and path loss.
struct BooleanSpec {
  double bs_intensity = 1.0;
  std::optional<double> coverage_radius;
  std::optional<double> threshold;
  double pathloss_exponent = 4.0;
  double pathloss_constant = 1.0;
  std::size_t truncation = 10;
};

struct CoverageSpec {
  enum class Model { sinr, boolean, pmf, two_network };
  Model model = Model::pmf;
  SinrModelParams sinr;
  BooleanSpec boolean;
  std::vector<double> pmf;
  std::vector<CoverageSpec> networks;  // two_network: exactly two
};

struct SimulationSpec {
  enum class Policy { optimal, mpc, explicit_list };
  std::size_t replications = 100000;
  std::uint64_t seed = 1;
  std::optional<double> window_radius;
  std::optional<double> shadowing_sigma_db;
  std::size_t threads = 1;
  Policy policy = Policy::optimal;
  std::vector<double> explicit_policy;
};

struct SweepSpec {
  enum class Variable { threshold, p1_over_p2 };
  Variable variable = Variable::threshold;
  double min = 1e-2;
  double max = 2e3;
  std::size_t points = 60;
  bool log_spacing = true;
  bool include_policy = false;
  double bandwidth_hz = 5e6;
  std::size_t analytic_max_coverage = 4;  // SINR thresholds needing more use simulation
  std::vector<double> a1{0.5, 0.6, 0.7, 0.8, 0.9};
  double p0 = 0.05;
};

struct Scenario {
  std::optional<PopularitySpec> popularity;
  std::optional<CoverageSpec> coverage;
  std::size_t cache_size = 1;
  SolverOptions solver;
  std::optional<SimulationSpec> simulation;
  std::optional<SweepSpec> sweep;
};

/// Parses and validates a scenario document. Errors carry Errc::parse_error
/// with a line/column (syntax) or a JSON pointer to the offending field.
Scenario parse_scenario(std::string_view text);
Scenario scenario_from_json(const nlohmann::json& doc);
nlohmann::json scenario_to_json(const Scenario& scenario);

/// Ranked popularity plus, when the input was re-sorted, the original index
/// of each rank.
struct RankedPopularity {
  PopularityDistribution distribution;
  std::vector<std::size_t> original_index;  // empty: identity
};

RankedPopularity build_popularity(const PopularitySpec& spec);

/// Weights sorted descending (stable) with the original index of each rank.
std::pair<std::vector<double>, std::vector<std::size_t>> sort_by_popularity(
    std::span<const double> weights);

/// Boolean model parameters; `threshold` replaces the spec's threshold
/// (radius-form specs reject it).
BooleanModelParams boolean_params(const BooleanSpec& spec,
                                  std::optional<double> threshold = std::nullopt);

/// Coverage law for a spec; `threshold` replaces every SINR/Boolean threshold
/// when set (used by threshold sweeps).
CoverageDistribution build_coverage(const CoverageSpec& spec,
                                    std::optional<double> threshold = std::nullopt);

/// True when `spec` (or a sub-network) is an SINR model whose coverage at
/// `threshold` needs more than `max_coverage` stations.
bool needs_simulation(const CoverageSpec& spec, double threshold, std::size_t max_coverage);

/// Geometric (log) or arithmetic grid of `points` values over [min, max].
std::vector<double> sweep_grid(const SweepSpec& sweep);

}  // namespace geocache::cli
