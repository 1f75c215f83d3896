#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <variant>
#include <vector>

#include "geocache/coverage.hpp"
#include "geocache/placement.hpp"
#include "geocache/popularity.hpp"

namespace geocache {

/// Lognormal shadowing S = exp(sigma Z), sigma = sigma_db * ln(10) / 10.
struct LognormalShadowing {
  double sigma_db = 0.0;

  double log_sigma() const noexcept;
  /// E[S^(2/beta)] = exp(2 sigma^2 / beta^2).
  double moment(double pathloss_exponent) const noexcept;
  double mean() const noexcept;
};

using ModelParams = std::variant<SinrModelParams, BooleanModelParams>;

struct SimulationConfig {
  ModelParams model;
  std::optional<double> window_radius;  // default_window_radius() when empty
  std::size_t replications = 100000;
  std::uint64_t seed = 1;
  std::optional<PopularityDistribution> popularity;  // required for hit rates
  std::optional<PlacementPolicy> policy;             // required for hit rates
  std::optional<LognormalShadowing> shadowing;       // none: S = 1
  std::size_t threads = 1;
  /// Relative bound on the interference dropped outside the window.
  double interference_epsilon = 1e-4;
};

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

struct CoverageBin {
  std::size_t count = 0;
  Estimate frequency;
};

struct SimulationReport {
  std::optional<Estimate> hit_rate;
  std::vector<CoverageBin> empirical_pmf;  // index m = coverage number
  std::size_t replications_used = 0;
  double window_radius = 0.0;
  /// Mean interference outside the window (SINR model; 0 for Boolean).
  double excluded_interference = 0.0;
};

/// Mean received power beyond radius r from an infinite Poisson field:
/// 2 pi lambda E[S] B^-beta r^(2-beta) / (beta - 2).
double excluded_interference(const SinrModelParams& params, double shadowing_mean,
                             double window_radius);

/// Smallest window whose excluded interference is below epsilon times the
/// noise power (W > 0) or the mean received power at the mean nearest-station
/// distance 1/(2 sqrt(lambda)) (W = 0). For the Boolean model, R_b.
double default_window_radius(const SimulationConfig& config);

/// Per-replication random stream derived from (seed, replication).
std::mt19937_64 replication_stream(std::uint64_t seed, std::uint64_t replication);

/// Draws one network realization and returns the number of covering stations.
std::size_t coverage_count_once(const ModelParams& model, double window_radius,
                                const std::optional<LognormalShadowing>& shadowing,
                                std::mt19937_64& rng);

SimulationReport estimate_coverage_pmf(const SimulationConfig& config);

/// Simulated hit probability: the typical user requests a content drawn from
/// the popularity law and hits if any covering station, each with an
/// independent staircase inventory, holds it.
SimulationReport estimate_hit_rate(const SimulationConfig& config);

/// Analytic coverage law matching the configured model, if one exists
/// within the quadrature dimension cap.
std::optional<CoverageDistribution> analytic_coverage(const SimulationConfig& config);

}  // namespace geocache
