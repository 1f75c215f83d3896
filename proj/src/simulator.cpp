#include "geocache/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "geocache/error.hpp"
#include "geocache/kernels/kernels.hpp"

namespace geocache {
namespace {

constexpr double kPi = std::numbers::pi;

struct Tally {
  std::vector<std::size_t> coverage_counts;
  std::size_t hits = 0;

  void record(std::size_t covered) {
    if (coverage_counts.size() <= covered) coverage_counts.resize(covered + 1, 0);
    ++coverage_counts[covered];
  }
  void merge(const Tally& other) {
    if (coverage_counts.size() < other.coverage_counts.size()) {
      coverage_counts.resize(other.coverage_counts.size(), 0);
    }
    for (std::size_t m = 0; m < other.coverage_counts.size(); ++m) {
      coverage_counts[m] += other.coverage_counts[m];
    }
    hits += other.hits;
  }
};

Estimate proportion(std::size_t successes, std::size_t trials) {
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  return {p, std::sqrt(p * (1.0 - p) / n)};
}

void validate_config(const SimulationConfig& config) {
  std::visit([](const auto& params) { params.validate(); }, config.model);
  if (config.replications == 0) fail(Errc::invalid_argument, "replications must be >= 1");
  if (config.window_radius && !(*config.window_radius > 0.0)) {
    fail(Errc::invalid_argument, "window_radius must be positive");
  }
  if (config.shadowing && !(config.shadowing->sigma_db >= 0.0)) {
    fail(Errc::invalid_argument, "shadowing sigma_db must be >= 0");
  }
  if (!(config.interference_epsilon > 0.0)) {
    fail(Errc::invalid_argument, "interference_epsilon must be positive");
  }
}

// Runs `body(replication, tally)` over all replications, split into contiguous
// blocks per thread. Tallies are sums of counts, so the merge order is irrelevant.
template <class Body>
Tally run_replications(const SimulationConfig& config, Body body) {
  const std::size_t total = config.replications;
  const std::size_t workers = std::clamp<std::size_t>(config.threads, 1, total);
  std::vector<Tally> partial(workers);
  auto run_block = [&](std::size_t w) {
    const std::size_t begin = total * w / workers;
    const std::size_t end = total * (w + 1) / workers;
    for (std::size_t i = begin; i < end; ++i) body(i, partial[w]);
  };
  if (workers == 1) {
    run_block(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run_block, w);
  }
  Tally merged;
  for (const auto& t : partial) merged.merge(t);
  return merged;
}

SimulationReport make_report(const SimulationConfig& config, const Tally& tally, double radius) {
  SimulationReport report;
  report.replications_used = config.replications;
  report.window_radius = radius;
  if (const auto* sinr = std::get_if<SinrModelParams>(&config.model)) {
    const double mean_s = config.shadowing ? config.shadowing->mean() : 1.0;
    report.excluded_interference = excluded_interference(*sinr, mean_s, radius);
  }
  report.empirical_pmf.reserve(tally.coverage_counts.size());
  for (const std::size_t count : tally.coverage_counts) {
    report.empirical_pmf.push_back({count, proportion(count, config.replications)});
  }
  if (report.empirical_pmf.empty()) report.empirical_pmf.push_back({0, {0.0, 0.0}});
  return report;
}

}  // namespace

double LognormalShadowing::log_sigma() const noexcept {
  return sigma_db * std::numbers::ln10 / 10.0;
}

double LognormalShadowing::moment(double pathloss_exponent) const noexcept {
  const double s = log_sigma();
  return std::exp(2.0 * s * s / (pathloss_exponent * pathloss_exponent));
}

double LognormalShadowing::mean() const noexcept {
  const double s = log_sigma();
  return std::exp(0.5 * s * s);
}

double excluded_interference(const SinrModelParams& params, double shadowing_mean,
                             double window_radius) {
  const double beta = params.pathloss_exponent;
  return 2.0 * kPi * params.bs_intensity * shadowing_mean *
         std::pow(params.pathloss_constant, -beta) * std::pow(window_radius, 2.0 - beta) /
         (beta - 2.0);
}

double default_window_radius(const SimulationConfig& config) {
  if (const auto* boolean = std::get_if<BooleanModelParams>(&config.model)) {
    return boolean->coverage_radius;
  }
  const auto& sinr = std::get<SinrModelParams>(config.model);
  const double beta = sinr.pathloss_exponent;
  const double mean_s = config.shadowing ? config.shadowing->mean() : 1.0;
  const double nearest = 0.5 / std::sqrt(sinr.bs_intensity);
  const double serving = mean_s * std::pow(sinr.pathloss_constant * nearest, -beta);
  const double reference = std::max(sinr.noise_power, serving);
  const double target = config.interference_epsilon * reference;
  // Solve excluded_interference(R) = target for R.
  const double coefficient = 2.0 * kPi * sinr.bs_intensity * mean_s *
                             std::pow(sinr.pathloss_constant, -beta) / (beta - 2.0);
  const double radius = std::pow(target / coefficient, 1.0 / (2.0 - beta));
  return std::max(radius, 4.0 * nearest);
}

std::mt19937_64 replication_stream(std::uint64_t seed, std::uint64_t replication) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(replication),
                    static_cast<std::uint32_t>(replication >> 32)};
  return std::mt19937_64(seq);
}

std::size_t coverage_count_once(const ModelParams& model, double window_radius,
                                const std::optional<LognormalShadowing>& shadowing,
                                std::mt19937_64& rng) {
  const double radius_sq = window_radius * window_radius;

  if (const auto* boolean = std::get_if<BooleanModelParams>(&model)) {
    std::poisson_distribution<long> stations(boolean->bs_intensity * kPi * radius_sq);
    const long n = stations(rng);
    const double cover_sq = boolean->coverage_radius * boolean->coverage_radius;
    std::size_t covered = 0;
    for (long i = 0; i < n; ++i) {
      if (radius_sq * unit_interval(rng()) <= cover_sq) ++covered;
    }
    return covered;
  }

  const auto& sinr = std::get<SinrModelParams>(model);
  std::poisson_distribution<long> stations(sinr.bs_intensity * kPi * radius_sq);
  const long n = stations(rng);
  thread_local std::vector<double> power;
  power.resize(static_cast<std::size_t>(n));

  const double beta = sinr.pathloss_exponent;
  // (B r)^-beta with r^2 = R^2 U
  const double scale_sq = sinr.pathloss_constant * sinr.pathloss_constant * radius_sq;
  const bool quartic = beta == 4.0;
  std::normal_distribution<double> gaussian;
  const double log_sigma = shadowing ? shadowing->log_sigma() : 0.0;
  double total = 0.0;
  for (long i = 0; i < n; ++i) {
    const double dist_sq = scale_sq * unit_interval(rng());
    double p = quartic ? 1.0 / (dist_sq * dist_sq) : std::pow(dist_sq, -0.5 * beta);
    if (shadowing) p *= std::exp(log_sigma * gaussian(rng));
    power[static_cast<std::size_t>(i)] = p;
    total += p;
  }
  return kernels::active().count_sinr_covered(power, total, sinr.noise_power,
                                              sinr.sinr_threshold);
}

SimulationReport estimate_coverage_pmf(const SimulationConfig& config) {
  validate_config(config);
  const double radius = config.window_radius.value_or(default_window_radius(config));
  const Tally tally = run_replications(config, [&](std::size_t i, Tally& t) {
    auto rng = replication_stream(config.seed, i);
    t.record(coverage_count_once(config.model, radius, config.shadowing, rng));
  });
  return make_report(config, tally, radius);
}

SimulationReport estimate_hit_rate(const SimulationConfig& config) {
  validate_config(config);
  if (!config.popularity || !config.policy) {
    fail(Errc::invalid_argument, "hit-rate simulation needs a popularity law and a policy");
  }
  const auto& popularity = *config.popularity;
  const StaircaseSampler sampler(*config.policy);
  if (sampler.library_size() != popularity.library_size()) {
    fail(Errc::dimension_mismatch, "policy and popularity cover different library sizes");
  }
  std::vector<double> cdf(popularity.library_size());
  double running = 0.0;
  for (std::size_t j = 0; j < cdf.size(); ++j) {
    running += popularity[j];
    cdf[j] = running;
  }

  const double radius = config.window_radius.value_or(default_window_radius(config));
  const Tally tally = run_replications(config, [&](std::size_t i, Tally& t) {
    auto rng = replication_stream(config.seed, i);
    const std::size_t covered = coverage_count_once(config.model, radius, config.shadowing, rng);
    t.record(covered);
    const double r = unit_interval(rng()) * running;
    const auto requested = std::min<std::size_t>(
        static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), r) - cdf.begin()),
        cdf.size() - 1);
    bool hit = false;
    for (std::size_t s = 0; s < covered; ++s) {
      // One independent inventory per covering station; draw all of them so
      // the stream layout does not depend on early exits.
      hit = sampler.contains(unit_interval(rng()), requested) || hit;
    }
    if (hit) ++t.hits;
  });

  SimulationReport report = make_report(config, tally, radius);
  report.hit_rate = proportion(tally.hits, config.replications);
  return report;
}

std::optional<CoverageDistribution> analytic_coverage(const SimulationConfig& config) {
  if (const auto* sinr = std::get_if<SinrModelParams>(&config.model)) {
    SinrModelParams params = *sinr;
    if (config.shadowing) params.shadowing_moment = config.shadowing->moment(params.pathloss_exponent);
    try {
      return sinr_coverage(params);
    } catch (const Error& e) {
      if (e.code() == Errc::unsupported_dimension) return std::nullopt;
      throw;
    }
  }
  BooleanModelParams params = std::get<BooleanModelParams>(config.model);
  if (config.window_radius && *config.window_radius < params.coverage_radius) {
    return std::nullopt;
  }
  for (;;) {
    try {
      return boolean_coverage(params);
    } catch (const Error& e) {
      if (e.code() != Errc::invalid_argument || params.truncation > 100000) throw;
      params.truncation *= 2;
    }
  }
}

}  // namespace geocache
