#include <boost/math/distributions/chi_squared.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "geocache/error.hpp"
#include "geocache/optimizer.hpp"
#include "geocache/simulator.hpp"

using namespace geocache;
using std::numbers::pi;

namespace {

BooleanModelParams boolean_with_mean(double nu, std::size_t truncation = 30) {
  BooleanModelParams p;
  p.bs_intensity = nu / pi;
  p.coverage_radius = 1.0;
  p.truncation = truncation;
  return p;
}

double frequency(const SimulationReport& r, std::size_t m) {
  return m < r.empirical_pmf.size() ? r.empirical_pmf[m].frequency.value : 0.0;
}

}  // namespace

TEST_CASE("Boolean coverage counts follow the Poisson law") {
  SimulationConfig config;
  config.model = boolean_with_mean(1.0);
  config.replications = 100000;
  config.seed = 2016;
  const auto report = estimate_coverage_pmf(config);
  CHECK(report.replications_used == 100000);
  CHECK(report.window_radius == 1.0);

  // Chi-square goodness of fit with bins 0..4 and a pooled tail.
  const std::size_t bins = 6;
  std::vector<double> observed(bins, 0.0);
  for (std::size_t m = 0; m < report.empirical_pmf.size(); ++m) {
    observed[std::min(m, bins - 1)] += static_cast<double>(report.empirical_pmf[m].count);
  }
  double statistic = 0.0;
  double tail = 1.0;
  for (std::size_t m = 0; m < bins; ++m) {
    const double prob = m + 1 < bins ? std::exp(-1.0) / std::tgamma(double(m) + 1.0) : tail;
    tail -= prob;
    const double expected = prob * 100000.0;
    statistic += (observed[m] - expected) * (observed[m] - expected) / expected;
  }
  const boost::math::chi_squared chi(bins - 1);
  CHECK(statistic < boost::math::quantile(chi, 0.99));
}

TEST_CASE("Boolean empirical p_0 matches e^-pi") {
  SimulationConfig config;
  config.model = BooleanModelParams::from_threshold(1.0, 1.0, 4.0, 1.0, 30);
  config.replications = 100000;
  config.seed = 5;
  const auto report = estimate_coverage_pmf(config);
  const auto& p0 = report.empirical_pmf[0].frequency;
  CHECK(std::abs(p0.value - std::exp(-pi)) < 3.0 * p0.std_error);
}

TEST_CASE("SINR coverage counts respect the ceil(1/T) cap") {
  for (double threshold : {1.0, 1.7, 0.6}) {
    SinrModelParams params;
    params.sinr_threshold = threshold;
    auto rng = replication_stream(3, 0);
    const double radius = 25.0;
    for (int i = 0; i < 300; ++i) {
      REQUIRE(coverage_count_once(params, radius, std::nullopt, rng) <= max_coverage_count(threshold));
    }
  }
}

TEST_CASE("SINR simulation agrees with the analytic law") {
  SinrModelParams params;
  params.sinr_threshold = 1.0;
  SimulationConfig config;
  config.model = params;
  config.replications = 30000;
  config.seed = 17;
  const auto report = estimate_coverage_pmf(config);
  REQUIRE(report.empirical_pmf.size() <= 2);
  const auto& p1 = report.empirical_pmf.at(1).frequency;
  CHECK(std::abs(p1.value - 2.0 / pi) < 3.0 * p1.std_error);
  CHECK(report.excluded_interference > 0.0);

  SUBCASE("noise and lognormal shadowing enter through E[S^(2/beta)]") {
    SinrModelParams noisy;
    noisy.sinr_threshold = 0.5;
    noisy.noise_power = 0.2;
    noisy.bs_intensity = 0.5;
    SimulationConfig c;
    c.model = noisy;
    c.shadowing = LognormalShadowing{4.0};
    c.replications = 30000;
    c.seed = 23;
    const auto analytic = analytic_coverage(c);
    REQUIRE(analytic.has_value());
    const auto sim = estimate_coverage_pmf(c);
    for (std::size_t m = 0; m <= analytic->max_coverage(); ++m) {
      const double se = std::max(sim.empirical_pmf.size() > m ? sim.empirical_pmf[m].frequency.std_error : 0.0, 1e-4);
      CAPTURE(m);
      CHECK(std::abs(frequency(sim, m) - (*analytic)[m]) < 3.5 * se);
    }
  }
}

TEST_CASE("lognormal shadowing moment") {
  const LognormalShadowing shadow{6.0};
  std::mt19937_64 rng(1);
  std::normal_distribution<double> z;
  double acc = 0.0;
  const int n = 400000;
  for (int i = 0; i < n; ++i) acc += std::pow(std::exp(shadow.log_sigma() * z(rng)), 2.0 / 4.0);
  CHECK(acc / n == doctest::Approx(shadow.moment(4.0)).epsilon(5e-3));
  CHECK(LognormalShadowing{0.0}.moment(4.0) == 1.0);
}

TEST_CASE("hit-rate simulation") {
  const auto popularity = PopularityDistribution::from_weights(std::vector<double>{0.6, 0.4});
  SimulationConfig config;
  config.model = boolean_with_mean(1.0);
  config.replications = 100000;
  config.seed = 31;
  config.popularity = popularity;

  SUBCASE("everything cached") {
    config.policy = PlacementPolicy{{1.0, 1.0}, 2};
    const auto r = estimate_hit_rate(config);
    CHECK(std::abs(r.hit_rate->value - (1.0 - frequency(r, 0))) < 1e-15);
    CHECK(std::abs(r.hit_rate->value - (1.0 - std::exp(-1.0))) < 3.0 * r.hit_rate->std_error);
  }
  SUBCASE("nothing cached") {
    config.policy = PlacementPolicy{{0.0, 0.0}, 1};
    CHECK(estimate_hit_rate(config).hit_rate->value == 0.0);
  }
  SUBCASE("randomized policy matches the analytic objective") {
    config.policy = PlacementPolicy{{0.7, 0.3}, 1};
    const auto r = estimate_hit_rate(config);
    const auto cov = boolean_coverage(boolean_with_mean(1.0));
    const double analytic = hit_probability(*config.policy, popularity, cov);
    CHECK(std::abs(r.hit_rate->value - analytic) < 3.0 * r.hit_rate->std_error);
  }
  SUBCASE("missing inputs") {
    config.policy.reset();
    CHECK_THROWS_AS(estimate_hit_rate(config), Error);
  }
}

TEST_CASE("reports depend only on configuration and seed") {
  SinrModelParams params;
  params.sinr_threshold = 0.6;
  SimulationConfig config;
  config.model = params;
  config.replications = 2000;
  config.seed = 77;
  config.popularity = PopularityDistribution::zipf(6, 0.8);
  config.policy = PlacementPolicy{{0.9, 0.6, 0.5}, 2};
  config.policy->probabilities.resize(6, 0.0);

  const auto serial = estimate_hit_rate(config);
  const auto again = estimate_hit_rate(config);
  config.threads = 3;
  const auto parallel = estimate_hit_rate(config);
  for (const auto* other : {&again, &parallel}) {
    CHECK(other->hit_rate->value == serial.hit_rate->value);
    REQUIRE(other->empirical_pmf.size() == serial.empirical_pmf.size());
    for (std::size_t m = 0; m < serial.empirical_pmf.size(); ++m) {
      CHECK(other->empirical_pmf[m].count == serial.empirical_pmf[m].count);
    }
  }
  config.seed = 78;
  config.threads = 1;
  CHECK(estimate_hit_rate(config).hit_rate->value != serial.hit_rate->value);
}

TEST_CASE("sparse networks are almost never covered") {
  SimulationConfig config;
  BooleanModelParams sparse;
  sparse.bs_intensity = 1e-7;
  sparse.coverage_radius = 1.0;
  sparse.truncation = 3;
  config.model = sparse;
  config.replications = 10000;
  const auto r = estimate_coverage_pmf(config);
  CHECK(frequency(r, 0) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("window radius bounds the excluded interference") {
  SinrModelParams params;
  params.bs_intensity = 2.0;
  params.pathloss_exponent = 3.5;
  SimulationConfig config;
  config.model = params;
  const double radius = default_window_radius(config);
  const double nearest = 0.5 / std::sqrt(params.bs_intensity);
  const double serving = std::pow(nearest, -params.pathloss_exponent);
  CHECK(excluded_interference(params, 1.0, radius) == doctest::Approx(1e-4 * serving).epsilon(1e-9));

  params.noise_power = 1e6;
  config.model = params;
  const double noisy = default_window_radius(config);
  CHECK(excluded_interference(params, 1.0, noisy) <= 1e-4 * 1e6 * (1.0 + 1e-9));
}
