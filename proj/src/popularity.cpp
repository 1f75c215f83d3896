#include "geocache/popularity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "geocache/error.hpp"
#include "geocache/numeric.hpp"

namespace geocache {

PopularityDistribution PopularityDistribution::zipf(std::size_t library_size, double exponent) {
  if (library_size == 0) fail(Errc::invalid_argument, "zipf: library_size must be at least 1");
  if (!std::isfinite(exponent) || exponent < 0.0) {
    fail(Errc::invalid_argument, "zipf: exponent must be finite and non-negative");
  }
  std::vector<double> weights(library_size);
  for (std::size_t j = 0; j < library_size; ++j) {
    weights[j] = std::pow(static_cast<double>(j + 1), -exponent);
  }
  const double normalizer = compensated_sum(weights);
  for (auto& w : weights) w /= normalizer;

  PopularityDistribution dist(std::move(weights));
  dist.zipf_exponent_ = exponent;
  dist.normalizer_ = normalizer;
  return dist;
}

PopularityDistribution PopularityDistribution::from_weights(std::span<const double> weights) {
  if (weights.empty()) fail(Errc::invalid_argument, "popularity weights are empty");
  for (std::size_t j = 0; j < weights.size(); ++j) {
    if (!std::isfinite(weights[j]) || weights[j] < 0.0) {
      fail(Errc::invalid_argument,
           "popularity weight " + std::to_string(j) + " is negative or not finite");
    }
    if (j > 0 && weights[j] > weights[j - 1]) {
      fail(Errc::ordering_violation, "popularity weights increase at index " +
                                         std::to_string(j) +
                                         "; contents must be ordered by popularity");
    }
  }
  const double total = compensated_sum(weights);
  if (!(total > 0.0)) fail(Errc::invalid_argument, "popularity weights are all zero");

  std::vector<double> probabilities(weights.begin(), weights.end());
  for (auto& p : probabilities) p /= total;
  return PopularityDistribution(std::move(probabilities));
}

double PopularityDistribution::head_mass(std::size_t count) const {
  count = std::min(count, probabilities_.size());
  return compensated_sum(std::span<const double>(probabilities_).first(count));
}

}  // namespace geocache
