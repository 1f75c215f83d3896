#pragma once

// Random instance generators shared by the property tests.

#include <cstddef>
#include <random>
#include <vector>

#include "geocache/coverage.hpp"
#include "geocache/placement.hpp"
#include "geocache/popularity.hpp"

namespace geocache::testing {

inline double uniform(std::mt19937_64& rng, double lo = 0.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::size_t uniform_index(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

/// Random pmf over 0..max_m with normalized exponential weights.
inline CoverageDistribution random_coverage(std::mt19937_64& rng, std::size_t max_m) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> w(max_m + 1);
  double total = 0.0;
  for (auto& x : w) total += (x = expo(rng));
  for (auto& x : w) x /= total;
  return CoverageDistribution::from_pmf(std::move(w));
}

/// Random feasible policy: uniform b_j, scaled down when the budget is exceeded.
inline PlacementPolicy random_policy(std::mt19937_64& rng, std::size_t library,
                                     std::size_t cache_size) {
  PlacementPolicy policy{std::vector<double>(library), cache_size};
  double total = 0.0;
  for (auto& b : policy.probabilities) total += (b = uniform(rng));
  if (total > static_cast<double>(cache_size)) {
    const double scale = static_cast<double>(cache_size) / total;
    for (auto& b : policy.probabilities) b *= scale;
  }
  return policy;
}

/// Random policy whose entries sum exactly (up to rounding) to K.
inline PlacementPolicy random_full_policy(std::mt19937_64& rng, std::size_t library,
                                          std::size_t cache_size) {
  // Start from K/J everywhere and move mass between random pairs.
  PlacementPolicy policy{std::vector<double>(library, static_cast<double>(cache_size) /
                                                          static_cast<double>(library)),
                         cache_size};
  auto& b = policy.probabilities;
  for (std::size_t step = 0; step < 4 * library; ++step) {
    const std::size_t i = uniform_index(rng, 0, library - 1);
    const std::size_t j = uniform_index(rng, 0, library - 1);
    if (i == j) continue;
    const double room = std::min(1.0 - b[i], b[j]);
    const double delta = uniform(rng) * room;
    b[i] += delta;
    b[j] -= delta;
  }
  return policy;
}

}  // namespace geocache::testing
