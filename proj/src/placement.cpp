#include "geocache/placement.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "geocache/error.hpp"
#include "geocache/numeric.hpp"

namespace geocache {
namespace {

// Budget sums within this of K are treated as exactly K when laying out rows.
constexpr double kFullBudgetSlack = 1e-9;

}  // namespace

double PlacementPolicy::total() const noexcept { return compensated_sum(probabilities); }

std::optional<PolicyViolation> validate(const PlacementPolicy& policy, std::size_t library_size,
                                        double tolerance) {
  using Kind = PolicyViolation::Kind;
  if (policy.cache_size == 0) {
    return PolicyViolation{Kind::cache_size, 0, 0.0, "cache size K must be at least 1"};
  }
  if (policy.probabilities.size() != library_size) {
    std::ostringstream os;
    os << "policy has " << policy.probabilities.size() << " entries for a library of "
       << library_size;
    return PolicyViolation{Kind::length, 0, static_cast<double>(policy.probabilities.size()),
                           os.str()};
  }
  for (std::size_t j = 0; j < policy.probabilities.size(); ++j) {
    const double b = policy.probabilities[j];
    if (!std::isfinite(b) || b < -tolerance || b > 1.0 + tolerance) {
      std::ostringstream os;
      os << "b_" << (j + 1) << " = " << b << " is outside [0, 1]";
      return PolicyViolation{Kind::range, j, b, os.str()};
    }
  }
  const double total = policy.total();
  if (total > static_cast<double>(policy.cache_size) + tolerance) {
    std::ostringstream os;
    os.precision(12);
    os << "sum of b_j = " << total << " exceeds cache size " << policy.cache_size;
    return PolicyViolation{Kind::budget, 0, total, os.str()};
  }
  return std::nullopt;
}

void require_valid(const PlacementPolicy& policy, std::size_t library_size) {
  if (auto violation = validate(policy, library_size)) {
    fail(violation->kind == PolicyViolation::Kind::length ? Errc::dimension_mismatch
                                                          : Errc::invalid_argument,
         "invalid placement policy: " + violation->message);
  }
}

StaircaseSampler::StaircaseSampler(const PlacementPolicy& policy)
    : cache_size_(policy.cache_size) {
  require_valid(policy, policy.probabilities.size());
  const auto& b = policy.probabilities;
  bounds_.resize(b.size() + 1);
  bounds_[0] = 0.0;
  for (std::size_t j = 0; j < b.size(); ++j) {
    bounds_[j + 1] = bounds_[j] + std::clamp(b[j], 0.0, 1.0);
  }
  const double capacity = static_cast<double>(cache_size_);
  if (std::abs(bounds_.back() - capacity) <= kFullBudgetSlack) {
    bounds_.back() = capacity;
    for (auto& x : bounds_) x = std::min(x, capacity);
  }

  row_ends_.resize(cache_size_);
  row_contents_.resize(cache_size_);
  for (std::size_t j = 0; j < b.size(); ++j) {
    const double lo = bounds_[j];
    const double hi = bounds_[j + 1];
    if (!(hi > lo)) continue;
    const double first_row = std::floor(lo);
    const auto r = static_cast<std::size_t>(first_row);
    if (r >= cache_size_) break;
    row_ends_[r].push_back(std::min(hi - first_row, 1.0));
    row_contents_[r].push_back(j);
    if (hi > first_row + 1.0 && r + 1 < cache_size_) {
      row_ends_[r + 1].push_back(hi - (first_row + 1.0));
      row_contents_[r + 1].push_back(j);
    }
  }
}

Inventory StaircaseSampler::sample(double u) const {
  if (!(u >= 0.0 && u < 1.0)) {
    fail(Errc::invalid_argument, "staircase coordinate u must lie in [0, 1)");
  }
  Inventory inventory;
  inventory.reserve(cache_size_);
  for (std::size_t r = 0; r < cache_size_; ++r) {
    const auto& ends = row_ends_[r];
    const auto it = std::upper_bound(ends.begin(), ends.end(), u);
    if (it != ends.end()) {
      inventory.push_back(row_contents_[r][static_cast<std::size_t>(it - ends.begin())]);
    }
  }
  std::sort(inventory.begin(), inventory.end());
  inventory.erase(std::unique(inventory.begin(), inventory.end()), inventory.end());
  return inventory;
}

bool StaircaseSampler::contains(double u, std::size_t content) const {
  const double lo = bounds_[content];
  const double hi = bounds_[content + 1];
  if (!(hi > lo)) return false;
  const double first_row = std::floor(lo);
  if (first_row >= static_cast<double>(cache_size_)) return false;
  const double start = lo - first_row;
  if (u >= start && u < std::min(hi - first_row, 1.0)) return true;
  return hi > first_row + 1.0 && first_row + 1.0 < static_cast<double>(cache_size_) &&
         u < hi - (first_row + 1.0);
}

Inventory sample_inventory(const PlacementPolicy& policy, double u) {
  return StaircaseSampler(policy).sample(u);
}

std::vector<Inventory> sample_many(const PlacementPolicy& policy, std::size_t count,
                                   std::uint64_t seed) {
  const StaircaseSampler sampler(policy);
  std::mt19937_64 rng(seed);
  std::vector<Inventory> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(sampler.sample(unit_interval(rng())));
  return out;
}

}  // namespace geocache
