#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace geocache {

/// Per-content caching probabilities b_j with a cache budget of K slots.
/// Construction does not validate; see validate().
struct PlacementPolicy {
  std::vector<double> probabilities;
  std::size_t cache_size = 1;

  double total() const noexcept;
};

/// Content indices (0-based, ascending) held by one cache.
using Inventory = std::vector<std::size_t>;

struct PolicyViolation {
  enum class Kind { length, range, budget, cache_size };
  Kind kind;
  std::size_t index;  // offending content for Kind::range
  double value;
  std::string message;
};

/// Empty when the policy is feasible for a library of `library_size` contents:
/// 0 <= b_j <= 1 and sum b_j <= K, both within `tolerance`.
std::optional<PolicyViolation> validate(const PlacementPolicy& policy,
                                        std::size_t library_size,
                                        double tolerance = 1e-9);

/// Throws Errc::invalid_argument on the first violation.
void require_valid(const PlacementPolicy& policy, std::size_t library_size);

/// Staircase realization of a placement policy: the b_j are laid end to end
/// over K unit rows, and a single coordinate u in [0, 1) picks whichever
/// content occupies u in each row. Content j is selected with probability
/// exactly b_j over uniform u, and at most K distinct contents are chosen.
class StaircaseSampler {
 public:
  explicit StaircaseSampler(const PlacementPolicy& policy);

  Inventory sample(double u) const;
  bool contains(double u, std::size_t content) const;

  std::size_t library_size() const noexcept { return bounds_.size() - 1; }
  std::size_t cache_size() const noexcept { return cache_size_; }

 private:
  // bounds_[j] .. bounds_[j+1] is content j's segment on the unrolled line.
  std::vector<double> bounds_;
  std::size_t cache_size_;
  // Per row: right ends (in-row coordinates) of consecutive segments and
  // their contents; each segment starts where the previous one ends.
  std::vector<std::vector<double>> row_ends_;
  std::vector<std::vector<std::size_t>> row_contents_;
};

/// Inventory picked by coordinate u; u must lie in [0, 1).
Inventory sample_inventory(const PlacementPolicy& policy, double u);

/// `count` inventories from independent uniform coordinates of a seeded stream.
std::vector<Inventory> sample_many(const PlacementPolicy& policy, std::size_t count,
                                   std::uint64_t seed);

/// Uniform double in [0, 1) from the top 53 bits of a 64-bit draw.
inline double unit_interval(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace geocache
