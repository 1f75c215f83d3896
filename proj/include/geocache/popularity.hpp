#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace geocache {

/// Request probabilities a_1 >= a_2 >= ... >= a_J over a content library.
/// Index 0 is the most popular content. Immutable once built.
class PopularityDistribution {
 public:
  /// a_j = j^-exponent / sum_k k^-exponent for j = 1..library_size.
  static PopularityDistribution zipf(std::size_t library_size, double exponent);

  /// Normalizes non-negative, non-increasing weights. Unsorted input is
  /// rejected with Errc::ordering_violation rather than silently sorted.
  static PopularityDistribution from_weights(std::span<const double> weights);

  std::span<const double> probabilities() const noexcept { return probabilities_; }
  std::size_t library_size() const noexcept { return probabilities_.size(); }
  double operator[](std::size_t j) const { return probabilities_[j]; }

  std::optional<double> zipf_exponent() const noexcept { return zipf_exponent_; }
  std::optional<double> normalizer() const noexcept { return normalizer_; }

  /// Sum of the `count` largest probabilities.
  double head_mass(std::size_t count) const;

 private:
  explicit PopularityDistribution(std::vector<double> probabilities)
      : probabilities_(std::move(probabilities)) {}

  std::vector<double> probabilities_;
  std::optional<double> zipf_exponent_;
  std::optional<double> normalizer_;
};

}  // namespace geocache
