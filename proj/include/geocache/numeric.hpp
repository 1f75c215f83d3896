#pragma once

#include <span>

namespace geocache {

/// Neumaier-compensated sum.
double compensated_sum(std::span<const double> values) noexcept;

/// Compensated dot product of two equally sized ranges.
double compensated_dot(std::span<const double> x, std::span<const double> y) noexcept;

}  // namespace geocache
