#include "geocache/numeric.hpp"

#include <cmath>
#include <cstddef>

namespace geocache {
namespace {

struct Neumaier {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) noexcept {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      carry += (sum - t) + x;
    } else {
      carry += (x - t) + sum;
    }
    sum = t;
  }
  double value() const noexcept { return sum + carry; }
};

}  // namespace

double compensated_sum(std::span<const double> values) noexcept {
  Neumaier acc;
  for (const double v : values) acc.add(v);
  return acc.value();
}

double compensated_dot(std::span<const double> x, std::span<const double> y) noexcept {
  Neumaier acc;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) acc.add(x[i] * y[i]);
  return acc.value();
}

}  // namespace geocache
