#include <cstddef>
#include <span>

#include "geocache/kernels/kernels.hpp"
#include "polynomial.hpp"

namespace geocache::kernels::scalar {

void miss_probabilities(std::span<const double> pmf, std::span<const double> b,
                        std::span<double> out) {
  for (std::size_t j = 0; j < b.size(); ++j) {
    out[j] = detail::horner(pmf, 1.0 - b[j]);
  }
}

void marginal_gains(std::span<const double> pmf, std::span<const double> a,
                    std::span<const double> b, std::span<double> out) {
  const auto coeffs = detail::derivative_coefficients(pmf);
  for (std::size_t j = 0; j < b.size(); ++j) {
    out[j] = a[j] * detail::horner(coeffs, 1.0 - b[j]);
  }
}

void primal_responses(double mu, std::span<const double> a, std::span<const double> pmf,
                      double mean, std::size_t steps, std::span<double> out) {
  const auto coeffs = detail::derivative_coefficients(pmf);
  const double p1 = pmf.size() > 1 ? pmf[1] : 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double aj = a[j];
    if (mu <= 0.0 || aj * p1 > mu) {
      out[j] = 1.0;
    } else if (aj * mean < mu) {
      out[j] = 0.0;
    } else {
      // gain(b) is non-increasing in b: keep gain(lo) > mu >= gain(hi).
      double lo = 0.0;
      double hi = 1.0;
      for (std::size_t s = 0; s < steps; ++s) {
        const double mid = 0.5 * (lo + hi);
        const double gain = aj * detail::horner(coeffs, 1.0 - mid);
        if (gain > mu) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      out[j] = 0.5 * (lo + hi);
    }
  }
}

std::size_t count_sinr_covered(std::span<const double> power, double total, double noise,
                               double threshold) {
  const double received = noise + total;
  std::size_t count = 0;
  for (const double p : power) {
    if (p > threshold * (received - p)) ++count;
  }
  return count;
}

}  // namespace geocache::kernels::scalar
