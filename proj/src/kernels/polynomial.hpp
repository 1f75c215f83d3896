#pragma once

// Helpers shared by the kernel variants. Both variants must build the same
// coefficients so their results stay bit-identical.

#include <cstddef>
#include <span>
#include <vector>

namespace geocache::kernels::detail {

/// Coefficients c_k = (k + 1) p_{k+1}, k = 0..M-1, of the derivative polynomial
/// sum_m m p_m q^(m-1). Empty when M = 0.
inline std::vector<double> derivative_coefficients(std::span<const double> pmf) {
  std::vector<double> c;
  if (pmf.size() > 1) {
    c.resize(pmf.size() - 1);
    for (std::size_t k = 0; k + 1 < pmf.size(); ++k) {
      c[k] = static_cast<double>(k + 1) * pmf[k + 1];
    }
  }
  return c;
}

inline double horner(std::span<const double> coeffs, double q) noexcept {
  if (coeffs.empty()) return 0.0;
  double acc = coeffs.back();
  for (std::size_t k = coeffs.size() - 1; k-- > 0;) {
    acc = acc * q + coeffs[k];
  }
  return acc;
}

}  // namespace geocache::kernels::detail
