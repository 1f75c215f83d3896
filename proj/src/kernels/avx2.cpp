// Compiled with -mavx2 and -ffp-contract=off; only called after a CPUID check.

#include <immintrin.h>

#include <cstddef>
#include <span>

#include "geocache/kernels/kernels.hpp"
#include "polynomial.hpp"

namespace geocache::kernels::avx2 {
namespace {

constexpr std::size_t kLanes = 4;

inline __m256d horner4(std::span<const double> coeffs, __m256d q) {
  if (coeffs.empty()) return _mm256_setzero_pd();
  __m256d acc = _mm256_set1_pd(coeffs.back());
  for (std::size_t k = coeffs.size() - 1; k-- > 0;) {
    acc = _mm256_add_pd(_mm256_mul_pd(acc, q), _mm256_set1_pd(coeffs[k]));
  }
  return acc;
}

}  // namespace

void miss_probabilities(std::span<const double> pmf, std::span<const double> b,
                        std::span<double> out) {
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t j = 0;
  for (; j + kLanes <= b.size(); j += kLanes) {
    const __m256d q = _mm256_sub_pd(one, _mm256_loadu_pd(b.data() + j));
    _mm256_storeu_pd(out.data() + j, horner4(pmf, q));
  }
  scalar::miss_probabilities(pmf, b.subspan(j), out.subspan(j));
}

void marginal_gains(std::span<const double> pmf, std::span<const double> a,
                    std::span<const double> b, std::span<double> out) {
  const auto coeffs = detail::derivative_coefficients(pmf);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t j = 0;
  for (; j + kLanes <= b.size(); j += kLanes) {
    const __m256d q = _mm256_sub_pd(one, _mm256_loadu_pd(b.data() + j));
    const __m256d aj = _mm256_loadu_pd(a.data() + j);
    _mm256_storeu_pd(out.data() + j, _mm256_mul_pd(aj, horner4(coeffs, q)));
  }
  scalar::marginal_gains(pmf, a.subspan(j), b.subspan(j), out.subspan(j));
}

void primal_responses(double mu, std::span<const double> a, std::span<const double> pmf,
                      double mean, std::size_t steps, std::span<double> out) {
  if (mu <= 0.0) {
    for (auto& v : out.first(a.size())) v = 1.0;
    return;
  }
  const auto coeffs = detail::derivative_coefficients(pmf);
  const __m256d vmu = _mm256_set1_pd(mu);
  const __m256d vp1 = _mm256_set1_pd(pmf.size() > 1 ? pmf[1] : 0.0);
  const __m256d vmean = _mm256_set1_pd(mean);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d zero = _mm256_setzero_pd();
  const __m256d half = _mm256_set1_pd(0.5);

  std::size_t j = 0;
  for (; j + kLanes <= a.size(); j += kLanes) {
    const __m256d aj = _mm256_loadu_pd(a.data() + j);
    __m256d lo = zero;
    __m256d hi = one;
    for (std::size_t s = 0; s < steps; ++s) {
      const __m256d mid = _mm256_mul_pd(half, _mm256_add_pd(lo, hi));
      const __m256d gain = _mm256_mul_pd(aj, horner4(coeffs, _mm256_sub_pd(one, mid)));
      const __m256d above = _mm256_cmp_pd(gain, vmu, _CMP_GT_OQ);
      lo = _mm256_blendv_pd(lo, mid, above);
      hi = _mm256_blendv_pd(mid, hi, above);
    }
    __m256d result = _mm256_mul_pd(half, _mm256_add_pd(lo, hi));
    const __m256d saturated = _mm256_cmp_pd(_mm256_mul_pd(aj, vp1), vmu, _CMP_GT_OQ);
    const __m256d priced_out = _mm256_cmp_pd(_mm256_mul_pd(aj, vmean), vmu, _CMP_LT_OQ);
    result = _mm256_blendv_pd(result, zero, priced_out);
    result = _mm256_blendv_pd(result, one, saturated);
    _mm256_storeu_pd(out.data() + j, result);
  }
  scalar::primal_responses(mu, a.subspan(j), pmf, mean, steps, out.subspan(j));
}

std::size_t count_sinr_covered(std::span<const double> power, double total, double noise,
                               double threshold) {
  const __m256d received = _mm256_set1_pd(noise + total);
  const __m256d vt = _mm256_set1_pd(threshold);
  std::size_t count = 0;
  std::size_t i = 0;
  for (; i + kLanes <= power.size(); i += kLanes) {
    const __m256d p = _mm256_loadu_pd(power.data() + i);
    const __m256d rhs = _mm256_mul_pd(vt, _mm256_sub_pd(received, p));
    const int mask = _mm256_movemask_pd(_mm256_cmp_pd(p, rhs, _CMP_GT_OQ));
    count += static_cast<std::size_t>(__builtin_popcount(static_cast<unsigned>(mask)));
  }
  return count + scalar::count_sinr_covered(power.subspan(i), total, noise, threshold);
}

}  // namespace geocache::kernels::avx2
