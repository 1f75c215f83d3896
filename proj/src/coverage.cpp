#include "geocache/coverage.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/random/sobol.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "geocache/error.hpp"
#include "geocache/numeric.hpp"

namespace geocache {
namespace {

constexpr double kPi = std::numbers::pi;

// Quadrature noise in the alternating sum below this is clamped to zero;
// anything more negative means the integrals are wrong.
constexpr double kNegativeFailure = -1e-6;

std::string format_value(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void require_exponent(double beta, const char* where) {
  if (!std::isfinite(beta) || beta <= 2.0) {
    fail(Errc::invalid_argument,
         std::string(where) + ": path-loss exponent must exceed 2, got " + format_value(beta));
  }
}

}  // namespace

CoverageDistribution CoverageDistribution::from_pmf(std::vector<double> pmf, double tolerance,
                                                    double truncation_error) {
  if (pmf.empty()) fail(Errc::invalid_argument, "coverage pmf is empty");
  if (!(tolerance >= 0.0)) fail(Errc::invalid_argument, "coverage tolerance must be >= 0");
  for (std::size_t m = 0; m < pmf.size(); ++m) {
    const double p = pmf[m];
    if (!std::isfinite(p) || p < -tolerance || p > 1.0 + tolerance) {
      fail(Errc::invalid_argument,
           "coverage probability p_" + std::to_string(m) + " = " + format_value(p) +
               " is outside [0, 1]");
    }
    pmf[m] = std::clamp(p, 0.0, 1.0);
  }
  const double total = compensated_sum(pmf);
  if (std::abs(total - 1.0) > tolerance) {
    fail(Errc::invalid_argument,
         "coverage pmf sums to " + format_value(total) + ", not 1 within " +
             format_value(tolerance));
  }
  return CoverageDistribution(std::move(pmf), tolerance, truncation_error);
}

CoverageDistribution CoverageDistribution::none() { return from_pmf({1.0}); }

void SinrModelParams::validate() const {
  if (!std::isfinite(bs_intensity) || bs_intensity <= 0.0) {
    fail(Errc::invalid_argument, "SINR model: bs_intensity must be positive");
  }
  require_exponent(pathloss_exponent, "SINR model");
  if (!std::isfinite(pathloss_constant) || pathloss_constant <= 0.0) {
    fail(Errc::invalid_argument, "SINR model: pathloss_constant must be positive");
  }
  if (!std::isfinite(noise_power) || noise_power < 0.0) {
    fail(Errc::invalid_argument, "SINR model: noise_power must be non-negative");
  }
  if (!std::isfinite(sinr_threshold) || sinr_threshold <= 0.0) {
    fail(Errc::invalid_argument, "SINR model: sinr_threshold must be positive");
  }
  if (!std::isfinite(shadowing_moment) || shadowing_moment <= 0.0) {
    fail(Errc::invalid_argument, "SINR model: shadowing_moment must be positive");
  }
  if (quadrature_points == 0) {
    fail(Errc::invalid_argument, "SINR model: quadrature_points must be at least 1");
  }
}

double SinrModelParams::density_constant() const noexcept {
  return bs_intensity * kPi * shadowing_moment / (pathloss_constant * pathloss_constant);
}

BooleanModelParams BooleanModelParams::from_threshold(double bs_intensity, double threshold,
                                                      double pathloss_exponent,
                                                      double pathloss_constant,
                                                      std::size_t truncation) {
  if (!std::isfinite(threshold) || threshold <= 0.0) {
    fail(Errc::invalid_argument, "Boolean model: threshold must be positive");
  }
  if (!std::isfinite(pathloss_exponent) || pathloss_exponent <= 0.0) {
    fail(Errc::invalid_argument, "Boolean model: path-loss exponent must be positive");
  }
  if (!std::isfinite(pathloss_constant) || pathloss_constant <= 0.0) {
    fail(Errc::invalid_argument, "Boolean model: path-loss constant must be positive");
  }
  BooleanModelParams params;
  params.bs_intensity = bs_intensity;
  params.coverage_radius = std::pow(threshold, -1.0 / pathloss_exponent) / pathloss_constant;
  params.truncation = truncation;
  return params;
}

void BooleanModelParams::validate() const {
  if (!std::isfinite(bs_intensity) || bs_intensity <= 0.0) {
    fail(Errc::invalid_argument, "Boolean model: bs_intensity must be positive");
  }
  if (!std::isfinite(coverage_radius) || coverage_radius <= 0.0) {
    fail(Errc::invalid_argument, "Boolean model: coverage_radius must be positive");
  }
  if (truncation == 0) fail(Errc::invalid_argument, "Boolean model: truncation must be >= 1");
  if (!(mean() > 0.0)) fail(Errc::invalid_argument, "Boolean model: mean coverage is zero");
}

double BooleanModelParams::mean() const noexcept {
  return bs_intensity * kPi * coverage_radius * coverage_radius;
}

std::size_t max_coverage_count(double sinr_threshold) {
  if (!std::isfinite(sinr_threshold) || sinr_threshold <= 0.0) {
    fail(Errc::invalid_argument, "SINR threshold must be positive and finite");
  }
  const double bound = std::ceil(1.0 / sinr_threshold);
  if (bound > 1e9) fail(Errc::invalid_argument, "SINR threshold is too small");
  return static_cast<std::size_t>(bound);
}

double euler_constant_cprime(double pathloss_exponent) {
  require_exponent(pathloss_exponent, "C'(beta)");
  const double beta = pathloss_exponent;
  return 2.0 * kPi / (beta * std::sin(2.0 * kPi / beta));
}

double integral_i(std::size_t n, double x, double pathloss_exponent, double abs_tolerance) {
  if (n == 0) fail(Errc::invalid_argument, "I_{n,beta}: n must be at least 1");
  if (!std::isfinite(x) || x < 0.0) fail(Errc::invalid_argument, "I_{n,beta}: x must be >= 0");
  const double beta = pathloss_exponent;
  const double cprime = euler_constant_cprime(beta);
  const double nd = static_cast<double>(n);

  const double log_prefactor = nd * std::log(2.0) - (nd - 1.0) * std::log(beta) -
                               nd * std::log(cprime) - std::lgamma(nd);
  const double prefactor = std::exp(log_prefactor);

  if (x == 0.0) {
    // int_0^inf u^(2n-1) e^(-u^2) du = (n-1)!/2
    return std::exp(log_prefactor + std::lgamma(nd) - std::log(2.0));
  }

  const double damping = x * std::pow(std::tgamma(1.0 - 2.0 / beta), -beta / 2.0);
  auto integrand = [&](double u) {
    if (u <= 0.0) return 0.0;
    return std::exp((2.0 * nd - 1.0) * std::log(u) - u * u - damping * std::pow(u, beta));
  };

  // Truncate where the undamped tail, bounded by U^(2n-2) e^(-U^2) for
  // U^2 >= 4n, is negligible against the tolerance.
  const double target = std::log(1e-3 * abs_tolerance / prefactor);
  double upper = 2.0 * std::sqrt(nd) + 1.0;
  while ((2.0 * nd - 2.0) * std::log(upper) - upper * upper > target) upper += 0.5;

  double error = 0.0;
  double l1 = 0.0;
  const double integral = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      integrand, 0.0, upper, 20, 1e-13, &error, &l1);
  if (!std::isfinite(integral) || error * prefactor > abs_tolerance) {
    fail(Errc::numerical_failure,
         "I_{n,beta} quadrature did not converge: n = " + std::to_string(n) +
             ", x = " + format_value(x) + ", error estimate " + format_value(error * prefactor) +
             " > tolerance " + format_value(abs_tolerance));
  }
  return prefactor * integral;
}

double integral_j(std::size_t n, double x, double pathloss_exponent,
                  std::size_t quadrature_points, std::uint64_t seed, std::size_t dimension_cap) {
  if (n == 0) fail(Errc::invalid_argument, "J_{n,beta}: n must be at least 1");
  if (!std::isfinite(x) || x < 0.0) fail(Errc::invalid_argument, "J_{n,beta}: x must be >= 0");
  require_exponent(pathloss_exponent, "J_{n,beta}");
  if (n == 1) return 1.0;
  const std::size_t dim = n - 1;
  if (dim > dimension_cap) {
    fail(Errc::unsupported_dimension,
         "J_{n,beta} needs a " + std::to_string(dim) +
             "-dimensional integral, above the cap of " + std::to_string(dimension_cap) +
             "; use simulated coverage instead");
  }
  if (quadrature_points == 0) {
    fail(Errc::invalid_argument, "J_{n,beta}: quadrature_points must be at least 1");
  }

  const double beta = pathloss_exponent;
  const double half_beta = 0.5 * beta;
  // Substituting 1 - v_i = s_i^(beta/2) absorbs the (1 - v_i)^(2/beta - 1)
  // endpoint singularity; the integrand becomes
  //   (beta/2)^d prod_i (1 - v_i) v_i^(i (2/beta + 1) - 1) / (x + eta_i).
  std::vector<double> exponents(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    exponents[i] = static_cast<double>(i + 1) * (2.0 / beta + 1.0) - 1.0;
  }

  std::mt19937_64 shift_rng(seed);
  std::vector<double> shift(dim);
  for (auto& s : shift) s = static_cast<double>(shift_rng() >> 11) * 0x1.0p-53;

  boost::random::sobol sequence(dim);
  std::vector<double> v(dim);
  std::vector<double> one_minus_v(dim);

  double sum = 0.0;
  double carry = 0.0;
  for (std::size_t k = 0; k < quadrature_points; ++k) {
    for (std::size_t i = 0; i < dim; ++i) {
      double t = static_cast<double>(sequence()) * 0x1.0p-64 + shift[i];
      if (t >= 1.0) t -= 1.0;
      const double s = 1.0 - t;
      one_minus_v[i] = std::pow(s, half_beta);
      v[i] = 1.0 - one_minus_v[i];
    }
    double value = 1.0;
    double tail_product = 1.0;  // prod_{k > i} v_k
    for (std::size_t i = dim; i-- > 0;) {
      const double eta = one_minus_v[i] * tail_product;
      const double denom = x + eta;
      if (denom <= 0.0) {
        value = 0.0;
        break;
      }
      value *= one_minus_v[i] * std::pow(v[i], exponents[i]) / denom;
      tail_product *= v[i];
    }
    // Neumaier step
    const double term = value;
    const double t = sum + term;
    carry += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
  }
  const double mean = (sum + carry) / static_cast<double>(quadrature_points);
  return std::pow(half_beta, static_cast<double>(dim)) * mean;
}

double symmetric_sum_sn(std::size_t n, const SinrModelParams& params) {
  if (n == 0) fail(Errc::invalid_argument, "S_n: n must be at least 1");
  params.validate();
  const double threshold = params.sinr_threshold;
  const double crowding = static_cast<double>(n - 1) * threshold;
  if (crowding >= 1.0) return 0.0;

  const double beta = params.pathloss_exponent;
  const double y = threshold / (1.0 - crowding);
  const double noise_arg =
      params.noise_power == 0.0
          ? 0.0
          : params.noise_power * std::pow(params.density_constant(), -beta / 2.0);
  const double scale = std::pow(y, -2.0 * static_cast<double>(n) / beta);
  const double i_term = integral_i(n, noise_arg, beta);
  const double j_term =
      integral_j(n, y, beta, params.quadrature_points, params.qmc_seed, params.dimension_cap);
  return scale * i_term * j_term;
}

SinrCoverageDetail sinr_coverage_detail(const SinrModelParams& params) {
  params.validate();
  const std::size_t max_m = max_coverage_count(params.sinr_threshold);
  if (max_m - 1 > params.dimension_cap) {
    fail(Errc::unsupported_dimension,
         "SINR coverage at T = " + format_value(params.sinr_threshold) + " needs M = " +
             std::to_string(max_m) + " and a " + std::to_string(max_m - 1) +
             "-dimensional integral, above the cap of " + std::to_string(params.dimension_cap) +
             "; use the simulate command for this threshold");
  }

  std::vector<double> sums(max_m);
  for (std::size_t n = 1; n <= max_m; ++n) sums[n - 1] = symmetric_sum_sn(n, params);

  // p_m = sum_{n>=m} (-1)^(n-m) C(n, m) S_n; S_n = 0 for n > M.
  std::vector<double> raw(max_m + 1, 0.0);
  for (std::size_t m = 1; m <= max_m; ++m) {
    double binom = 1.0;  // C(m, m)
    double acc = 0.0;
    for (std::size_t n = m; n <= max_m; ++n) {
      if (n > m) binom = binom * static_cast<double>(n) / static_cast<double>(n - m);
      const double term = binom * sums[n - 1];
      acc += ((n - m) % 2 == 0) ? term : -term;
    }
    raw[m] = acc;
  }
  raw[0] = 1.0 - compensated_sum(std::span<const double>(raw).subspan(1));

  std::vector<double> pmf = raw;
  for (std::size_t m = 0; m < pmf.size(); ++m) {
    if (pmf[m] < kNegativeFailure) {
      fail(Errc::numerical_failure,
           "SINR coverage p_" + std::to_string(m) + " = " + format_value(pmf[m]) +
               " is negative beyond quadrature noise");
    }
    if (pmf[m] < 0.0) pmf[m] = 0.0;
  }
  const double total = compensated_sum(pmf);
  for (auto& p : pmf) p /= total;

  return SinrCoverageDetail{CoverageDistribution::from_pmf(std::move(pmf)), std::move(sums),
                            std::move(raw)};
}

CoverageDistribution sinr_coverage(const SinrModelParams& params) {
  return sinr_coverage_detail(params).distribution;
}

CoverageDistribution boolean_coverage(const BooleanModelParams& params) {
  params.validate();
  const double nu = params.mean();
  const std::size_t max_m = params.truncation;
  // P(N > M) for N ~ Poisson(nu)
  const double tail = boost::math::gamma_p(static_cast<double>(max_m + 1), nu);
  if (tail >= params.tail_tolerance) {
    std::size_t needed = max_m;
    while (boost::math::gamma_p(static_cast<double>(needed + 1), nu) >= params.tail_tolerance) {
      ++needed;
    }
    fail(Errc::invalid_argument,
         "Boolean coverage: truncation M = " + std::to_string(max_m) + " leaves tail mass " +
             format_value(tail) + " for mean " + format_value(nu) + "; use M >= " +
             std::to_string(needed));
  }
  std::vector<double> pmf(max_m + 1);
  const double log_nu = std::log(nu);
  for (std::size_t m = 0; m <= max_m; ++m) {
    const double md = static_cast<double>(m);
    pmf[m] = std::exp(md * log_nu - nu - std::lgamma(md + 1.0));
  }
  return CoverageDistribution::from_pmf(std::move(pmf),
                                        CoverageDistribution::kDefaultTolerance + tail, tail);
}

CoverageDistribution convolve(const CoverageDistribution& first,
                              const CoverageDistribution& second) {
  const auto p = first.pmf();
  const auto q = second.pmf();
  std::vector<double> out(p.size() + q.size() - 1, 0.0);
  for (std::size_t n = 0; n < p.size(); ++n) {
    for (std::size_t k = 0; k < q.size(); ++k) out[n + k] += p[n] * q[k];
  }
  return CoverageDistribution::from_pmf(
      std::move(out), first.tolerance() + second.tolerance(),
      first.truncation_error() + second.truncation_error());
}

double mean_coverage(const CoverageDistribution& dist) noexcept {
  const auto pmf = dist.pmf();
  std::vector<double> weighted(pmf.size());
  for (std::size_t m = 0; m < pmf.size(); ++m) weighted[m] = static_cast<double>(m) * pmf[m];
  return compensated_sum(weighted);
}

}  // namespace geocache
