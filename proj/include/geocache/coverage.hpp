#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace geocache {

/// Probability mass p_0..p_M of the number of base stations covering the
/// typical user. Entries beyond M are zero (or folded into
/// truncation_error() for truncated infinite-support laws).
class CoverageDistribution {
 public:
  static constexpr double kDefaultTolerance = 1e-9;

  /// Validates p_m in [0, 1] and |sum - 1| <= tolerance.
  static CoverageDistribution from_pmf(std::vector<double> pmf,
                                       double tolerance = kDefaultTolerance,
                                       double truncation_error = 0.0);

  /// The no-coverage-certain network, [1.0].
  static CoverageDistribution none();

  std::span<const double> pmf() const noexcept { return pmf_; }
  std::size_t max_coverage() const noexcept { return pmf_.size() - 1; }
  double operator[](std::size_t m) const noexcept { return m < pmf_.size() ? pmf_[m] : 0.0; }
  double tolerance() const noexcept { return tolerance_; }
  /// Mass beyond max_coverage() dropped by truncation.
  double truncation_error() const noexcept { return truncation_error_; }

 private:
  CoverageDistribution(std::vector<double> pmf, double tolerance, double truncation_error)
      : pmf_(std::move(pmf)), tolerance_(tolerance), truncation_error_(truncation_error) {}

  std::vector<double> pmf_;
  double tolerance_;
  double truncation_error_;
};

/// Parameters of the SINR coverage model with path loss l(r) = (B r)^beta.
struct SinrModelParams {
  double bs_intensity = 1.0;        // lambda, stations per unit area
  double pathloss_exponent = 4.0;   // beta > 2
  double pathloss_constant = 1.0;   // B > 0
  double noise_power = 0.0;         // W >= 0; 0 is interference-limited
  double sinr_threshold = 1.0;      // T > 0
  double shadowing_moment = 1.0;    // E[S^(2/beta)]
  std::size_t quadrature_points = std::size_t{1} << 16;
  std::uint64_t qmc_seed = 0;
  std::size_t dimension_cap = 12;

  void validate() const;
  /// a = lambda * pi * E[S^(2/beta)] / B^2.
  double density_constant() const noexcept;
};

/// Boolean (germ-grain) coverage: a station covers iff within coverage_radius.
struct BooleanModelParams {
  double bs_intensity = 1.0;
  double coverage_radius = 1.0;
  std::size_t truncation = 10;
  double tail_tolerance = 1e-9;

  /// R_b = T^(-1/beta) / B~, from a received-power threshold.
  static BooleanModelParams from_threshold(double bs_intensity, double threshold,
                                           double pathloss_exponent,
                                           double pathloss_constant,
                                           std::size_t truncation);

  void validate() const;
  /// nu = lambda * pi * R_b^2.
  double mean() const noexcept;
};

/// ceil(1/T): the largest number of stations that can cover one point at
/// SINR threshold T.
std::size_t max_coverage_count(double sinr_threshold);

/// C'(beta) = 2 pi / (beta sin(2 pi / beta)) = Gamma(1 - 2/beta) Gamma(1 + 2/beta).
double euler_constant_cprime(double pathloss_exponent);

/// I_{n,beta}(x) by adaptive Gauss-Kronrod quadrature on a truncated
/// half-line. Throws Errc::numerical_failure when the error estimate
/// exceeds abs_tolerance.
double integral_i(std::size_t n, double x, double pathloss_exponent,
                  double abs_tolerance = 1e-10);

/// J_{n,beta}(x), an (n-1)-dimensional integral over the unit cube,
/// evaluated with a randomly shifted Sobol sequence. Exactly 1 for n = 1.
double integral_j(std::size_t n, double x, double pathloss_exponent,
                  std::size_t quadrature_points, std::uint64_t seed,
                  std::size_t dimension_cap = 12);

/// S_n(T); zero outside 0 < T < 1/(n-1).
double symmetric_sum_sn(std::size_t n, const SinrModelParams& params);

struct SinrCoverageDetail {
  CoverageDistribution distribution;
  std::vector<double> symmetric_sums;  // S_1..S_M
  std::vector<double> raw_pmf;         // before clamping and renormalization
};

SinrCoverageDetail sinr_coverage_detail(const SinrModelParams& params);
CoverageDistribution sinr_coverage(const SinrModelParams& params);

CoverageDistribution boolean_coverage(const BooleanModelParams& params);

/// Coverage of two independent overlaid networks.
CoverageDistribution convolve(const CoverageDistribution& first,
                              const CoverageDistribution& second);

double mean_coverage(const CoverageDistribution& dist) noexcept;

}  // namespace geocache
