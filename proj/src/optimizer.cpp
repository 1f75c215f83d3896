#include "geocache/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "geocache/error.hpp"
#include "geocache/kernels/kernels.hpp"
#include "geocache/numeric.hpp"

namespace geocache {
namespace {

void require_tolerance(double tol, const char* name) {
  if (!std::isfinite(tol) || tol <= 0.0) {
    fail(Errc::invalid_argument, std::string(name) + " must be positive and finite");
  }
}

double sum_of(std::span<const double> values) { return compensated_sum(values); }

}  // namespace

double hit_probability(const PlacementPolicy& policy, const PopularityDistribution& popularity,
                       const CoverageDistribution& coverage) {
  require_valid(policy, popularity.library_size());
  const auto b = std::span<const double>(policy.probabilities);
  std::vector<double> miss(b.size());
  kernels::active().miss_probabilities(coverage.pmf(), b, miss);
  const double f = 1.0 - compensated_dot(popularity.probabilities(), miss);
  return std::clamp(f, 0.0, 1.0);
}

MpcResult mpc_policy(const PopularityDistribution& popularity,
                     const CoverageDistribution& coverage, std::size_t cache_size) {
  if (cache_size == 0) fail(Errc::invalid_argument, "cache size K must be at least 1");
  const std::size_t library = popularity.library_size();
  const std::size_t cached = std::min(cache_size, library);
  PlacementPolicy policy{std::vector<double>(library, 0.0), cache_size};
  std::fill_n(policy.probabilities.begin(), cached, 1.0);
  return {std::move(policy), (1.0 - coverage[0]) * popularity.head_mass(cached)};
}

double marginal_gain(double b, double popularity, const CoverageDistribution& coverage) {
  double out = 0.0;
  kernels::active().marginal_gains(coverage.pmf(), std::span<const double>(&popularity, 1),
                                   std::span<const double>(&b, 1), std::span<double>(&out, 1));
  return out;
}

std::size_t bisection_steps(double tolerance) {
  require_tolerance(tolerance, "bisection tolerance");
  if (tolerance >= 1.0) return 0;
  return static_cast<std::size_t>(std::ceil(-std::log2(tolerance)));
}

double primal_response(double mu, double popularity, const CoverageDistribution& coverage,
                       double tolerance) {
  if (!std::isfinite(mu)) fail(Errc::invalid_argument, "dual price must be finite");
  double out = 0.0;
  kernels::active().primal_responses(mu, std::span<const double>(&popularity, 1), coverage.pmf(),
                                     mean_coverage(coverage), bisection_steps(tolerance),
                                     std::span<double>(&out, 1));
  return out;
}

std::vector<double> primal_responses(double mu, const PopularityDistribution& popularity,
                                     const CoverageDistribution& coverage, double tolerance) {
  if (!std::isfinite(mu)) fail(Errc::invalid_argument, "dual price must be finite");
  std::vector<double> out(popularity.library_size());
  kernels::active().primal_responses(mu, popularity.probabilities(), coverage.pmf(),
                                     mean_coverage(coverage), bisection_steps(tolerance), out);
  return out;
}

GcpSolution solve_gcp(const PopularityDistribution& popularity,
                      const CoverageDistribution& coverage, std::size_t cache_size,
                      const SolverOptions& options) {
  if (cache_size == 0) fail(Errc::invalid_argument, "cache size K must be at least 1");
  require_tolerance(options.outer_tolerance, "outer tolerance");
  require_tolerance(options.inner_tolerance, "inner tolerance");

  const std::size_t library = popularity.library_size();
  const double budget = static_cast<double>(cache_size);
  GcpSolution solution;
  solution.policy.cache_size = cache_size;

  if (cache_size >= library) {
    // The budget cannot bind; caching everything everywhere is optimal.
    solution.policy.probabilities.assign(library, 1.0);
    solution.hit_probability = hit_probability(solution.policy, popularity, coverage);
    return solution;
  }

  const double mean = mean_coverage(coverage);
  if (!(mean > 0.0)) {
    solution.policy.probabilities.assign(library, 0.0);
    solution.degenerate = true;
    solution.budget_residual = budget;
    return solution;
  }

  const auto& kernel = kernels::active();
  const std::size_t steps = bisection_steps(options.inner_tolerance);
  const auto a = popularity.probabilities();
  std::vector<double> b_lo(library);
  std::vector<double> b_hi(library);
  std::vector<double> scratch(library);
  auto allocated = [&](double mu, std::vector<double>& out) {
    kernel.primal_responses(mu, a, coverage.pmf(), mean, steps, out);
    return sum_of(out);
  };

  // sum_j b_j(mu) is non-increasing in mu, equals J at mu = 0 and ~0 at
  // mu = a_1 E[N].
  double lo = 0.0;
  double hi = a[0] * mean;
  double sum_lo = allocated(lo, b_lo);
  double sum_hi = allocated(hi, b_hi);
  if (!(sum_lo > budget) || !(sum_hi <= budget)) {
    fail(Errc::numerical_failure,
         "dual price bracket [0, " + std::to_string(hi) + "] does not enclose the budget: " +
             "allocations " + std::to_string(sum_lo) + " and " + std::to_string(sum_hi) +
             " for K = " + std::to_string(cache_size));
  }

  std::size_t outer = 0;
  while (hi - lo > options.outer_tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double s = allocated(mid, scratch);
    if (s > budget) {
      lo = mid;
      sum_lo = s;
      b_lo.swap(scratch);
    } else {
      hi = mid;
      sum_hi = s;
      b_hi.swap(scratch);
    }
    ++outer;
  }

  // Both endpoint responses are Lagrangian maximizers to within the bracket
  // width; mixing them meets the budget exactly. When several contents share
  // a jump in b_j(mu) (ties, or single-coverage networks) this mixing is what
  // splits the budget among them.
  auto& b = solution.policy.probabilities;
  b = b_hi;
  if (sum_lo > sum_hi) {
    const double theta = std::clamp((budget - sum_hi) / (sum_lo - sum_hi), 0.0, 1.0);
    for (std::size_t j = 0; j < library; ++j) {
      b[j] = std::clamp(b_hi[j] + theta * (b_lo[j] - b_hi[j]), 0.0, 1.0);
    }
  }

  solution.dual_price = 0.5 * (lo + hi);
  solution.outer_iterations = outer;
  solution.inner_iterations = steps;
  solution.budget_residual = std::abs(solution.policy.total() - budget);
  solution.hit_probability = hit_probability(solution.policy, popularity, coverage);
  return solution;
}

double solve_2cp(double a1, double p1, double p2) {
  constexpr double kSlack = 1e-12;
  if (!(a1 >= 0.5 - kSlack && a1 <= 1.0 + kSlack)) {
    fail(Errc::invalid_argument, "2CP: a1 must lie in [0.5, 1]");
  }
  if (!(p1 >= 0.0) || !(p2 >= 0.0) || !(p1 + p2 <= 1.0 + kSlack)) {
    fail(Errc::invalid_argument, "2CP: need p1, p2 >= 0 and p1 + p2 <= 1");
  }
  if (p2 == 0.0) return 1.0;
  const double covered = p1 + p2;
  const double threshold = 1.0 - p1 / (2.0 * covered);
  if (a1 > threshold) return 1.0;
  return std::clamp((2.0 * a1 * covered - p1) / (2.0 * p2), 0.0, 1.0);
}

CoverageDistribution two_coverage_from_ratio(double p0, double ratio) {
  if (!(p0 >= 0.0 && p0 <= 1.0)) fail(Errc::invalid_argument, "p0 must lie in [0, 1]");
  if (!std::isfinite(ratio) || ratio < 0.0) {
    fail(Errc::invalid_argument, "coverage ratio p1/p2 must be finite and >= 0");
  }
  const double covered = 1.0 - p0;
  return CoverageDistribution::from_pmf(
      {p0, covered * ratio / (1.0 + ratio), covered / (1.0 + ratio)});
}

}  // namespace geocache
