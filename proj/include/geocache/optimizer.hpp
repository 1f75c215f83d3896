#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "geocache/coverage.hpp"
#include "geocache/placement.hpp"
#include "geocache/popularity.hpp"

namespace geocache {

struct SolverOptions {
  double outer_tolerance = 1e-10;  // absolute width of the final dual-price bracket
  double inner_tolerance = 1e-12;  // absolute width of each per-content root bracket
};

struct GcpSolution {
  PlacementPolicy policy;
  double dual_price = 0.0;
  double hit_probability = 0.0;
  std::size_t outer_iterations = 0;
  std::size_t inner_iterations = 0;  // per content, per outer step
  double budget_residual = 0.0;      // |sum b - min(K, J)|
  bool degenerate = false;           // p_0 = 1: nothing can be hit
};

/// f(b) = 1 - sum_j a_j sum_m p_m (1 - b_j)^m.
double hit_probability(const PlacementPolicy& policy, const PopularityDistribution& popularity,
                       const CoverageDistribution& coverage);

struct MpcResult {
  PlacementPolicy policy;
  double hit_probability;
};

/// Cache the K most popular contents everywhere; f = (1 - p_0) * sum_{j<=K} a_j.
MpcResult mpc_policy(const PopularityDistribution& popularity,
                     const CoverageDistribution& coverage, std::size_t cache_size);

/// a_j * sum_{m>=1} m p_m (1 - b)^(m-1), the partial derivative of f in b_j.
double marginal_gain(double b, double popularity, const CoverageDistribution& coverage);

/// Maximizer of a_j * (1 - sum_m p_m (1-b)^m) - mu * b over b in [0, 1].
double primal_response(double mu, double popularity, const CoverageDistribution& coverage,
                       double tolerance = 1e-12);

/// Number of bisection halvings that shrink [0, 1] below `tolerance`.
std::size_t bisection_steps(double tolerance);

/// Evaluates b_j(mu) for every content.
std::vector<double> primal_responses(double mu, const PopularityDistribution& popularity,
                                     const CoverageDistribution& coverage,
                                     double tolerance = 1e-12);

/// Optimal randomized placement maximizing f subject to sum b_j <= K.
GcpSolution solve_gcp(const PopularityDistribution& popularity,
                      const CoverageDistribution& coverage, std::size_t cache_size,
                      const SolverOptions& options = {});

/// Closed-form b_1* for two contents, one cache slot, and coverage at most two
/// (b_2* = 1 - b_1*).
double solve_2cp(double a1, double p1, double p2);

/// Coverage law [p0, (1-p0) r/(1+r), (1-p0)/(1+r)] with r = p1/p2.
CoverageDistribution two_coverage_from_ratio(double p0, double ratio);

}  // namespace geocache
