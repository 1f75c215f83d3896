#pragma once

// Data-parallel inner loops shared by the optimizer and the simulator.
//
// Every kernel has a scalar reference implementation and, on x86-64, an AVX2
// variant chosen at runtime from CPUID. Variants perform the same IEEE
// operations in the same order (no FMA contraction), so their results are
// bit-identical; tests/test_kernels.cpp checks this.

#include <cstddef>
#include <span>
#include <string_view>

namespace geocache::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa) noexcept;

/// True when the variant was compiled in and the CPU supports it.
bool isa_available(Isa isa) noexcept;

/// Best available variant, detected once.
Isa detected_isa() noexcept;

/// Variant used by the dispatching entry points below. Defaults to
/// detected_isa(); set_active_isa() falls back to scalar if `isa` is unavailable.
Isa active_isa() noexcept;
void set_active_isa(Isa isa) noexcept;

struct KernelTable {
  /// out[j] = sum_m pmf[m] (1 - b[j])^m.
  void (*miss_probabilities)(std::span<const double> pmf, std::span<const double> b,
                             std::span<double> out);
  /// out[j] = a[j] * sum_{m>=1} m pmf[m] (1 - b[j])^(m-1).
  void (*marginal_gains)(std::span<const double> pmf, std::span<const double> a,
                         std::span<const double> b, std::span<double> out);
  /// Per-content dual response b_j(mu): 1 if mu <= 0 or a_j p_1 > mu, 0 if
  /// a_j mean < mu, else the root of marginal gain = mu after `steps` halvings.
  void (*primal_responses)(double mu, std::span<const double> a, std::span<const double> pmf,
                           double mean, std::size_t steps, std::span<double> out);
  /// Number of i with power[i] > threshold * (noise + total - power[i]).
  std::size_t (*count_sinr_covered)(std::span<const double> power, double total,
                                    double noise, double threshold);
};

const KernelTable& table(Isa isa) noexcept;

inline const KernelTable& active() noexcept { return table(active_isa()); }

namespace scalar {
void miss_probabilities(std::span<const double> pmf, std::span<const double> b,
                        std::span<double> out);
void marginal_gains(std::span<const double> pmf, std::span<const double> a,
                    std::span<const double> b, std::span<double> out);
void primal_responses(double mu, std::span<const double> a, std::span<const double> pmf,
                      double mean, std::size_t steps, std::span<double> out);
std::size_t count_sinr_covered(std::span<const double> power, double total, double noise,
                               double threshold);
}  // namespace scalar

#if defined(GEOCACHE_HAVE_AVX2)
namespace avx2 {
void miss_probabilities(std::span<const double> pmf, std::span<const double> b,
                        std::span<double> out);
void marginal_gains(std::span<const double> pmf, std::span<const double> a,
                    std::span<const double> b, std::span<double> out);
void primal_responses(double mu, std::span<const double> a, std::span<const double> pmf,
                      double mean, std::size_t steps, std::span<double> out);
std::size_t count_sinr_covered(std::span<const double> power, double total, double noise,
                               double threshold);
}  // namespace avx2
#endif

}  // namespace geocache::kernels
