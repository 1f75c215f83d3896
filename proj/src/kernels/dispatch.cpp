#include <atomic>

#include "geocache/kernels/kernels.hpp"

namespace geocache::kernels {
namespace {

constexpr KernelTable kScalarTable{
    &scalar::miss_probabilities,
    &scalar::marginal_gains,
    &scalar::primal_responses,
    &scalar::count_sinr_covered,
};

#if defined(GEOCACHE_HAVE_AVX2)
constexpr KernelTable kAvx2Table{
    &avx2::miss_probabilities,
    &avx2::marginal_gains,
    &avx2::primal_responses,
    &avx2::count_sinr_covered,
};
#endif

std::atomic<Isa>& active_slot() {
  static std::atomic<Isa> slot{detected_isa()};
  return slot;
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

bool isa_available(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(GEOCACHE_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

Isa detected_isa() noexcept {
  static const Isa isa = isa_available(Isa::avx2) ? Isa::avx2 : Isa::scalar;
  return isa;
}

Isa active_isa() noexcept { return active_slot().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) noexcept {
  active_slot().store(isa_available(isa) ? isa : Isa::scalar, std::memory_order_relaxed);
}

const KernelTable& table(Isa isa) noexcept {
#if defined(GEOCACHE_HAVE_AVX2)
  if (isa == Isa::avx2 && isa_available(Isa::avx2)) return kAvx2Table;
#endif
  (void)isa;
  return kScalarTable;
}

}  // namespace geocache::kernels
