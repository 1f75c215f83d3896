#include "geocache/error.hpp"

namespace geocache {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument:
      return "invalid_argument";
    case Errc::ordering_violation:
      return "ordering_violation";
    case Errc::dimension_mismatch:
      return "dimension_mismatch";
    case Errc::numerical_failure:
      return "numerical_failure";
    case Errc::unsupported_dimension:
      return "unsupported_dimension";
    case Errc::parse_error:
      return "parse_error";
  }
  return "unknown";
}

}  // namespace geocache
