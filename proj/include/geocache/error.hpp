#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace geocache {

enum class Errc {
  invalid_argument,
  ordering_violation,
  dimension_mismatch,
  numerical_failure,
  unsupported_dimension,
  parse_error,
};

/// Stable machine-readable name, used in CLI error objects.
std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace geocache
