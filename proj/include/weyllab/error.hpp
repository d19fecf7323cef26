#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace weyllab {

enum class ErrorCode {
  domain,
  unsupported_variant,
  boundary_point,
  noncompact,
  degenerate_grid,
  nonconvergence,
  bracketing_failure,
  incomplete_base,
  out_of_range,
  truncation_unsound,
  insufficient_modes,
  coverage,
  disagreement,
  config,
  io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries a machine-readable code so
/// callers (and tests) can tell error paths apart without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace weyllab
