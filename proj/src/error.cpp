#include "weyllab/error.hpp"

namespace weyllab {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::domain: return "domain error";
    case ErrorCode::unsupported_variant: return "unsupported variant";
    case ErrorCode::boundary_point: return "boundary point";
    case ErrorCode::noncompact: return "noncompact space";
    case ErrorCode::degenerate_grid: return "degenerate grid";
    case ErrorCode::nonconvergence: return "nonconvergence";
    case ErrorCode::bracketing_failure: return "bracketing failure";
    case ErrorCode::incomplete_base: return "incomplete base spectrum";
    case ErrorCode::out_of_range: return "out of range";
    case ErrorCode::truncation_unsound: return "truncation unsound";
    case ErrorCode::insufficient_modes: return "insufficient modes";
    case ErrorCode::coverage: return "coverage error";
    case ErrorCode::disagreement: return "disagreement";
    case ErrorCode::config: return "config error";
    case ErrorCode::io: return "I/O error";
  }
  return "error";
}

}  // namespace weyllab
