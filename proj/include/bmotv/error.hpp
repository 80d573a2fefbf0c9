#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bmotv {

enum class ErrorCode {
  invalid_spec,
  resolution_mismatch,
  parse_error,
  dimension_unsupported,
  incompatible_lattice,
  invalid_argument,
  delta_not_multiple_of_h,
  tau_not_on_lattice,
  non_unit_direction,
  radius_not_on_lattice,
  width_not_on_lattice,
  overlapping_family,
  eps_not_multiple_of_h,
  offset_not_on_lattice,
  budget_exceeded,
  support_outside_q0,
  io_error,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_spec: return "invalid-spec";
    case ErrorCode::resolution_mismatch: return "resolution-mismatch";
    case ErrorCode::parse_error: return "parse-error";
    case ErrorCode::dimension_unsupported: return "dimension-unsupported";
    case ErrorCode::incompatible_lattice: return "incompatible-lattice";
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::delta_not_multiple_of_h: return "delta-not-multiple-of-h";
    case ErrorCode::tau_not_on_lattice: return "tau-not-on-lattice";
    case ErrorCode::non_unit_direction: return "non-unit-direction";
    case ErrorCode::radius_not_on_lattice: return "radius-not-on-lattice";
    case ErrorCode::width_not_on_lattice: return "width-not-on-lattice";
    case ErrorCode::overlapping_family: return "overlapping-family";
    case ErrorCode::eps_not_multiple_of_h: return "eps-not-multiple-of-h";
    case ErrorCode::offset_not_on_lattice: return "offset-not-on-lattice";
    case ErrorCode::budget_exceeded: return "budget-exceeded";
    case ErrorCode::support_outside_q0: return "support-outside-Q0";
    case ErrorCode::io_error: return "io-error";
  }
  return "unknown";
}

/// Exception carrying a machine-readable error kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace bmotv
