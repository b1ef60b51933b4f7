#pragma once

#include <stdexcept>
#include <string>

namespace bdsmp {

enum class Errc {
  invalid_argument,
  length_mismatch,
  precision_window,
  non_pivotal,
  violates_d,
  violates_e,
  violates_f,
  violates_g,
  wrong_scenario,
  insufficient_precision,
  range_error,
  window_too_small,
  no_sign_change,
  degenerate_derivative,
  non_integrable,
  formula_not_applicable,
  invariant_violation,
  io_error,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::precision_window: return "PrecisionWindow";
    case Errc::non_pivotal: return "NonPivotal";
    case Errc::violates_d: return "ViolatesD";
    case Errc::violates_e: return "ViolatesE";
    case Errc::violates_f: return "ViolatesF";
    case Errc::violates_g: return "ViolatesG";
    case Errc::wrong_scenario: return "WrongScenario";
    case Errc::insufficient_precision: return "InsufficientPrecision";
    case Errc::range_error: return "RangeError";
    case Errc::window_too_small: return "WindowTooSmall";
    case Errc::no_sign_change: return "NoSignChange";
    case Errc::degenerate_derivative: return "DegenerateDerivative";
    case Errc::non_integrable: return "NonIntegrable";
    case Errc::formula_not_applicable: return "FormulaNotApplicable";
    case Errc::invariant_violation: return "InvariantViolation";
    case Errc::io_error: return "IOError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

// Process exit status: 2 configuration, 3 precision, 4 numeric range.
inline int exit_code(Errc c) {
  switch (c) {
    case Errc::insufficient_precision:
    case Errc::precision_window:
    case Errc::non_pivotal:
    case Errc::window_too_small:
      return 3;
    case Errc::range_error:
    case Errc::no_sign_change:
    case Errc::degenerate_derivative:
    case Errc::non_integrable:
      return 4;
    default:
      return 2;
  }
}

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace bdsmp
