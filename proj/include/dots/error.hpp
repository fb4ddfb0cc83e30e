#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dots {

enum class ErrorCode {
  domain_mismatch,
  codomain_mismatch,
  boundary_mismatch,
  type_clash,
  arity_mismatch,
  index_out_of_range,
  invalid_leg,
  interface_mismatch,
  effect_mismatch,
  dangling_port,
  multiple_feeds,
  cyclic_through_outer_input,
  horizon_too_large,
  unbound_variable,
  division_by_zero,
  non_finite_value,
  syntax_error,
  unknown_junction,
  unknown_name,
  kind_mismatch,
  invalid_value,
  io_error,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure in the library is reported as an Error carrying a stable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

/// Outcome of a commuting-square check; carries the first failing entry.
struct Verdict {
  bool ok = true;
  std::string detail;

  explicit operator bool() const noexcept { return ok; }

  static Verdict pass() { return {}; }
  static Verdict failure(std::string why) { return {false, std::move(why)}; }
};

}  // namespace dots
