#include "dots/error.hpp"

namespace dots {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::domain_mismatch: return "DomainMismatch";
    case ErrorCode::codomain_mismatch: return "CodomainMismatch";
    case ErrorCode::boundary_mismatch: return "BoundaryMismatch";
    case ErrorCode::type_clash: return "TypeClash";
    case ErrorCode::arity_mismatch: return "ArityMismatch";
    case ErrorCode::index_out_of_range: return "IndexOutOfRange";
    case ErrorCode::invalid_leg: return "InvalidLeg";
    case ErrorCode::interface_mismatch: return "InterfaceMismatch";
    case ErrorCode::effect_mismatch: return "EffectMismatch";
    case ErrorCode::dangling_port: return "DanglingPort";
    case ErrorCode::multiple_feeds: return "MultipleFeeds";
    case ErrorCode::cyclic_through_outer_input: return "CyclicThroughOuterInput";
    case ErrorCode::horizon_too_large: return "HorizonTooLarge";
    case ErrorCode::unbound_variable: return "UnboundVariable";
    case ErrorCode::division_by_zero: return "DivisionByZero";
    case ErrorCode::non_finite_value: return "NonFiniteValue";
    case ErrorCode::syntax_error: return "SyntaxError";
    case ErrorCode::unknown_junction: return "UnknownJunction";
    case ErrorCode::unknown_name: return "UnknownName";
    case ErrorCode::kind_mismatch: return "KindMismatch";
    case ErrorCode::invalid_value: return "InvalidValue";
    case ErrorCode::io_error: return "IoError";
  }
  return "Unknown";
}

}  // namespace dots
