#include "dhpsim/errors.hpp"

namespace dhps {

const char* err_name(Err e) {
  switch (e) {
    case Err::config: return "ConfigError";
    case Err::port_exhausted: return "PortExhausted";
    case Err::pool_exhausted: return "PoolExhausted";
    case Err::iteration_limit: return "IterationLimit";
    case Err::no_convergence: return "NoConvergence";
    case Err::decode_conflict: return "DecodeConflict";
    case Err::missing_high: return "MissingHigh";
    case Err::insufficient_data: return "InsufficientData";
    case Err::ambiguous_order: return "AmbiguousOrder";
    case Err::unknown_destination: return "UnknownDestination";
    case Err::state_too_large: return "StateTooLarge";
    case Err::no_solution: return "NoSolution";
    case Err::precondition: return "PreconditionBreach";
  }
  return "Error";
}

}  // namespace dhps
