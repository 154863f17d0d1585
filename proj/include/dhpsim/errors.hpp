#pragma once

#include <stdexcept>
#include <string>

namespace dhps {

enum class Err {
  config,
  port_exhausted,
  pool_exhausted,
  iteration_limit,
  no_convergence,
  decode_conflict,
  missing_high,
  insufficient_data,
  ambiguous_order,
  unknown_destination,
  state_too_large,
  no_solution,
  precondition,
};

const char* err_name(Err e);

class SimError : public std::runtime_error {
 public:
  SimError(Err kind, const std::string& what)
      : std::runtime_error(std::string(err_name(kind)) + ": " + what), kind_(kind) {}
  Err kind() const { return kind_; }

 private:
  Err kind_;
};

[[noreturn]] inline void raise(Err kind, const std::string& what) { throw SimError(kind, what); }

}  // namespace dhps
