#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace csched {

enum class Errc {
  cycle_detected,
  unknown_dependency,
  duplicate_id,
  zero_capacity,
  zero_total_capacity,
  missing_duration,
  invalid_argument,
  parse_error,
  schema_error,
  infeasible_assignment,
  too_large,
  io_error,
};

std::string_view to_string(Errc code) noexcept;

// All library failures surface as csched::Error; the code tells callers
// (and the CLI exit-code mapping) which class of problem occurred.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace csched
