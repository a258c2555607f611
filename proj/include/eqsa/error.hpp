#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace eqsa {

enum class ErrorCode {
  invalid_argument,
  invalid_pose,
  ambiguous_query,
  dataset_inconsistency,
  domain,
  duplicate,
  cycle,
  unknown_room,
  generation,
  invalid_scenario,
  trace_corruption,
  undefined_metric,
  budget_exhausted,
  io,
  parse,
};

std::string_view to_string(ErrorCode code) noexcept;

// All failures raised by the core carry one of the codes above so the C
// layer can translate them without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace eqsa
