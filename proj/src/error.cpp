#include "eqsa/error.hpp"

namespace eqsa {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::invalid_pose: return "invalid-pose";
    case ErrorCode::ambiguous_query: return "ambiguous-query";
    case ErrorCode::dataset_inconsistency: return "dataset-inconsistency";
    case ErrorCode::domain: return "domain";
    case ErrorCode::duplicate: return "duplicate";
    case ErrorCode::cycle: return "cycle";
    case ErrorCode::unknown_room: return "unknown-room";
    case ErrorCode::generation: return "generation";
    case ErrorCode::invalid_scenario: return "invalid-scenario";
    case ErrorCode::trace_corruption: return "trace-corruption";
    case ErrorCode::undefined_metric: return "undefined-metric";
    case ErrorCode::budget_exhausted: return "budget-exhausted";
    case ErrorCode::io: return "io";
    case ErrorCode::parse: return "parse";
  }
  return "unknown";
}

}  // namespace eqsa
