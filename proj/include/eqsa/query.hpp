#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace eqsa {

enum class QueryCategory { existence, counting, state, identification, location };

std::string_view to_string(QueryCategory c) noexcept;
QueryCategory query_category_from_string(std::string_view s);

// Machine-readable form of a question. `room_id` present means the question
// names a specific room; `attribute` is used by state/identification.
struct Query {
  QueryCategory category = QueryCategory::existence;
  std::string target_category;
  std::optional<std::string> room_id;
  std::optional<std::string> attribute;

  bool operator==(const Query&) const = default;
};

inline constexpr std::string_view kDummyOption = "(Do not choose this option)";
inline constexpr std::array<char, 4> kOptionLabels = {'A', 'B', 'C', 'D'};

// Option values indexed by label position (A..D).
using Options = std::array<std::string, 4>;

inline bool is_dummy_option(std::string_view value) { return value == kDummyOption; }

inline int option_index(char label) {
  return (label >= 'A' && label <= 'D') ? label - 'A' : -1;
}

}  // namespace eqsa
