#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "eqsa/query.hpp"
#include "eqsa/scene.hpp"

namespace eqsa {

using QuestionId = std::string;

struct Question {
  QuestionId question_id;
  std::string text;
  Query query;
  Options options;
  char ground_truth = 'A';
  double urgency_true = 0.5;  // evaluation only; the agent never reads it
  double arrival_time = 0.0;
  bool safety_flag = false;
  bool functional_flag = false;
  std::vector<QuestionId> declared_deps;
};

struct Scenario {
  std::string scenario_id;
  std::shared_ptr<const GridScene> scene;
  double max_time = 600.0;
  Pose initial_pose;
  std::vector<Question> initial_questions;
  std::vector<Question> followup_questions;

  // Initial questions first, then follow-ups, each in declaration order.
  std::vector<const Question*> all_questions() const;
  const Question* find_question(const QuestionId& id) const;
};

enum class Scope { local, global };
std::string_view to_string(Scope s) noexcept;

struct ParsedQuestion {
  Question question;
  double urgency_est = 0.2;
  Scope scope = Scope::global;
};

// Band-center urgency estimates for safety / functional / general questions.
struct ParserRules {
  double safety_urgency = 0.8;
  double functional_urgency = 0.5;
  double general_urgency = 0.2;
};

ParsedQuestion parse_question(const Question& q, const ParserRules& rules = {});

// Hook for dependency inference. The shipped implementation returns the
// declared dependencies unchanged.
using DependencyInference = std::function<std::vector<QuestionId>(const Question&)>;
std::vector<QuestionId> declared_dependencies(const Question& q);

struct Violation {
  std::string question_id;  // empty for scenario-level violations
  std::string message;
};

std::vector<Violation> validate_scenario(const Scenario& s);

enum class UrgencyBand { low, medium, high };
UrgencyBand urgency_band(double urgency);

struct GeneratorParams {
  int width = 20;
  int height = 20;
  int room_rows = 3;
  int room_cols = 3;
  int min_objects = 5;
  int objects_per_room_min = 2;
  int objects_per_room_max = 4;
  int initial_questions = 3;
  int followup_questions = 2;
  double followup_spacing = 120.0;
  double max_time = 600.0;
  double dependency_probability = 0.2;
  double colocate_probability = 0.4;
  // Optional quotas. When set they override sampling for question i.
  std::vector<UrgencyBand> band_plan;
  std::vector<QueryCategory> category_plan;
};

Scenario generate_scenario(std::uint64_t seed, const GeneratorParams& params = {});

// `count` scenarios whose urgency bands and categories follow the target
// shares by quota (largest remainder) rather than by independent sampling.
std::vector<Scenario> generate_dataset(std::uint64_t seed, int count,
                                       const GeneratorParams& params = {});

}  // namespace eqsa
