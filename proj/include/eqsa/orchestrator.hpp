#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "eqsa/bus.hpp"
#include "eqsa/explorer.hpp"
#include "eqsa/group_memory.hpp"
#include "eqsa/metrics.hpp"
#include "eqsa/question.hpp"
#include "eqsa/question_pool.hpp"
#include "eqsa/serialization.hpp"

namespace eqsa {

enum class Mode { paraeqsa, seq_nomem, seq_mem };
enum class Ablation { no_priority, no_urgency, no_scope, no_reward, no_dependency };

std::string_view to_string(Mode m) noexcept;
Mode mode_from_string(std::string_view s);
std::string_view to_string(Ablation a) noexcept;
Ablation ablation_from_string(std::string_view s);

struct RunConfig {
  Mode mode = Mode::paraeqsa;
  PriorityWeights weights;
  double finishing_threshold = 0.8;
  double stop_threshold = 0.75;
  StepBudget budget;
  std::set<Ablation> ablations;
  std::uint64_t seed = 0;

  // Simulation knobs.
  int view_range = 3;
  double noise_rate = 0.1;
  int check_interval = 3;
  int colocation_radius = 8;
  bool strict_dependency_gating = false;
  ParserRules parser;

  // Weights with ablated components zeroed.
  PriorityWeights effective_weights() const;
  // FIFO for the sequential modes and for no_priority.
  SelectionPolicy selection_policy() const;
  bool gate_enabled() const { return mode == Mode::paraeqsa; }
  bool clears_memory_per_question() const { return mode == Mode::seq_nomem; }
  ExplorerParams explorer_params() const;
  PoolOptions pool_options() const;

  // "paraeqsa", "seq_mem", "paraeqsa+no_urgency", ...
  std::string name() const;
};

void to_json(json& j, const RunConfig& c);
// Missing fields keep their defaults. Throws Error(parse).
void from_json(const json& j, RunConfig& c);

struct EpisodeTrace {
  std::string scenario_id;
  std::string config_name;
  std::vector<BusMessage> messages;
  std::vector<AnswerRecord> answers;  // answer order
  MetricsResult metrics;
  std::vector<PoolEntry> pool;        // final pool state
  std::vector<std::pair<QuestionId, QuestionId>> dag_edges;  // (from, depends on)
  std::vector<MemoryRecord> memory;   // final memory contents
  std::vector<double> memory_times;   // observation time of every record ever inserted

  std::string to_jsonl() const;
  // Question ids in the order the planner selected them.
  std::vector<QuestionId> selection_order() const;
};

enum class GateDecision { direct_answer, forward_to_pool };

// Direct answer when memory confidence is at or above the threshold.
GateDecision finishing_gate(const ParsedQuestion& parsed, const GroupMemory& memory, double threshold,
                            double* confidence_out = nullptr);

// Derives a label from retrieved sightings; falls back to the first option
// that is not a dummy when memory says nothing usable.
char answer_question(const Question& question, const GroupMemory& memory);

struct RunOptions {
  TransportFactory transport;  // in-process when empty
  // When non-empty the planner follows this order instead of ranking.
  std::vector<QuestionId> forced_selection;
};

// Throws Error(invalid_scenario) when validate_scenario reports violations.
EpisodeTrace run_scenario(const Scenario& scenario, const RunConfig& config, const RunOptions& options = {});

// Re-executes a scenario following the selection order recorded in `trace`.
EpisodeTrace replay(const Scenario& scenario, const RunConfig& config, const EpisodeTrace& trace);

struct ScenarioResult {
  std::string scenario_id;
  std::string config_name;
  std::optional<MetricsResult> metrics;
  std::string error;  // set when the run failed
};

struct BenchRow {
  std::string config_name;
  RunConfig config;
  MetricsResult mean;
  std::size_t scenarios = 0;
  std::size_t failures = 0;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::vector<ScenarioResult> results;

  json to_json() const;
  std::string to_csv() const;  // config,Acc,DAR,NS,NUWL
  const BenchRow* find(const std::string& config_name) const;
};

BenchReport run_suite(std::span<const Scenario> scenarios, std::span<const RunConfig> configs);

}  // namespace eqsa
