#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "eqsa/group_memory.hpp"
#include "eqsa/query.hpp"
#include "eqsa/scene.hpp"

namespace eqsa {

// What the agent has mapped so far. Frontiers are known-free cells with at
// least one 4-neighbour still unknown; they are maintained incrementally.
class KnownMap {
 public:
  enum class Knowledge : std::uint8_t { unknown, free, wall };

  KnownMap() = default;
  KnownMap(int width, int height);

  void reveal(const std::vector<Cell>& free_cells, const std::vector<Cell>& wall_cells);
  void clear();

  int width() const { return width_; }
  int height() const { return height_; }
  Knowledge at(Cell c) const { return cells_[flat(c)]; }
  bool in_bounds(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_; }
  bool known_free(Cell c) const { return in_bounds(c) && at(c) == Knowledge::free; }

  const std::set<Cell>& frontiers() const { return frontiers_; }
  std::vector<Cell> known_free_cells() const;
  std::vector<Cell> known_wall_cells() const;

  // From-scratch frontier definition, used to audit the incremental set.
  std::set<Cell> recompute_frontiers() const;

  // BFS distances over known-free cells from `source` (-1 = unreachable).
  std::vector<int> distances_from(Cell source) const;

 private:
  std::size_t flat(Cell c) const {
    return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(c.x);
  }
  bool is_frontier(Cell c) const;

  int width_ = 0;
  int height_ = 0;
  std::vector<Knowledge> cells_;
  std::set<Cell> frontiers_;
};

struct StepBudget {
  int max_steps_per_question = 40;
  double step_duration = 1.0;
};

struct ExplorerParams {
  int view_range = 3;
  double noise_rate = 0.1;
  double distance_scale = 10.0;  // D in the frontier score
  double target_value = 0.9;
  double base_value = 0.2;
  int check_interval = 3;
  double stop_threshold = 0.75;
};

struct ExplorationState {
  Pose pose;
  KnownMap map;
  std::map<Cell, double> semantic_value;  // cells absent here carry the base value
  int steps_used = 0;
  int max_steps = 40;
  double time = 0.0;

  bool budget_exhausted() const { return steps_used >= max_steps; }
};

// Relevance of each frontier cell to the query, in [0, 1]. The default marks
// frontiers inside the target room as relevant; while none exist, the
// frontiers closest to that room take the relevant value instead.
using RelevanceProvider = std::function<std::map<Cell, double>(
    const std::set<Cell>& frontiers, const Query&, const SceneMeta&, const ExplorerParams&)>;

std::map<Cell, double> default_relevance(const std::set<Cell>& frontiers, const Query& query,
                                         const SceneMeta& meta, const ExplorerParams& params);

// score(f) = relevance(f) / (1 + path_length(pose, f) / D). Unreachable
// frontiers are left out.
std::map<Cell, double> score_frontiers(ExplorationState& state, const Query& query, const SceneMeta& meta,
                                       const ExplorerParams& params,
                                       const RelevanceProvider& relevance = default_relevance);

struct StepResult {
  Observation observation;
  std::optional<Cell> chosen_frontier;
  Pose pose_after;
};

// One exploration step: observe at the current pose, write memory, update the
// map, then move one cell toward the best frontier. Time advances by
// step_duration. Throws Error(budget_exhausted) when no step is left; that
// is a signal to answer with what is known, not a failure.
StepResult step(ExplorationState& state, const GridScene& scene, const Query& query, GroupMemory& memory,
                const StepBudget& budget, const ExplorerParams& params, std::uint64_t rng_seed,
                const std::optional<std::string>& source_question = std::nullopt,
                const RelevanceProvider& relevance = default_relevance);

// Stopping check. Confidence is consulted only on check points (every
// check_interval steps, never at step 0); an exhausted budget always stops.
bool should_stop(const ExplorationState& state, const Query& query, const GroupMemory& memory,
                 const ExplorerParams& params);

struct ExploreOutcome {
  int steps_used = 0;
  Pose final_pose;
  double end_time = 0.0;
  bool budget_exhausted = false;
};

// Runs step() until should_stop(). `state` keeps the map between calls so
// consecutive explorations continue from the previous final pose.
ExploreOutcome explore_for(ExplorationState& state, const GridScene& scene, const Query& query,
                           GroupMemory& memory, const StepBudget& budget, const ExplorerParams& params,
                           std::uint64_t rng_seed, const std::optional<std::string>& source_question = std::nullopt);

// Fresh state at `start` with an empty map.
ExplorationState make_exploration_state(const GridScene& scene, const Pose& start, const StepBudget& budget);

}  // namespace eqsa
