#include "eqsa/explorer.hpp"

#include <algorithm>
#include <array>
#include <climits>
#include <cstdlib>
#include <deque>

#include "eqsa/error.hpp"
#include "eqsa/rng.hpp"

namespace eqsa {

namespace {

constexpr std::array<Cell, 4> kNeighbours = {Cell{0, -1}, Cell{1, 0}, Cell{0, 1}, Cell{-1, 0}};

Cell offset(Cell c, Cell d) { return {c.x + d.x, c.y + d.y}; }

Heading heading_towards(Cell from, Cell to, Heading fallback) {
  if (to.x > from.x) return Heading::east;
  if (to.x < from.x) return Heading::west;
  if (to.y > from.y) return Heading::south;
  if (to.y < from.y) return Heading::north;
  return fallback;
}

}  // namespace

// --- KnownMap -----------------------------------------------------------------

KnownMap::KnownMap(int width, int height)
    : width_(width),
      height_(height),
      cells_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), Knowledge::unknown) {}

bool KnownMap::is_frontier(Cell c) const {
  if (at(c) != Knowledge::free) return false;
  for (Cell d : kNeighbours) {
    Cell n = offset(c, d);
    if (in_bounds(n) && at(n) == Knowledge::unknown) return true;
  }
  return false;
}

void KnownMap::reveal(const std::vector<Cell>& free_cells, const std::vector<Cell>& wall_cells) {
  std::vector<Cell> changed;
  for (Cell c : free_cells) {
    if (at(c) == Knowledge::unknown) {
      cells_[flat(c)] = Knowledge::free;
      changed.push_back(c);
    }
  }
  for (Cell c : wall_cells) {
    if (at(c) == Knowledge::unknown) {
      cells_[flat(c)] = Knowledge::wall;
      changed.push_back(c);
    }
  }
  // Only changed cells and their neighbours can change frontier membership.
  for (Cell c : changed) {
    for (int k = -1; k < 4; ++k) {
      Cell n = k < 0 ? c : offset(c, kNeighbours[static_cast<std::size_t>(k)]);
      if (!in_bounds(n)) continue;
      if (is_frontier(n)) frontiers_.insert(n);
      else frontiers_.erase(n);
    }
  }
}

void KnownMap::clear() {
  std::fill(cells_.begin(), cells_.end(), Knowledge::unknown);
  frontiers_.clear();
}

std::vector<Cell> KnownMap::known_free_cells() const {
  std::vector<Cell> out;
  for (int x = 0; x < width_; ++x)
    for (int y = 0; y < height_; ++y)
      if (at({x, y}) == Knowledge::free) out.push_back({x, y});
  return out;
}

std::vector<Cell> KnownMap::known_wall_cells() const {
  std::vector<Cell> out;
  for (int x = 0; x < width_; ++x)
    for (int y = 0; y < height_; ++y)
      if (at({x, y}) == Knowledge::wall) out.push_back({x, y});
  return out;
}

std::set<Cell> KnownMap::recompute_frontiers() const {
  std::set<Cell> out;
  for (int x = 0; x < width_; ++x)
    for (int y = 0; y < height_; ++y)
      if (is_frontier({x, y})) out.insert({x, y});
  return out;
}

std::vector<int> KnownMap::distances_from(Cell source) const {
  std::vector<int> dist(cells_.size(), -1);
  if (!known_free(source)) return dist;
  std::deque<Cell> queue{source};
  dist[flat(source)] = 0;
  while (!queue.empty()) {
    Cell c = queue.front();
    queue.pop_front();
    for (Cell d : kNeighbours) {
      Cell n = offset(c, d);
      if (!known_free(n) || dist[flat(n)] >= 0) continue;
      dist[flat(n)] = dist[flat(c)] + 1;
      queue.push_back(n);
    }
  }
  return dist;
}

// --- scoring ---------------------------------------------------------------------

std::map<Cell, double> default_relevance(const std::set<Cell>& frontiers, const Query& query,
                                         const SceneMeta& meta, const ExplorerParams& params) {
  std::map<Cell, double> out;
  for (Cell f : frontiers) out[f] = params.base_value;
  if (!query.room_id) return out;
  auto room = meta.room_cells.find(*query.room_id);
  if (room == meta.room_cells.end()) return out;

  bool any_inside = false;
  for (Cell f : frontiers) {
    if (meta.room_at(f) == *query.room_id) {
      out[f] = params.target_value;
      any_inside = true;
    }
  }
  if (any_inside || frontiers.empty()) return out;

  std::map<Cell, int> gap;
  int best = INT_MAX;
  for (Cell f : frontiers) {
    int d = INT_MAX;
    for (Cell r : room->second) d = std::min(d, std::abs(f.x - r.x) + std::abs(f.y - r.y));
    gap[f] = d;
    best = std::min(best, d);
  }
  for (const auto& [f, d] : gap)
    if (d == best) out[f] = params.target_value;
  return out;
}

std::map<Cell, double> score_frontiers(ExplorationState& state, const Query& query, const SceneMeta& meta,
                                       const ExplorerParams& params, const RelevanceProvider& relevance) {
  std::map<Cell, double> scores;
  const auto& frontiers = state.map.frontiers();
  if (frontiers.empty()) return scores;
  const auto values = relevance(frontiers, query, meta, params);
  const auto dist = state.map.distances_from(state.pose.cell);
  for (Cell f : frontiers) {
    const int d = dist[static_cast<std::size_t>(f.y) * static_cast<std::size_t>(state.map.width()) +
                       static_cast<std::size_t>(f.x)];
    if (d < 0) continue;
    auto v = values.find(f);
    const double sv = v == values.end() ? params.base_value : v->second;
    state.semantic_value[f] = sv;
    scores[f] = sv / (1.0 + static_cast<double>(d) / params.distance_scale);
  }
  return scores;
}

// --- stepping ----------------------------------------------------------------------

ExplorationState make_exploration_state(const GridScene& scene, const Pose& start, const StepBudget& budget) {
  if (!scene.is_free(start.cell)) throw Error(ErrorCode::invalid_pose, "start pose is not a free cell");
  ExplorationState state;
  state.pose = start;
  state.map = KnownMap(scene.width(), scene.height());
  state.max_steps = budget.max_steps_per_question;
  return state;
}

StepResult step(ExplorationState& state, const GridScene& scene, const Query& query, GroupMemory& memory,
                const StepBudget& budget, const ExplorerParams& params, std::uint64_t rng_seed,
                const std::optional<std::string>& source_question, const RelevanceProvider& relevance) {
  if (state.budget_exhausted()) {
    throw Error(ErrorCode::budget_exhausted, "step budget exhausted");
  }
  const double t = state.time + budget.step_duration;

  StepResult result;
  result.observation = observe(scene, state.pose, params.view_range, params.noise_rate,
                               derive_seed(rng_seed, static_cast<std::uint64_t>(state.steps_used)), t);
  memory.insert(MemoryRecord{result.observation, source_question, {}});
  state.map.reveal(result.observation.visible_cells, result.observation.visible_walls);

  const auto scores = score_frontiers(state, query, memory.meta(), params, relevance);
  std::optional<Cell> best;
  double best_score = -1.0;
  for (const auto& [cell, score] : scores) {  // ascending cells: first max wins ties
    if (score > best_score) {
      best_score = score;
      best = cell;
    }
  }
  result.chosen_frontier = best;

  if (best && *best != state.pose.cell) {
    const auto to_goal = state.map.distances_from(*best);
    auto d_at = [&](Cell c) {
      return to_goal[static_cast<std::size_t>(c.y) * static_cast<std::size_t>(state.map.width()) +
                     static_cast<std::size_t>(c.x)];
    };
    const int here = d_at(state.pose.cell);
    std::optional<Cell> next;
    for (Cell d : kNeighbours) {
      Cell n = offset(state.pose.cell, d);
      if (!state.map.known_free(n) || d_at(n) != here - 1) continue;
      if (!next || n < *next) next = n;
    }
    if (next) {
      state.pose.heading = heading_towards(state.pose.cell, *next, state.pose.heading);
      state.pose.cell = *next;
    }
  }

  state.steps_used += 1;
  state.time = t;
  result.pose_after = state.pose;
  return result;
}

bool should_stop(const ExplorationState& state, const Query& query, const GroupMemory& memory,
                 const ExplorerParams& params) {
  if (state.budget_exhausted()) return true;
  if (state.steps_used == 0 || params.check_interval <= 0 || state.steps_used % params.check_interval != 0) {
    return false;
  }
  return memory.confidence(query) >= params.stop_threshold;
}

ExploreOutcome explore_for(ExplorationState& state, const GridScene& scene, const Query& query,
                           GroupMemory& memory, const StepBudget& budget, const ExplorerParams& params,
                           std::uint64_t rng_seed, const std::optional<std::string>& source_question) {
  if (!scene.is_free(state.pose.cell)) throw Error(ErrorCode::invalid_pose, "start pose is not a free cell");
  state.steps_used = 0;
  state.max_steps = budget.max_steps_per_question;
  while (!should_stop(state, query, memory, params)) {
    step(state, scene, query, memory, budget, params, rng_seed, source_question);
  }
  return {state.steps_used, state.pose, state.time, state.budget_exhausted()};
}

}  // namespace eqsa
