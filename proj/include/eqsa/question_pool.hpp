#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "eqsa/question.hpp"
#include "eqsa/scene.hpp"

namespace eqsa {

enum class PoolStatus { ready, pending, exploring, answered };
std::string_view to_string(PoolStatus s) noexcept;

// Edges are stored as "from depends on to". Acyclic at all times: add_edge
// refuses any edge that would close a cycle.
class DependencyGraph {
 public:
  void add_node(const QuestionId& id);
  bool has_node(const QuestionId& id) const { return deps_.count(id) > 0; }

  // Throws Error(cycle) when `to` already reaches `from` (or from == to).
  void add_edge(const QuestionId& from, const QuestionId& to);
  bool would_cycle(const QuestionId& from, const QuestionId& to) const;
  bool reaches(const QuestionId& from, const QuestionId& to) const;

  const std::set<QuestionId>& dependencies_of(const QuestionId& id) const;
  std::vector<QuestionId> dependents_of(const QuestionId& id) const;
  std::vector<std::pair<QuestionId, QuestionId>> edges() const;
  std::vector<QuestionId> nodes() const;

  // Kahn's algorithm; nullopt if a cycle exists (which must never happen).
  std::optional<std::vector<QuestionId>> topological_order() const;

 private:
  std::map<QuestionId, std::set<QuestionId>> deps_;
};

struct PriorityWeights {
  double w_u = 1.0;
  double w_s = 1.0;
  double w_r = 1.0;
  double w_d = 1.0;

  bool operator==(const PriorityWeights&) const = default;
};

struct PriorityComponents {
  double urgency = 0.0;
  int scope = 0;
  int reward = 0;
  int dependency = 0;
};

struct PoolEntry {
  ParsedQuestion parsed;
  PoolStatus status = PoolStatus::ready;
  double request_time = 0.0;
  std::optional<double> start_time;
  int reward_raw = 0;
  PriorityComponents components;
  double priority = 0.0;

  const QuestionId& id() const { return parsed.question.question_id; }
};

// -ln(1 - u). Throws Error(domain) outside [0, 1).
double urgency_component(double urgency_est);
int scope_component(Scope scope);

// Other unanswered entries that share the room or target category, or whose
// room anchors lie within `radius` cells (Chebyshev).
int reward_component(const PoolEntry& entry, std::span<const PoolEntry> pool,
                     const SceneMeta& meta, int radius);
int dependency_component(const PoolEntry& entry, const DependencyGraph& dag,
                         const std::set<QuestionId>& answered);
double priority(const PriorityWeights& w, const PriorityComponents& c);

enum class SelectionPolicy { priority, fifo };

struct PoolOptions {
  PriorityWeights weights;
  int colocation_radius = 8;
  SelectionPolicy policy = SelectionPolicy::priority;
  bool strict_dependency_gating = false;
};

struct AddResult {
  std::vector<std::pair<QuestionId, QuestionId>> rejected_edges;  // (from, to)
};

// Single-owner state machine over the unanswered questions. Every mutation
// reruns the updater, so priorities always reflect the current pool.
class QuestionPool {
 public:
  QuestionPool(std::shared_ptr<const SceneMeta> meta, PoolOptions options);

  AddResult add_question(ParsedQuestion parsed, double now);
  std::optional<QuestionId> select_next(double now);
  // Selects a specific selectable entry. Returns false when it is not selectable.
  bool select(const QuestionId& id, double now);
  // Marks an entry answered. A ready/pending entry answered straight from
  // memory gets start_time = now.
  void mark_answered(const QuestionId& id, double now);

  const PoolEntry* find(const QuestionId& id) const;
  const std::vector<PoolEntry>& entries() const { return entries_; }
  std::vector<PoolEntry> snapshot() const { return entries_; }
  const DependencyGraph& dag() const { return dag_; }
  const std::set<QuestionId>& answered() const { return answered_; }
  const PoolOptions& options() const { return options_; }
  bool has_selectable() const;
  std::size_t unanswered_count() const;

  // Selection order among selectable entries (best first).
  std::vector<QuestionId> ranking() const;

  void recompute();

 private:
  PoolEntry* find_mut(const QuestionId& id);
  bool selectable(const PoolEntry& e) const;
  bool ranks_before(const PoolEntry& a, const PoolEntry& b) const;

  std::shared_ptr<const SceneMeta> meta_;
  PoolOptions options_;
  std::vector<PoolEntry> entries_;
  DependencyGraph dag_;
  std::set<QuestionId> answered_;
};

}  // namespace eqsa
