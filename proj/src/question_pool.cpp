#include "eqsa/question_pool.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "eqsa/error.hpp"

namespace eqsa {

std::string_view to_string(PoolStatus s) noexcept {
  switch (s) {
    case PoolStatus::ready: return "ready";
    case PoolStatus::pending: return "pending";
    case PoolStatus::exploring: return "exploring";
    case PoolStatus::answered: return "answered";
  }
  return "ready";
}

// --- DependencyGraph -------------------------------------------------------

void DependencyGraph::add_node(const QuestionId& id) { deps_.try_emplace(id); }

bool DependencyGraph::reaches(const QuestionId& from, const QuestionId& to) const {
  if (from == to) return true;
  std::set<QuestionId> seen{from};
  std::deque<QuestionId> frontier{from};
  while (!frontier.empty()) {
    auto it = deps_.find(frontier.front());
    frontier.pop_front();
    if (it == deps_.end()) continue;
    for (const auto& next : it->second) {
      if (next == to) return true;
      if (seen.insert(next).second) frontier.push_back(next);
    }
  }
  return false;
}

bool DependencyGraph::would_cycle(const QuestionId& from, const QuestionId& to) const {
  return reaches(to, from);
}

void DependencyGraph::add_edge(const QuestionId& from, const QuestionId& to) {
  if (would_cycle(from, to)) {
    throw Error(ErrorCode::cycle, "dependency " + from + " -> " + to + " would create a cycle");
  }
  add_node(to);
  deps_[from].insert(to);
}

const std::set<QuestionId>& DependencyGraph::dependencies_of(const QuestionId& id) const {
  static const std::set<QuestionId> kEmpty;
  auto it = deps_.find(id);
  return it == deps_.end() ? kEmpty : it->second;
}

std::vector<QuestionId> DependencyGraph::dependents_of(const QuestionId& id) const {
  std::vector<QuestionId> out;
  for (const auto& [node, deps] : deps_)
    if (deps.count(id)) out.push_back(node);
  return out;
}

std::vector<std::pair<QuestionId, QuestionId>> DependencyGraph::edges() const {
  std::vector<std::pair<QuestionId, QuestionId>> out;
  for (const auto& [from, deps] : deps_)
    for (const auto& to : deps) out.emplace_back(from, to);
  return out;
}

std::vector<QuestionId> DependencyGraph::nodes() const {
  std::vector<QuestionId> out;
  for (const auto& [id, _] : deps_) out.push_back(id);
  return out;
}

std::optional<std::vector<QuestionId>> DependencyGraph::topological_order() const {
  std::map<QuestionId, int> indegree;
  for (const auto& [id, deps] : deps_) {
    indegree.try_emplace(id, 0);
    for (const auto& d : deps) indegree[d] += 0;
  }
  for (const auto& [id, deps] : deps_)
    for (const auto& d : deps) indegree[d] += 1;  // edge id -> d
  std::deque<QuestionId> ready;
  for (const auto& [id, deg] : indegree)
    if (deg == 0) ready.push_back(id);
  std::vector<QuestionId> order;
  while (!ready.empty()) {
    QuestionId id = ready.front();
    ready.pop_front();
    order.push_back(id);
    for (const auto& d : dependencies_of(id))
      if (--indegree[d] == 0) ready.push_back(d);
  }
  if (order.size() != indegree.size()) return std::nullopt;
  return order;
}

// --- components -------------------------------------------------------------

double urgency_component(double urgency_est) {
  if (!(urgency_est >= 0.0 && urgency_est < 1.0)) {
    throw Error(ErrorCode::domain, "urgency must lie in [0, 1), got " + std::to_string(urgency_est));
  }
  return -std::log1p(-urgency_est);
}

int scope_component(Scope scope) { return scope == Scope::local ? 1 : 0; }

int reward_component(const PoolEntry& entry, std::span<const PoolEntry> pool,
                     const SceneMeta& meta, int radius) {
  const Query& q = entry.parsed.question.query;
  std::optional<Cell> anchor;
  if (q.room_id) {
    auto it = meta.room_centroid.find(*q.room_id);
    if (it != meta.room_centroid.end()) anchor = it->second;
  }
  int reward = 0;
  for (const PoolEntry& other : pool) {
    if (other.id() == entry.id() || other.status == PoolStatus::answered) continue;
    const Query& o = other.parsed.question.query;
    bool related = o.target_category == q.target_category || (q.room_id && o.room_id == q.room_id);
    if (!related && anchor && o.room_id) {
      auto it = meta.room_centroid.find(*o.room_id);
      related = it != meta.room_centroid.end() && chebyshev(*anchor, it->second) <= radius;
    }
    if (related) ++reward;
  }
  return reward;
}

int dependency_component(const PoolEntry& entry, const DependencyGraph& dag,
                         const std::set<QuestionId>& answered) {
  for (const auto& dep : dag.dependencies_of(entry.id()))
    if (!answered.count(dep)) return 0;
  return 1;
}

double priority(const PriorityWeights& w, const PriorityComponents& c) {
  return w.w_u * c.urgency + w.w_s * c.scope + w.w_r * c.reward + w.w_d * c.dependency;
}

// --- QuestionPool ------------------------------------------------------------

QuestionPool::QuestionPool(std::shared_ptr<const SceneMeta> meta, PoolOptions options)
    : meta_(std::move(meta)), options_(options) {
  if (!meta_) throw Error(ErrorCode::invalid_argument, "question pool needs scene metadata");
}

AddResult QuestionPool::add_question(ParsedQuestion parsed, double now) {
  const QuestionId id = parsed.question.question_id;
  if (find(id)) throw Error(ErrorCode::duplicate, "question '" + id + "' is already pooled");
  urgency_component(parsed.urgency_est);  // reject out-of-domain estimates up front

  AddResult result;
  dag_.add_node(id);
  for (const auto& dep : parsed.question.declared_deps) {
    try {
      dag_.add_edge(id, dep);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::cycle) throw;
      result.rejected_edges.emplace_back(id, dep);
    }
  }
  PoolEntry entry;
  entry.parsed = std::move(parsed);
  entry.request_time = now;
  entries_.push_back(std::move(entry));
  recompute();
  return result;
}

bool QuestionPool::selectable(const PoolEntry& e) const {
  if (e.status == PoolStatus::ready) return true;
  return e.status == PoolStatus::pending && !options_.strict_dependency_gating;
}

bool QuestionPool::has_selectable() const {
  return std::any_of(entries_.begin(), entries_.end(), [&](const PoolEntry& e) { return selectable(e); });
}

std::size_t QuestionPool::unanswered_count() const {
  return static_cast<std::size_t>(std::count_if(entries_.begin(), entries_.end(), [](const PoolEntry& e) {
    return e.status != PoolStatus::answered;
  }));
}

bool QuestionPool::ranks_before(const PoolEntry& a, const PoolEntry& b) const {
  if (options_.policy == SelectionPolicy::priority && a.priority != b.priority) {
    return a.priority > b.priority;
  }
  if (a.request_time != b.request_time) return a.request_time < b.request_time;
  return a.id() < b.id();
}

std::vector<QuestionId> QuestionPool::ranking() const {
  std::vector<const PoolEntry*> cands;
  for (const auto& e : entries_)
    if (selectable(e)) cands.push_back(&e);
  std::sort(cands.begin(), cands.end(),
            [&](const PoolEntry* a, const PoolEntry* b) { return ranks_before(*a, *b); });
  std::vector<QuestionId> out;
  for (const auto* e : cands) out.push_back(e->id());
  return out;
}

std::optional<QuestionId> QuestionPool::select_next(double now) {
  auto order = ranking();
  if (order.empty()) return std::nullopt;
  PoolEntry* e = find_mut(order.front());
  e->status = PoolStatus::exploring;
  e->start_time = now;
  recompute();
  return order.front();
}

bool QuestionPool::select(const QuestionId& id, double now) {
  PoolEntry* e = find_mut(id);
  if (!e || !selectable(*e)) return false;
  e->status = PoolStatus::exploring;
  e->start_time = now;
  recompute();
  return true;
}

void QuestionPool::mark_answered(const QuestionId& id, double now) {
  answered_.insert(id);
  if (PoolEntry* e = find_mut(id)) {
    if (!e->start_time) e->start_time = now;
    e->status = PoolStatus::answered;
  }
  recompute();
}

const PoolEntry* QuestionPool::find(const QuestionId& id) const {
  for (const auto& e : entries_)
    if (e.id() == id) return &e;
  return nullptr;
}

PoolEntry* QuestionPool::find_mut(const QuestionId& id) {
  for (auto& e : entries_)
    if (e.id() == id) return &e;
  return nullptr;
}

void QuestionPool::recompute() {
  for (auto& e : entries_) {
    if (e.status == PoolStatus::ready || e.status == PoolStatus::pending) {
      e.status = dependency_component(e, dag_, answered_) ? PoolStatus::ready : PoolStatus::pending;
    }
  }
  for (auto& e : entries_) {
    e.reward_raw = reward_component(e, entries_, *meta_, options_.colocation_radius);
    e.components.urgency = urgency_component(e.parsed.urgency_est);
    e.components.scope = scope_component(e.parsed.scope);
    e.components.reward = e.reward_raw;
    e.components.dependency = dependency_component(e, dag_, answered_);
    e.priority = priority(options_.weights, e.components);
  }
}

}  // namespace eqsa
