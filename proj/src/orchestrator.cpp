#include "eqsa/orchestrator.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <sstream>

#include "eqsa/error.hpp"
#include "eqsa/rng.hpp"

namespace eqsa {

namespace {

constexpr std::array<std::pair<Ablation, std::string_view>, 5> kAblationNames = {{
    {Ablation::no_priority, "no_priority"},
    {Ablation::no_urgency, "no_urgency"},
    {Ablation::no_scope, "no_scope"},
    {Ablation::no_reward, "no_reward"},
    {Ablation::no_dependency, "no_dependency"},
}};

void check_config(const RunConfig& c) {
  auto bad = [](const std::string& what) { throw Error(ErrorCode::invalid_argument, "config: " + what); };
  if (c.budget.max_steps_per_question <= 0) bad("max_steps_per_question must be positive");
  if (!(c.budget.step_duration > 0.0)) bad("step_duration must be positive");
  if (c.finishing_threshold < 0.0 || c.finishing_threshold > 1.0) bad("finishing_threshold outside [0, 1]");
  if (c.stop_threshold < 0.0 || c.stop_threshold > 1.0) bad("stop_threshold outside [0, 1]");
  if (c.view_range < 0) bad("view_range must be >= 0");
  if (!(c.noise_rate >= 0.0 && c.noise_rate < 1.0)) bad("noise_rate outside [0, 1)");
  if (c.check_interval <= 0) bad("check_interval must be positive");
}

std::optional<std::string> derive_value(const Question& q, const GroupMemory& memory) {
  const Query& query = q.query;
  const auto records = memory.retrieve(query);  // most recent first
  auto matches = [&](const Sighting& s) {
    return s.category == query.target_category && (!query.room_id || s.room_id == *query.room_id);
  };

  switch (query.category) {
    case QueryCategory::existence:
      if (!records.empty()) return "yes";
      if (memory.coverage(query) >= 1.0) return "no";
      return std::nullopt;

    case QueryCategory::counting: {
      std::set<std::string> ids;
      for (const auto* rec : records)
        for (const auto& s : rec->observation.sightings)
          if (matches(s)) ids.insert(s.object_id);
      if (ids.empty() && memory.coverage(query) < 1.0) return std::nullopt;
      return std::to_string(ids.size());
    }

    case QueryCategory::state:
    case QueryCategory::identification: {
      if (!query.attribute) return std::nullopt;
      std::map<std::string, int> votes;
      std::map<std::string, std::size_t> first_seen;  // lower = more recent
      std::size_t order = 0;
      for (const auto* rec : records) {
        for (const auto& s : rec->observation.sightings) {
          if (!matches(s)) continue;
          auto a = s.attributes.find(*query.attribute);
          if (a == s.attributes.end()) continue;
          ++votes[a->second];
          first_seen.emplace(a->second, order++);
        }
      }
      std::optional<std::string> best;
      for (const auto& [value, n] : votes) {
        if (!best || n > votes[*best] || (n == votes[*best] && first_seen[value] < first_seen[*best])) {
          best = value;
        }
      }
      return best;
    }

    case QueryCategory::location:
      for (const auto* rec : records) {
        for (const auto& s : rec->observation.sightings) {
          if (!matches(s)) continue;
          auto label = memory.meta().room_label.find(s.room_id);
          if (label != memory.meta().room_label.end()) return label->second;
        }
      }
      return std::nullopt;
  }
  return std::nullopt;
}

char first_real_option(const Options& options) {
  for (std::size_t i = 0; i < options.size(); ++i)
    if (!is_dummy_option(options[i])) return kOptionLabels[i];
  return kOptionLabels[0];
}

// --- episode engine -------------------------------------------------------------

class Engine {
 public:
  Engine(const Scenario& scenario, const RunConfig& config, const RunOptions& options)
      : sc_(scenario),
        cfg_(config),
        meta_(SceneMeta::from_scene(*scenario.scene)),
        memory_(meta_),
        pool_(meta_, config.pool_options()),
        bus_(options.transport ? options.transport() : std::make_unique<InProcessTransport>()),
        explorer_params_(config.explorer_params()),
        forced_(options.forced_selection),
        scenario_hash_(stable_hash(scenario.scenario_id)) {
    explore_ = make_exploration_state(*sc_.scene, sc_.initial_pose, cfg_.budget);
    for (const auto& q : sc_.initial_questions) arrivals_.push_back({&q, "initial"});
    for (const auto& q : sc_.followup_questions) arrivals_.push_back({&q, "followup"});
    std::stable_sort(arrivals_.begin(), arrivals_.end(), [](const Arrival& a, const Arrival& b) {
      return a.question->arrival_time < b.question->arrival_time;
    });
    wire();
  }

  EpisodeTrace run();

 private:
  struct Arrival {
    const Question* question;
    const char* role;
  };
  struct Active {
    QuestionId id;
    double start_time;
  };

  void wire();
  void publish(EventPayload payload) { bus_.publish(std::move(payload), now_); }

  void admit(const QuestionId& id);
  void regate();
  void answer(const QuestionId& id, int used_steps, std::optional<double> start_time, bool timed_out);
  void tick();
  void try_select();
  void finish(bool timed_out);

  const Question& question(const QuestionId& id) const {
    const Question* q = sc_.find_question(id);
    if (!q) throw Error(ErrorCode::invalid_scenario, "unknown question '" + id + "'");
    return *q;
  }

  const Scenario& sc_;
  const RunConfig& cfg_;
  std::shared_ptr<const SceneMeta> meta_;
  GroupMemory memory_;
  QuestionPool pool_;
  MessageBus bus_;
  ExplorerParams explorer_params_;
  ExplorationState explore_;
  std::vector<QuestionId> forced_;
  std::size_t forced_pos_ = 0;
  std::uint64_t scenario_hash_;
  std::uint64_t total_steps_ = 0;

  std::vector<Arrival> arrivals_;
  std::map<QuestionId, ParsedQuestion> parsed_;
  std::set<QuestionId> pooled_;
  std::set<QuestionId> dispatched_;  // answer already requested
  std::map<QuestionId, AnswerRecord> answered_;
  std::vector<AnswerRecord> answer_order_;
  std::vector<double> memory_times_;
  metrics::Accumulator accumulator_;

  std::optional<Active> active_;
  double next_tick_ = 0.0;
  double now_ = 0.0;
};

void Engine::wire() {
  bus_.subscribe(Topic::question_arrived, "parser", [this](const BusMessage& m) {
    const auto& e = std::get<event::QuestionArrived>(m.payload);
    const auto& id = e.question.question_id;
    if (parsed_.count(id)) return;
    auto p = parse_question(e.question, cfg_.parser);
    parsed_.emplace(id, p);
    publish(event::Parsed{id, p.urgency_est, p.scope});
  });

  bus_.subscribe(Topic::parsed, "finishing", [this](const BusMessage& m) {
    const auto& id = std::get<event::Parsed>(m.payload).question_id;
    if (!cfg_.gate_enabled()) {
      admit(id);
      return;
    }
    double conf = 0.0;
    const bool direct = finishing_gate(parsed_.at(id), memory_, cfg_.finishing_threshold, &conf) ==
                        GateDecision::direct_answer;
    if (direct) dispatched_.insert(id);
    publish(event::DirectAnswerAttempt{id, conf, cfg_.finishing_threshold, direct, false});
  });

  bus_.subscribe(Topic::direct_answer_attempt, "pool", [this](const BusMessage& m) {
    const auto& e = std::get<event::DirectAnswerAttempt>(m.payload);
    if (!e.direct && !e.retry) admit(e.question_id);
  });

  bus_.subscribe(Topic::direct_answer_attempt, "answering", [this](const BusMessage& m) {
    const auto& e = std::get<event::DirectAnswerAttempt>(m.payload);
    if (e.direct) answer(e.question_id, 0, now_, false);
  });

  bus_.subscribe(Topic::stop_decided, "answering", [this](const BusMessage& m) {
    const auto& e = std::get<event::StopDecided>(m.payload);
    if (!e.stop || !active_ || active_->id != e.question_id) return;
    answer(e.question_id, e.steps_used, active_->start_time, e.reason == "max_time");
  });

  bus_.subscribe(Topic::answered, "pool", [this](const BusMessage& m) {
    const auto& r = std::get<event::Answered>(m.payload).record;
    pool_.mark_answered(r.question_id, m.virtual_time);
    regate();
  });

  bus_.subscribe(Topic::answered, "planner", [this](const BusMessage& m) {
    const auto& r = std::get<event::Answered>(m.payload).record;
    if (active_ && active_->id == r.question_id) active_.reset();
  });

  bus_.subscribe(Topic::answered, "metrics", [this](const BusMessage& m) {
    const auto& r = std::get<event::Answered>(m.payload).record;
    accumulator_.add(r, question(r.question_id).urgency_true);
  });
}

void Engine::admit(const QuestionId& id) {
  if (pooled_.count(id) || answered_.count(id)) return;
  pooled_.insert(id);
  const auto result = pool_.add_question(parsed_.at(id), now_);
  const PoolEntry* e = pool_.find(id);
  publish(event::Pooled{id, now_, e->status, result.rejected_edges});
  regate();
}

// The pool's updater just fired: pooled questions that memory now covers are
// answered without exploring.
void Engine::regate() {
  if (!cfg_.gate_enabled()) return;
  for (const auto& id : pool_.ranking()) {
    if (dispatched_.count(id)) continue;
    double conf = 0.0;
    if (finishing_gate(parsed_.at(id), memory_, cfg_.finishing_threshold, &conf) == GateDecision::direct_answer) {
      dispatched_.insert(id);
      publish(event::DirectAnswerAttempt{id, conf, cfg_.finishing_threshold, true, true});
    }
  }
}

void Engine::answer(const QuestionId& id, int used_steps, std::optional<double> start_time, bool timed_out) {
  if (answered_.count(id)) return;
  const Question& q = question(id);
  AnswerRecord r;
  r.question_id = id;
  r.predicted = answer_question(q, memory_);
  r.correct = r.predicted == q.ground_truth;
  r.used_steps = used_steps;
  r.direct = used_steps == 0;
  r.max_steps = cfg_.budget.max_steps_per_question;
  r.request_time = q.arrival_time;
  r.start_time = start_time;
  r.answer_time = now_;
  r.timed_out = timed_out;
  answered_.emplace(id, r);
  answer_order_.push_back(r);
  dispatched_.insert(id);
  publish(event::Answered{r});
}

void Engine::tick() {
  const QuestionId id = active_->id;
  const Query& query = question(id).query;
  const Pose before = explore_.pose;
  const auto seed = derive_seed(cfg_.seed, scenario_hash_, total_steps_++);
  StepResult r = step(explore_, *sc_.scene, query, memory_, cfg_.budget, explorer_params_, seed, id);
  memory_times_.push_back(r.observation.time);
  const double conf = memory_.confidence(query);
  publish(event::StepTaken{id, explore_.steps_used, before, r.pose_after, r.chosen_frontier, conf,
                           r.observation.visible_cells.size(), r.observation.sightings.size()});

  const bool checkpoint = explore_.steps_used % explorer_params_.check_interval == 0;
  const bool stop = should_stop(explore_, query, memory_, explorer_params_);
  if (explore_.budget_exhausted()) {
    publish(event::StopDecided{id, true, conf, explore_.steps_used, "budget"});
  } else if (checkpoint) {
    publish(event::StopDecided{id, stop, conf, explore_.steps_used, stop ? "confidence" : "continue"});
  }
  if (!stop) next_tick_ = explore_.time + cfg_.budget.step_duration;
}

void Engine::try_select() {
  if (active_ || now_ >= sc_.max_time || !pool_.has_selectable()) return;
  const auto ranking = pool_.ranking();
  QuestionId id;
  const bool forced = !forced_.empty();
  if (forced) {
    if (forced_pos_ >= forced_.size()) {
      throw Error(ErrorCode::trace_corruption, "decision log ended before the episode");
    }
    id = forced_[forced_pos_++];
    if (!pool_.select(id, now_)) {
      throw Error(ErrorCode::trace_corruption, "decision log selects '" + id + "', which is not selectable");
    }
  } else {
    id = *pool_.select_next(now_);
  }

  if (cfg_.clears_memory_per_question()) {
    memory_.clear();
    explore_.map.clear();
    explore_.semantic_value.clear();
  }
  explore_.steps_used = 0;
  explore_.max_steps = cfg_.budget.max_steps_per_question;
  explore_.time = now_;
  active_ = Active{id, now_};
  next_tick_ = now_ + cfg_.budget.step_duration;

  const PoolEntry* e = pool_.find(id);
  publish(event::Selected{id, e->priority, e->components, explore_.pose, ranking, forced});
  regate();
}

void Engine::finish(bool timed_out) {
  if (timed_out) now_ = sc_.max_time;
  if (active_) {
    const double conf = memory_.confidence(question(active_->id).query);
    publish(event::StopDecided{active_->id, true, conf, explore_.steps_used, "max_time"});
    bus_.drain();
  }
  for (const auto& a : arrivals_) {
    const auto& id = a.question->question_id;
    if (!answered_.count(id)) answer(id, 0, now_, timed_out);
  }
  bus_.drain();
  publish(event::EpisodeEnd{accumulator_.result(), now_,
                            static_cast<std::size_t>(std::count_if(
                                answer_order_.begin(), answer_order_.end(),
                                [](const AnswerRecord& r) { return r.timed_out; }))});
  bus_.drain();
}

EpisodeTrace Engine::run() {
  publish(event::EpisodeStart{sc_.scenario_id, cfg_.name(), cfg_.seed, sc_.max_time,
                              cfg_.budget.max_steps_per_question, cfg_.budget.step_duration, sc_.initial_pose,
                              arrivals_.size()});
  bus_.drain();

  constexpr double inf = std::numeric_limits<double>::infinity();
  std::size_t next_arrival = 0;
  bool timed_out = false;
  while (true) {
    const double t_arrival = next_arrival < arrivals_.size() ? arrivals_[next_arrival].question->arrival_time : inf;
    const double t_tick = active_ ? next_tick_ : inf;
    const double t = std::min(t_arrival, t_tick);
    if (t == inf) break;
    if (t > sc_.max_time) {
      timed_out = true;
      break;
    }
    now_ = t;
    if (active_ && t_tick == now_) {
      tick();
      bus_.drain();
    }
    while (next_arrival < arrivals_.size() && arrivals_[next_arrival].question->arrival_time == now_) {
      const auto& a = arrivals_[next_arrival++];
      publish(event::QuestionArrived{*a.question, a.role});
    }
    bus_.drain();
    try_select();
    bus_.drain();
  }
  finish(timed_out);

  EpisodeTrace trace;
  trace.scenario_id = sc_.scenario_id;
  trace.config_name = cfg_.name();
  trace.messages = bus_.log();
  trace.answers = answer_order_;
  trace.metrics = accumulator_.result();
  trace.pool = pool_.snapshot();
  trace.dag_edges = pool_.dag().edges();
  trace.memory = memory_.records();
  trace.memory_times = memory_times_;
  return trace;
}

}  // namespace

// --- names --------------------------------------------------------------------

std::string_view to_string(Mode m) noexcept {
  switch (m) {
    case Mode::paraeqsa: return "paraeqsa";
    case Mode::seq_nomem: return "seq_nomem";
    case Mode::seq_mem: return "seq_mem";
  }
  return "paraeqsa";
}

Mode mode_from_string(std::string_view s) {
  if (s == "paraeqsa") return Mode::paraeqsa;
  if (s == "seq_nomem") return Mode::seq_nomem;
  if (s == "seq_mem") return Mode::seq_mem;
  throw Error(ErrorCode::parse, "unknown mode '" + std::string(s) + "'");
}

std::string_view to_string(Ablation a) noexcept {
  for (const auto& [ab, name] : kAblationNames)
    if (ab == a) return name;
  return "unknown";
}

Ablation ablation_from_string(std::string_view s) {
  for (const auto& [ab, name] : kAblationNames)
    if (name == s) return ab;
  throw Error(ErrorCode::parse, "unknown ablation '" + std::string(s) + "'");
}

// --- RunConfig ------------------------------------------------------------------

PriorityWeights RunConfig::effective_weights() const {
  PriorityWeights w = weights;
  if (ablations.count(Ablation::no_urgency)) w.w_u = 0.0;
  if (ablations.count(Ablation::no_scope)) w.w_s = 0.0;
  if (ablations.count(Ablation::no_reward)) w.w_r = 0.0;
  if (ablations.count(Ablation::no_dependency)) w.w_d = 0.0;
  return w;
}

SelectionPolicy RunConfig::selection_policy() const {
  if (mode != Mode::paraeqsa || ablations.count(Ablation::no_priority)) return SelectionPolicy::fifo;
  return SelectionPolicy::priority;
}

ExplorerParams RunConfig::explorer_params() const {
  ExplorerParams p;
  p.view_range = view_range;
  p.noise_rate = noise_rate;
  p.check_interval = check_interval;
  p.stop_threshold = stop_threshold;
  return p;
}

PoolOptions RunConfig::pool_options() const {
  PoolOptions o;
  o.weights = effective_weights();
  o.colocation_radius = colocation_radius;
  o.policy = selection_policy();
  o.strict_dependency_gating = strict_dependency_gating;
  return o;
}

std::string RunConfig::name() const {
  std::string out(to_string(mode));
  for (Ablation a : ablations) out += "+" + std::string(to_string(a));
  return out;
}

void to_json(json& j, const RunConfig& c) {
  json ablations = json::array();
  for (Ablation a : c.ablations) ablations.push_back(std::string(to_string(a)));
  j = json{{"mode", std::string(to_string(c.mode))},
           {"weights", {{"w_u", c.weights.w_u}, {"w_s", c.weights.w_s}, {"w_r", c.weights.w_r}, {"w_d", c.weights.w_d}}},
           {"finishing_threshold", c.finishing_threshold},
           {"stop_threshold", c.stop_threshold},
           {"budget",
            {{"max_steps_per_question", c.budget.max_steps_per_question},
             {"step_duration", c.budget.step_duration}}},
           {"ablations", ablations},
           {"seed", c.seed},
           {"view_range", c.view_range},
           {"noise_rate", c.noise_rate},
           {"check_interval", c.check_interval},
           {"colocation_radius", c.colocation_radius},
           {"strict_dependency_gating", c.strict_dependency_gating},
           {"parser",
            {{"safety_urgency", c.parser.safety_urgency},
             {"functional_urgency", c.parser.functional_urgency},
             {"general_urgency", c.parser.general_urgency}}}};
}

void from_json(const json& j, RunConfig& c) {
  if (!j.is_object()) throw Error(ErrorCode::parse, "run config must be a JSON object");
  try {
    auto read = [&](const json& obj, const char* key, auto& field) {
      if (obj.contains(key)) field = obj.at(key).get<std::decay_t<decltype(field)>>();
    };
    if (j.contains("mode")) c.mode = mode_from_string(j.at("mode").get<std::string>());
    if (j.contains("weights")) {
      const json& w = j.at("weights");
      read(w, "w_u", c.weights.w_u);
      read(w, "w_s", c.weights.w_s);
      read(w, "w_r", c.weights.w_r);
      read(w, "w_d", c.weights.w_d);
    }
    read(j, "finishing_threshold", c.finishing_threshold);
    read(j, "stop_threshold", c.stop_threshold);
    if (j.contains("budget")) {
      read(j.at("budget"), "max_steps_per_question", c.budget.max_steps_per_question);
      read(j.at("budget"), "step_duration", c.budget.step_duration);
    }
    if (j.contains("ablations")) {
      c.ablations.clear();
      for (const auto& a : j.at("ablations")) c.ablations.insert(ablation_from_string(a.get<std::string>()));
    }
    read(j, "seed", c.seed);
    read(j, "view_range", c.view_range);
    read(j, "noise_rate", c.noise_rate);
    read(j, "check_interval", c.check_interval);
    read(j, "colocation_radius", c.colocation_radius);
    read(j, "strict_dependency_gating", c.strict_dependency_gating);
    if (j.contains("parser")) {
      read(j.at("parser"), "safety_urgency", c.parser.safety_urgency);
      read(j.at("parser"), "functional_urgency", c.parser.functional_urgency);
      read(j.at("parser"), "general_urgency", c.parser.general_urgency);
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse, std::string("run config: ") + e.what());
  }
}

// --- trace ---------------------------------------------------------------------------

std::string EpisodeTrace::to_jsonl() const {
  std::string out;
  for (const auto& m : messages) {
    out += to_json_line(m);
    out += '\n';
  }
  return out;
}

std::vector<QuestionId> EpisodeTrace::selection_order() const {
  std::vector<QuestionId> out;
  for (const auto& m : messages)
    if (m.topic == Topic::selected) out.push_back(std::get<event::Selected>(m.payload).question_id);
  return out;
}

// --- gate and answering --------------------------------------------------------------

GateDecision finishing_gate(const ParsedQuestion& parsed, const GroupMemory& memory, double threshold,
                            double* confidence_out) {
  const double conf = memory.confidence(parsed.question.query);
  if (confidence_out) *confidence_out = conf;
  return conf >= threshold ? GateDecision::direct_answer : GateDecision::forward_to_pool;
}

char answer_question(const Question& question, const GroupMemory& memory) {
  if (const auto value = derive_value(question, memory)) {
    for (std::size_t i = 0; i < question.options.size(); ++i) {
      if (question.options[i] == *value && !is_dummy_option(question.options[i])) return kOptionLabels[i];
    }
  }
  return first_real_option(question.options);
}

// --- runs ------------------------------------------------------------------------------

EpisodeTrace run_scenario(const Scenario& scenario, const RunConfig& config, const RunOptions& options) {
  check_config(config);
  const auto violations = validate_scenario(scenario);
  if (!violations.empty()) {
    std::string msg = "scenario '" + scenario.scenario_id + "' is invalid:";
    for (const auto& v : violations) msg += " [" + (v.question_id.empty() ? "" : v.question_id + ": ") + v.message + "]";
    throw Error(ErrorCode::invalid_scenario, msg);
  }
  Engine engine(scenario, config, options);
  return engine.run();
}

EpisodeTrace replay(const Scenario& scenario, const RunConfig& config, const EpisodeTrace& trace) {
  RunOptions options;
  options.forced_selection = trace.selection_order();
  return run_scenario(scenario, config, options);
}

BenchReport run_suite(std::span<const Scenario> scenarios, std::span<const RunConfig> configs) {
  if (scenarios.empty()) throw Error(ErrorCode::invalid_argument, "suite needs at least one scenario");
  BenchReport report;
  for (const auto& cfg : configs) {
    BenchRow row;
    row.config_name = cfg.name();
    row.config = cfg;
    std::vector<MetricsResult> ok;
    for (const auto& sc : scenarios) {
      ScenarioResult res{sc.scenario_id, row.config_name, std::nullopt, {}};
      try {
        res.metrics = run_scenario(sc, cfg).metrics;
        ok.push_back(*res.metrics);
      } catch (const std::exception& e) {
        res.error = e.what();
        ++row.failures;
      }
      report.results.push_back(std::move(res));
    }
    row.scenarios = ok.size();
    if (!ok.empty()) row.mean = metrics::aggregate(ok);
    report.rows.push_back(std::move(row));
  }
  return report;
}

json BenchReport::to_json() const {
  json out_rows = json::array();
  for (const auto& r : rows) {
    json ablations = json::array();
    for (Ablation a : r.config.ablations) ablations.push_back(std::string(eqsa::to_string(a)));
    out_rows.push_back(json{{"config", r.config_name},
                            {"mode", std::string(eqsa::to_string(r.config.mode))},
                            {"ablations", ablations},
                            {"seed", r.config.seed},
                            {"acc", r.mean.acc},
                            {"dar", r.mean.dar},
                            {"ns", r.mean.ns},
                            {"nuwl", r.mean.nuwl},
                            {"scenarios", r.scenarios},
                            {"failures", r.failures}});
  }
  json out_results = json::array();
  for (const auto& r : results) {
    json item{{"scenario_id", r.scenario_id}, {"config", r.config_name}};
    if (r.metrics) {
      item["acc"] = r.metrics->acc;
      item["dar"] = r.metrics->dar;
      item["ns"] = r.metrics->ns;
      item["nuwl"] = r.metrics->nuwl;
    } else {
      item["error"] = r.error;
    }
    out_results.push_back(std::move(item));
  }
  return json{{"rows", out_rows}, {"results", out_results}};
}

std::string BenchReport::to_csv() const {
  std::string out = "config,Acc,DAR,NS,NUWL\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, ",%.6f,%.6f,%.6f,%.6f\n", r.mean.acc, r.mean.dar, r.mean.ns, r.mean.nuwl);
    out += r.config_name;
    out += buf;
  }
  return out;
}

const BenchRow* BenchReport::find(const std::string& config_name) const {
  for (const auto& r : rows)
    if (r.config_name == config_name) return &r;
  return nullptr;
}

}  // namespace eqsa
