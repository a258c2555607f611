#include "eqsa/question.hpp"

#include <set>

#include "eqsa/error.hpp"

namespace eqsa {

std::string_view to_string(Scope s) noexcept { return s == Scope::local ? "local" : "global"; }

std::vector<const Question*> Scenario::all_questions() const {
  std::vector<const Question*> out;
  out.reserve(initial_questions.size() + followup_questions.size());
  for (const auto& q : initial_questions) out.push_back(&q);
  for (const auto& q : followup_questions) out.push_back(&q);
  return out;
}

const Question* Scenario::find_question(const QuestionId& id) const {
  for (const Question* q : all_questions())
    if (q->question_id == id) return q;
  return nullptr;
}

ParsedQuestion parse_question(const Question& q, const ParserRules& rules) {
  ParsedQuestion p;
  p.question = q;
  if (q.safety_flag) {
    p.urgency_est = rules.safety_urgency;
  } else if (q.functional_flag) {
    p.urgency_est = rules.functional_urgency;
  } else {
    p.urgency_est = rules.general_urgency;
  }
  p.scope = q.query.room_id ? Scope::local : Scope::global;
  return p;
}

std::vector<QuestionId> declared_dependencies(const Question& q) { return q.declared_deps; }

UrgencyBand urgency_band(double urgency) {
  if (urgency < 0.3) return UrgencyBand::low;
  if (urgency < 0.7) return UrgencyBand::medium;
  return UrgencyBand::high;
}

std::vector<Violation> validate_scenario(const Scenario& s) {
  std::vector<Violation> out;
  auto add = [&](const std::string& qid, std::string msg) { out.push_back({qid, std::move(msg)}); };

  if (!(s.max_time > 0.0)) add("", "max_time must be > 0");
  if (!s.scene) {
    add("", "scenario has no scene");
    return out;
  }
  if (!s.scene->is_free(s.initial_pose.cell)) add("", "initial pose is not on a free cell");

  std::set<QuestionId> ids;
  for (const Question* q : s.all_questions()) {
    if (!ids.insert(q->question_id).second) add(q->question_id, "duplicate question_id");
  }

  auto check = [&](const Question& q, bool initial) {
    const auto& id = q.question_id;
    if (initial && q.arrival_time != 0.0) add(id, "initial question must arrive at t=0");
    if (!initial && !(q.arrival_time > 0.0)) add(id, "follow-up question must arrive after t=0");
    if (!initial && q.arrival_time > s.max_time) add(id, "follow-up arrives after max_time");
    if (!(q.urgency_true > 0.0 && q.urgency_true < 1.0)) add(id, "urgency_true must lie in (0,1)");
    const int gt = option_index(q.ground_truth);
    if (gt < 0) {
      add(id, "ground_truth must be one of A-D");
    } else if (is_dummy_option(q.options[static_cast<std::size_t>(gt)])) {
      add(id, "ground_truth points at a dummy option");
    }
    for (const auto& opt : q.options)
      if (opt.empty()) add(id, "empty option value");
    for (const auto& dep : q.declared_deps) {
      if (dep == id) add(id, "question depends on itself");
      else if (!ids.count(dep)) add(id, "dependency '" + dep + "' is not in the scenario");
    }
    if (gt >= 0) {
      try {
        char oracle = ground_truth_answer(*s.scene, q.query, q.options);
        if (oracle != q.ground_truth) {
          add(id, std::string("ground_truth '") + q.ground_truth + "' disagrees with scene oracle '" +
                      oracle + "'");
        }
      } catch (const Error& e) {
        add(id, std::string("scene oracle failed: ") + e.what());
      }
    }
  };
  for (const auto& q : s.initial_questions) check(q, true);
  for (const auto& q : s.followup_questions) check(q, false);
  return out;
}

}  // namespace eqsa
