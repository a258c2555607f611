#include "eqsa/bus.hpp"

#include <array>

#include "eqsa/error.hpp"
#include "eqsa/serialization.hpp"

namespace eqsa {

namespace {

constexpr std::array<std::pair<Topic, std::string_view>, 10> kTopicNames = {{
    {Topic::episode_start, "episode-start"},
    {Topic::question_arrived, "question-arrived"},
    {Topic::parsed, "parsed"},
    {Topic::direct_answer_attempt, "direct-answer-attempt"},
    {Topic::pooled, "pooled"},
    {Topic::selected, "selected"},
    {Topic::step_taken, "step-taken"},
    {Topic::stop_decided, "stop-decided"},
    {Topic::answered, "answered"},
    {Topic::episode_end, "episode-end"},
}};

json edges_json(const std::vector<std::pair<QuestionId, QuestionId>>& edges) {
  json out = json::array();
  for (const auto& [from, to] : edges) out.push_back(json::array({from, to}));
  return out;
}

json components_json(const PriorityComponents& c) {
  return json{{"urgency", c.urgency}, {"scope", c.scope}, {"reward", c.reward}, {"dependency", c.dependency}};
}

struct PayloadJson {
  json operator()(const event::EpisodeStart& e) const {
    return json{{"scenario_id", e.scenario_id},   {"config", e.config},
                {"seed", e.seed},                 {"max_time", e.max_time},
                {"max_steps", e.max_steps},       {"step_duration", e.step_duration},
                {"initial_pose", e.initial_pose}, {"question_count", e.question_count}};
  }
  json operator()(const event::QuestionArrived& e) const {
    return json{{"question", e.question}, {"role", e.role}};
  }
  json operator()(const event::Parsed& e) const {
    return json{{"question_id", e.question_id},
                {"urgency_est", e.urgency_est},
                {"scope", std::string(to_string(e.scope))}};
  }
  json operator()(const event::DirectAnswerAttempt& e) const {
    return json{{"question_id", e.question_id},
                {"confidence", e.confidence},
                {"threshold", e.threshold},
                {"direct", e.direct},
                {"retry", e.retry}};
  }
  json operator()(const event::Pooled& e) const {
    return json{{"question_id", e.question_id},
                {"request_time", e.request_time},
                {"status", std::string(to_string(e.status))},
                {"rejected_edges", edges_json(e.rejected_edges)}};
  }
  json operator()(const event::Selected& e) const {
    return json{{"question_id", e.question_id},
                {"priority", e.priority},
                {"components", components_json(e.components)},
                {"start_pose", e.start_pose},
                {"ranking", e.ranking},
                {"forced", e.forced}};
  }
  json operator()(const event::StepTaken& e) const {
    json j{{"question_id", e.question_id},
           {"step", e.step},
           {"pose", e.pose},
           {"pose_after", e.pose_after},
           {"confidence", e.confidence},
           {"visible_cells", e.visible_cells},
           {"sightings", e.sightings}};
    j["chosen_frontier"] = e.chosen_frontier ? json(*e.chosen_frontier) : json(nullptr);
    return j;
  }
  json operator()(const event::StopDecided& e) const {
    return json{{"question_id", e.question_id},
                {"stop", e.stop},
                {"confidence", e.confidence},
                {"steps_used", e.steps_used},
                {"reason", e.reason}};
  }
  json operator()(const event::Answered& e) const { return json{{"record", e.record}}; }
  json operator()(const event::EpisodeEnd& e) const {
    return json{{"metrics", e.metrics}, {"end_time", e.end_time}, {"timed_out", e.timed_out}};
  }
};

}  // namespace

std::string_view to_string(Topic t) noexcept {
  for (const auto& [topic, name] : kTopicNames)
    if (topic == t) return name;
  return "unknown";
}

Topic topic_from_string(std::string_view s) {
  for (const auto& [topic, name] : kTopicNames)
    if (name == s) return topic;
  throw Error(ErrorCode::parse, "unknown topic '" + std::string(s) + "'");
}

Topic topic_of(const EventPayload& payload) {
  // Variant alternatives are declared in Topic order.
  return static_cast<Topic>(payload.index());
}

std::string to_json_line(const BusMessage& msg) {
  json j{{"seq", msg.seq},
         {"topic", std::string(to_string(msg.topic))},
         {"topic_seq", msg.topic_seq},
         {"t", msg.virtual_time},
         {"payload", std::visit(PayloadJson{}, msg.payload)}};
  return j.dump();
}

std::optional<BusMessage> InProcessTransport::pop() {
  if (queue_.empty()) return std::nullopt;
  BusMessage msg = std::move(queue_.front());
  queue_.pop_front();
  return msg;
}

void DuplicatingTransport::push(const BusMessage& msg) {
  for (int i = 0; i < copies_; ++i) queue_.push_back(msg);
}

std::optional<BusMessage> DuplicatingTransport::pop() {
  if (queue_.empty()) return std::nullopt;
  BusMessage msg = std::move(queue_.front());
  queue_.pop_front();
  return msg;
}

MessageBus::MessageBus(std::unique_ptr<Transport> transport) : transport_(std::move(transport)) {
  if (!transport_) throw Error(ErrorCode::invalid_argument, "bus needs a transport");
}

void MessageBus::subscribe(Topic topic, std::string consumer, Handler handler) {
  subscriptions_.push_back({topic, std::move(consumer), std::move(handler), {}});
}

std::uint64_t MessageBus::publish(EventPayload payload, double virtual_time) {
  BusMessage msg;
  msg.topic = topic_of(payload);
  msg.payload = std::move(payload);
  msg.virtual_time = virtual_time;
  msg.seq = next_seq_++;
  msg.topic_seq = ++topic_counters_[msg.topic];
  log_.push_back(msg);
  transport_->push(msg);
  return msg.seq;
}

void MessageBus::drain() {
  if (draining_) return;
  draining_ = true;
  try {
    while (auto msg = transport_->pop()) {
      ++deliveries_;
      for (std::size_t i = 0; i < subscriptions_.size(); ++i) {
        if (subscriptions_[i].topic != msg->topic) continue;
        if (!subscriptions_[i].handled.insert(msg->seq).second) {
          ++duplicates_dropped_;
          continue;
        }
        subscriptions_[i].handler(*msg);
      }
    }
  } catch (...) {
    draining_ = false;
    throw;
  }
  draining_ = false;
}

}  // namespace eqsa
