#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "eqsa/metrics.hpp"
#include "eqsa/question.hpp"
#include "eqsa/question_pool.hpp"
#include "eqsa/scene.hpp"

namespace eqsa {

enum class Topic {
  episode_start,
  question_arrived,
  parsed,
  direct_answer_attempt,
  pooled,
  selected,
  step_taken,
  stop_decided,
  answered,
  episode_end,
};

std::string_view to_string(Topic t) noexcept;
Topic topic_from_string(std::string_view s);

namespace event {

struct EpisodeStart {
  std::string scenario_id;
  std::string config;
  std::uint64_t seed = 0;
  double max_time = 0.0;
  int max_steps = 0;
  double step_duration = 0.0;
  Pose initial_pose;
  std::size_t question_count = 0;
};

struct QuestionArrived {
  Question question;
  std::string role;  // initial | followup
};

struct Parsed {
  QuestionId question_id;
  double urgency_est = 0.0;
  Scope scope = Scope::global;
};

struct DirectAnswerAttempt {
  QuestionId question_id;
  double confidence = 0.0;
  double threshold = 0.0;
  bool direct = false;
  bool retry = false;  // re-run of the gate for an already pooled question
};

struct Pooled {
  QuestionId question_id;
  double request_time = 0.0;
  PoolStatus status = PoolStatus::ready;
  std::vector<std::pair<QuestionId, QuestionId>> rejected_edges;
};

struct Selected {
  QuestionId question_id;
  double priority = 0.0;
  PriorityComponents components;
  Pose start_pose;
  std::vector<QuestionId> ranking;  // selectable entries, best first, before selection
  bool forced = false;              // taken from a replayed decision log
};

struct StepTaken {
  QuestionId question_id;
  int step = 0;  // 1-based count of steps spent on this question
  Pose pose;     // where the observation was taken
  Pose pose_after;
  std::optional<Cell> chosen_frontier;
  double confidence = 0.0;
  std::size_t visible_cells = 0;
  std::size_t sightings = 0;
};

struct StopDecided {
  QuestionId question_id;
  bool stop = false;
  double confidence = 0.0;
  int steps_used = 0;
  std::string reason;  // confidence | budget | continue | max_time
};

struct Answered {
  AnswerRecord record;
};

struct EpisodeEnd {
  MetricsResult metrics;
  double end_time = 0.0;
  std::size_t timed_out = 0;
};

}  // namespace event

using EventPayload =
    std::variant<event::EpisodeStart, event::QuestionArrived, event::Parsed, event::DirectAnswerAttempt,
                 event::Pooled, event::Selected, event::StepTaken, event::StopDecided, event::Answered,
                 event::EpisodeEnd>;

struct BusMessage {
  Topic topic = Topic::episode_start;
  EventPayload payload;
  double virtual_time = 0.0;
  std::uint64_t seq = 0;        // global publish order
  std::uint64_t topic_seq = 0;  // per-topic, strictly increasing
};

// Topic implied by a payload alternative.
Topic topic_of(const EventPayload& payload);

// One JSON object per message: {seq, topic, topic_seq, t, payload}.
std::string to_json_line(const BusMessage& msg);

// Delivery medium between publish() and the subscribers. Implementations
// may deliver a message more than once.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual void push(const BusMessage& msg) = 0;
  virtual std::optional<BusMessage> pop() = 0;
};

class InProcessTransport : public Transport {
 public:
  void push(const BusMessage& msg) override { queue_.push_back(msg); }
  std::optional<BusMessage> pop() override;

 private:
  std::deque<BusMessage> queue_;
};

// Delivers every message `copies` times. Used to exercise idempotency.
class DuplicatingTransport : public Transport {
 public:
  explicit DuplicatingTransport(int copies = 2) : copies_(copies) {}
  void push(const BusMessage& msg) override;
  std::optional<BusMessage> pop() override;

 private:
  int copies_;
  std::deque<BusMessage> queue_;
};

using TransportFactory = std::function<std::unique_ptr<Transport>()>;

// Topic-based publish/subscribe over a Transport. Each subscription
// remembers the sequence numbers it has handled and skips repeats, so
// handlers see every message exactly once regardless of the transport.
class MessageBus {
 public:
  using Handler = std::function<void(const BusMessage&)>;

  explicit MessageBus(std::unique_ptr<Transport> transport = std::make_unique<InProcessTransport>());

  void subscribe(Topic topic, std::string consumer, Handler handler);

  // Stamps sequence numbers, appends to the log and hands the message to the
  // transport. Delivery happens in drain(). Returns the global seq.
  std::uint64_t publish(EventPayload payload, double virtual_time);

  // Delivers until the transport is empty. Handlers may publish; a nested
  // drain() call from a handler returns immediately.
  void drain();

  // Pushes an already published message again.
  void redeliver(const BusMessage& msg) { transport_->push(msg); }

  const std::vector<BusMessage>& log() const { return log_; }
  std::size_t deliveries() const { return deliveries_; }
  std::size_t duplicates_dropped() const { return duplicates_dropped_; }

 private:
  struct Subscription {
    Topic topic;
    std::string consumer;
    Handler handler;
    std::set<std::uint64_t> handled;
  };

  std::unique_ptr<Transport> transport_;
  std::vector<Subscription> subscriptions_;
  std::vector<BusMessage> log_;
  std::map<Topic, std::uint64_t> topic_counters_;
  std::uint64_t next_seq_ = 1;
  std::size_t deliveries_ = 0;
  std::size_t duplicates_dropped_ = 0;
  bool draining_ = false;
};

}  // namespace eqsa
