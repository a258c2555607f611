#pragma once

#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eqsa/question.hpp"

namespace eqsa {

struct AnswerRecord {
  QuestionId question_id;
  char predicted = 'A';
  bool correct = false;
  bool direct = false;  // exactly when used_steps == 0
  int used_steps = 0;
  int max_steps = 40;
  double request_time = 0.0;
  std::optional<double> start_time;
  double answer_time = 0.0;
  bool timed_out = false;

  bool operator==(const AnswerRecord&) const = default;
};

struct QuestionMetrics {
  QuestionId question_id;
  double ns = 0.0;
  double latency = 0.0;
  double weighted_latency = 0.0;

  bool operator==(const QuestionMetrics&) const = default;
};

struct MetricsResult {
  double acc = 0.0;
  double dar = 0.0;
  double ns = 0.0;
  double nuwl = 0.0;
  std::vector<QuestionMetrics> per_question;
};

using UrgencyTable = std::map<QuestionId, double>;

namespace metrics {

// Which earlier explorations count toward a question's latency.
//   literal: every j with start_j < request_i (the default everywhere)
//   waiting: every j != i with start_j < start_i
enum class LatencyRule { literal, waiting };

double accuracy(std::span<const AnswerRecord> records);
double direct_answer_rate(std::span<const AnswerRecord> records);
double normalized_steps(std::span<const AnswerRecord> records);
double nuwl(std::span<const AnswerRecord> records, const UrgencyTable& urgency,
            LatencyRule rule = LatencyRule::literal);

MetricsResult evaluate(std::span<const AnswerRecord> records, const UrgencyTable& urgency,
                       LatencyRule rule = LatencyRule::literal);

// Unweighted mean of each metric across scenario results.
MetricsResult aggregate(std::span<const MetricsResult> results);

// Running totals fed one answer at a time while an episode executes.
// Latency terms use prefix sums over sorted start times rather than the
// pairwise definition, so it doubles as a cross-check of evaluate().
class Accumulator {
 public:
  void add(const AnswerRecord& record, double urgency);
  std::size_t size() const { return items_.size(); }
  MetricsResult result() const;

 private:
  struct Item {
    QuestionId id;
    double ns;
    double request;
    std::optional<double> start;
    double urgency;
  };
  std::vector<Item> items_;
  std::size_t correct_ = 0;
  std::size_t direct_ = 0;
  double ns_sum_ = 0.0;
};

struct TraceContents {
  std::vector<AnswerRecord> records;
  UrgencyTable urgency;
  std::optional<MetricsResult> stored;
};

// Parses an EpisodeTrace JSONL stream. Throws Error(trace_corruption) on
// malformed or inconsistent content.
TraceContents read_trace(std::istream& in);

struct RecomputeReport {
  MetricsResult stored;
  MetricsResult recomputed;
  bool match = false;
  std::vector<std::string> mismatches;
};

RecomputeReport recompute(std::istream& trace, double tolerance = 1e-9);

// Each direct answer must be backed by at least one memory record observed
// no later than the answer. Returns the offending question ids.
std::vector<QuestionId> audit_direct_answers(std::span<const AnswerRecord> records,
                                             std::span<const double> memory_times);

}  // namespace metrics
}  // namespace eqsa
