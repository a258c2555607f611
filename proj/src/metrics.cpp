#include "eqsa/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "eqsa/error.hpp"
#include "eqsa/serialization.hpp"

namespace eqsa::metrics {

namespace {

void require_records(std::span<const AnswerRecord> records, const char* what) {
  if (records.empty()) throw Error(ErrorCode::undefined_metric, std::string(what) + " of zero questions");
}

double ns_of(const AnswerRecord& r) {
  if (r.max_steps <= 0) {
    throw Error(ErrorCode::invalid_argument, "question '" + r.question_id + "' has max_steps <= 0");
  }
  return static_cast<double>(r.used_steps) / static_cast<double>(r.max_steps);
}

void check_start(const AnswerRecord& r) {
  if (r.used_steps > 0 && !r.start_time) {
    throw Error(ErrorCode::trace_corruption, "explored question '" + r.question_id + "' has no start time");
  }
}

double urgency_of(const UrgencyTable& urgency, const QuestionId& id) {
  auto it = urgency.find(id);
  if (it == urgency.end()) throw Error(ErrorCode::trace_corruption, "no urgency for question '" + id + "'");
  return it->second;
}

}  // namespace

double accuracy(std::span<const AnswerRecord> records) {
  require_records(records, "accuracy");
  const auto n = std::count_if(records.begin(), records.end(), [](const auto& r) { return r.correct; });
  return static_cast<double>(n) / static_cast<double>(records.size());
}

double direct_answer_rate(std::span<const AnswerRecord> records) {
  require_records(records, "direct answer rate");
  const auto n = std::count_if(records.begin(), records.end(), [](const auto& r) { return r.used_steps == 0; });
  return static_cast<double>(n) / static_cast<double>(records.size());
}

double normalized_steps(std::span<const AnswerRecord> records) {
  require_records(records, "normalized steps");
  double sum = 0.0;
  for (const auto& r : records) sum += ns_of(r);
  return sum / static_cast<double>(records.size());
}

double nuwl(std::span<const AnswerRecord> records, const UrgencyTable& urgency, LatencyRule rule) {
  return evaluate(records, urgency, rule).nuwl;
}

MetricsResult evaluate(std::span<const AnswerRecord> records, const UrgencyTable& urgency, LatencyRule rule) {
  require_records(records, "metrics");
  for (const auto& r : records) check_start(r);

  MetricsResult out;
  out.acc = accuracy(records);
  out.dar = direct_answer_rate(records);
  out.ns = normalized_steps(records);

  double total = 0.0;
  for (const auto& ri : records) {
    const double ns_i = ns_of(ri);
    double latency = ns_i;
    for (const auto& rj : records) {
      if (&rj == &ri || !rj.start_time) continue;
      if (rule == LatencyRule::literal) {
        if (*rj.start_time < ri.request_time) latency += ns_of(rj);
      } else {
        const double own = ri.start_time.value_or(ri.request_time);
        if (*rj.start_time < own) latency += ns_of(rj);
      }
    }
    const double weighted = urgency_of(urgency, ri.question_id) * latency;
    total += weighted;
    out.per_question.push_back({ri.question_id, ns_i, latency, weighted});
  }
  out.nuwl = total / static_cast<double>(records.size());
  return out;
}

MetricsResult aggregate(std::span<const MetricsResult> results) {
  if (results.empty()) throw Error(ErrorCode::undefined_metric, "aggregate of zero results");
  MetricsResult out;
  for (const auto& r : results) {
    out.acc += r.acc;
    out.dar += r.dar;
    out.ns += r.ns;
    out.nuwl += r.nuwl;
  }
  const auto n = static_cast<double>(results.size());
  out.acc /= n;
  out.dar /= n;
  out.ns /= n;
  out.nuwl /= n;
  return out;
}

// --- Accumulator --------------------------------------------------------------

void Accumulator::add(const AnswerRecord& record, double urgency) {
  check_start(record);
  const double ns = ns_of(record);
  items_.push_back({record.question_id, ns, record.request_time, record.start_time, urgency});
  if (record.correct) ++correct_;
  if (record.used_steps == 0) ++direct_;
  ns_sum_ += ns;
}

MetricsResult Accumulator::result() const {
  if (items_.empty()) throw Error(ErrorCode::undefined_metric, "metrics of zero questions");
  const auto n = static_cast<double>(items_.size());

  // (start, ns) sorted by start; prefix[k] = sum of the first k ns values.
  std::vector<std::pair<double, double>> starts;
  for (const auto& it : items_)
    if (it.start) starts.emplace_back(*it.start, it.ns);
  std::sort(starts.begin(), starts.end());
  std::vector<double> prefix(starts.size() + 1, 0.0);
  for (std::size_t k = 0; k < starts.size(); ++k) prefix[k + 1] = prefix[k] + starts[k].second;

  MetricsResult out;
  out.acc = static_cast<double>(correct_) / n;
  out.dar = static_cast<double>(direct_) / n;
  out.ns = ns_sum_ / n;
  double total = 0.0;
  for (const auto& it : items_) {
    const auto cut = std::lower_bound(starts.begin(), starts.end(), it.request,
                                      [](const auto& s, double t) { return s.first < t; });
    double latency = prefix[static_cast<std::size_t>(cut - starts.begin())] + it.ns;
    // A question never starts before its own request, so it is not in the prefix.
    const double weighted = it.urgency * latency;
    total += weighted;
    out.per_question.push_back({it.id, it.ns, latency, weighted});
  }
  out.nuwl = total / n;
  return out;
}

// --- trace reading ------------------------------------------------------------

TraceContents read_trace(std::istream& in) {
  TraceContents out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json msg;
    try {
      msg = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::trace_corruption, "line " + std::to_string(line_no) + ": " + e.what());
    }
    try {
      const auto topic = msg.at("topic").get<std::string>();
      const json& payload = msg.at("payload");
      if (topic == "question-arrived") {
        const auto q = payload.at("question").get<Question>();
        out.urgency[q.question_id] = q.urgency_true;
      } else if (topic == "answered") {
        out.records.push_back(payload.at("record").get<AnswerRecord>());
      } else if (topic == "episode-end") {
        out.stored = payload.at("metrics").get<MetricsResult>();
      }
    } catch (const json::exception& e) {
      throw Error(ErrorCode::trace_corruption, "line " + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(ErrorCode::trace_corruption, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  for (const auto& r : out.records) {
    if (!out.urgency.count(r.question_id)) {
      throw Error(ErrorCode::trace_corruption, "answer for unknown question '" + r.question_id + "'");
    }
  }
  return out;
}

RecomputeReport recompute(std::istream& trace, double tolerance) {
  const auto contents = read_trace(trace);
  if (!contents.stored) throw Error(ErrorCode::trace_corruption, "trace has no stored metrics");
  RecomputeReport report;
  report.stored = *contents.stored;
  report.recomputed = evaluate(contents.records, contents.urgency);
  auto cmp = [&](const char* name, double a, double b) {
    if (!(std::fabs(a - b) <= tolerance)) {
      std::ostringstream s;
      s.precision(17);
      s << name << ": stored " << a << " recomputed " << b;
      report.mismatches.push_back(s.str());
    }
  };
  cmp("acc", report.stored.acc, report.recomputed.acc);
  cmp("dar", report.stored.dar, report.recomputed.dar);
  cmp("ns", report.stored.ns, report.recomputed.ns);
  cmp("nuwl", report.stored.nuwl, report.recomputed.nuwl);
  report.match = report.mismatches.empty();
  return report;
}

std::vector<QuestionId> audit_direct_answers(std::span<const AnswerRecord> records,
                                             std::span<const double> memory_times) {
  std::vector<QuestionId> bad;
  for (const auto& r : records) {
    if (!r.direct) continue;
    const bool backed = std::any_of(memory_times.begin(), memory_times.end(),
                                    [&](double t) { return t <= r.answer_time; });
    if (!backed) bad.push_back(r.question_id);
  }
  return bad;
}

}  // namespace eqsa::metrics
