#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "eqsa/error.hpp"
#include "eqsa/metrics.hpp"
#include "eqsa/orchestrator.hpp"

using namespace eqsa;

namespace {

AnswerRecord rec(const std::string& id, int used, double request, std::optional<double> start, bool correct = true,
                 int max_steps = 40) {
  AnswerRecord r;
  r.question_id = id;
  r.used_steps = used;
  r.max_steps = max_steps;
  r.direct = used == 0;
  r.correct = correct;
  r.request_time = request;
  r.start_time = start;
  r.answer_time = start.value_or(request) + used;
  return r;
}

// Weighted latency sum iterated term by term over the definition.
double nuwl_oracle(const std::vector<AnswerRecord>& rs, const UrgencyTable& u) {
  double total = 0.0;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    double inner = 0.0;
    for (std::size_t j = 0; j < rs.size(); ++j) {
      if (j == i || !rs[j].start_time) continue;
      if (*rs[j].start_time < rs[i].request_time) inner += double(rs[j].used_steps) / rs[j].max_steps;
    }
    inner += double(rs[i].used_steps) / rs[i].max_steps;
    total += u.at(rs[i].question_id) * inner;
  }
  return total / double(rs.size());
}

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no eqsa::Error thrown";
  return ErrorCode::io;
}

struct Case {
  std::vector<AnswerRecord> records;
  UrgencyTable urgency;
};

Case random_case(std::mt19937& gen) {
  Case c;
  const int n = 1 + static_cast<int>(gen() % 8);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  for (int i = 0; i < n; ++i) {
    const std::string id = "q" + std::to_string(i);
    const int max_steps = 10 + static_cast<int>(gen() % 40);
    const int used = gen() % 3 == 0 ? 0 : static_cast<int>(gen() % static_cast<unsigned>(max_steps + 1));
    const double request = static_cast<double>(gen() % 4) * 60.0;
    const double start = request + static_cast<double>(gen() % 200);
    c.records.push_back(rec(id, used, request, start, gen() % 2 == 0, max_steps));
    c.urgency[id] = u(gen);
  }
  return c;
}

}  // namespace

TEST(Metrics, AccuracyExamples) {
  std::vector<AnswerRecord> rs;
  for (int i = 0; i < 5; ++i) rs.push_back(rec("q" + std::to_string(i), 0, 0, 0, i < 3));
  EXPECT_DOUBLE_EQ(metrics::accuracy(rs), 0.6);
  for (auto& r : rs) r.correct = true;
  EXPECT_DOUBLE_EQ(metrics::accuracy(rs), 1.0);
}

TEST(Metrics, DirectAnswerRateExamples) {
  std::vector<AnswerRecord> rs;
  for (int i = 0; i < 5; ++i) rs.push_back(rec("q" + std::to_string(i), i < 2 ? 0 : 5, 0, 0));
  EXPECT_DOUBLE_EQ(metrics::direct_answer_rate(rs), 0.4);
  for (auto& r : rs) r.used_steps = 7;
  EXPECT_DOUBLE_EQ(metrics::direct_answer_rate(rs), 0.0);
}

TEST(Metrics, NormalizedStepsExamples) {
  std::vector<AnswerRecord> rs = {rec("a", 0, 0, 0), rec("b", 20, 0, 0), rec("c", 40, 0, 0)};
  EXPECT_DOUBLE_EQ(metrics::normalized_steps(rs), 0.5);
  EXPECT_DOUBLE_EQ(metrics::evaluate(rs, {{"a", .1}, {"b", .1}, {"c", .1}}).per_question[1].ns, 0.5);
  for (auto& r : rs) r.used_steps = 0;
  EXPECT_EQ(metrics::normalized_steps(rs), 0.0);
}

TEST(Metrics, NuwlSingleQuestion) {
  std::vector<AnswerRecord> rs = {rec("q1", 10, 0, 0)};
  EXPECT_NEAR(metrics::nuwl(rs, {{"q1", 0.8}}), 0.2, 1e-15);
}

TEST(Metrics, NuwlHandTrace) {
  std::vector<AnswerRecord> rs = {rec("q1", 10, 0, 0), rec("q2", 20, 120, 125)};
  EXPECT_NEAR(metrics::nuwl(rs, {{"q1", 0.8}, {"q2", 0.2}}), 0.175, 1e-12);
}

TEST(Metrics, NuwlZeroSteps) {
  std::vector<AnswerRecord> rs = {rec("a", 0, 0, 0), rec("b", 0, 120, 120)};
  EXPECT_EQ(metrics::nuwl(rs, {{"a", 0.9}, {"b", 0.9}}), 0.0);
}

TEST(Metrics, StrictInequalityOnStartTimes) {
  // b starts exactly when c is requested, so it does not count toward c.
  std::vector<AnswerRecord> rs = {rec("b", 20, 0, 120), rec("c", 10, 120, 150)};
  const auto m = metrics::evaluate(rs, {{"b", 1.0}, {"c", 1.0}});
  EXPECT_DOUBLE_EQ(m.per_question[1].latency, 0.25);
  EXPECT_DOUBLE_EQ(m.per_question[0].latency, 0.5);
}

TEST(Metrics, WaitingRuleCountsEarlierStarts) {
  std::vector<AnswerRecord> rs = {rec("a", 20, 0, 0), rec("b", 10, 0, 20)};
  const UrgencyTable u{{"a", 1.0}, {"b", 1.0}};
  EXPECT_DOUBLE_EQ(metrics::evaluate(rs, u).per_question[1].latency, 0.25);
  EXPECT_DOUBLE_EQ(metrics::evaluate(rs, u, metrics::LatencyRule::waiting).per_question[1].latency, 0.75);
}

TEST(Metrics, Errors) {
  std::vector<AnswerRecord> none;
  EXPECT_EQ(code_of([&] { metrics::accuracy(none); }), ErrorCode::undefined_metric);
  EXPECT_EQ(code_of([&] { metrics::direct_answer_rate(none); }), ErrorCode::undefined_metric);
  EXPECT_EQ(code_of([&] { metrics::normalized_steps(none); }), ErrorCode::undefined_metric);
  EXPECT_EQ(code_of([&] { metrics::evaluate(none, {}); }), ErrorCode::undefined_metric);
  std::vector<AnswerRecord> no_start = {rec("q", 5, 0, std::nullopt)};
  EXPECT_EQ(code_of([&] { metrics::nuwl(no_start, {{"q", 0.5}}); }), ErrorCode::trace_corruption);
  std::vector<AnswerRecord> ok = {rec("q", 5, 0, 0)};
  EXPECT_EQ(code_of([&] { metrics::nuwl(ok, {}); }), ErrorCode::trace_corruption);
  EXPECT_EQ(code_of([] { metrics::aggregate(std::vector<MetricsResult>{}); }), ErrorCode::undefined_metric);
}

TEST(Metrics, Aggregate) {
  MetricsResult a, b;
  a.ns = 0.2;
  b.ns = 0.4;
  a.acc = b.acc = 0.6;
  const auto m = metrics::aggregate(std::vector<MetricsResult>{a, b});
  EXPECT_DOUBLE_EQ(m.ns, 0.3);
  EXPECT_DOUBLE_EQ(m.acc, 0.6);
}

TEST(Metrics, AuditDirectAnswers) {
  std::vector<AnswerRecord> rs = {rec("a", 0, 0, 5), rec("b", 0, 0, 1), rec("c", 4, 0, 0)};
  rs[0].answer_time = 5;
  rs[1].answer_time = 1;
  const std::vector<double> times = {3.0};
  EXPECT_EQ(metrics::audit_direct_answers(rs, times), (std::vector<QuestionId>{"b"}));
}

// --- properties ---------------------------------------------------------------

TEST(MetricsProperties, EvaluateAccumulatorAndOracleAgree) {
  std::mt19937 gen(31);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto c = random_case(gen);
    const auto m = metrics::evaluate(c.records, c.urgency);
    metrics::Accumulator acc;
    for (const auto& r : c.records) acc.add(r, c.urgency.at(r.question_id));
    const auto inc = acc.result();
    const double oracle = nuwl_oracle(c.records, c.urgency);
    ASSERT_NEAR(m.nuwl, oracle, 1e-9);
    ASSERT_NEAR(inc.nuwl, oracle, 1e-9);
    ASSERT_NEAR(inc.ns, m.ns, 1e-9);
    ASSERT_EQ(inc.acc, m.acc);
    ASSERT_EQ(inc.dar, m.dar);
    const double n = static_cast<double>(c.records.size());
    ASSERT_NEAR(m.acc * n, std::round(m.acc * n), 1e-9);
    ASSERT_NEAR(m.dar * n, std::round(m.dar * n), 1e-9);
    double ns_sum = 0.0;
    for (const auto& q : m.per_question) ns_sum += q.ns;
    ASSERT_NEAR(m.ns, ns_sum / n, 1e-12);
  }
}

TEST(MetricsProperties, NuwlMonotoneInSteps) {
  std::mt19937 gen(32);
  for (int trial = 0; trial < 500; ++trial) {
    auto c = random_case(gen);
    const std::size_t j = gen() % c.records.size();
    const double before = metrics::nuwl(c.records, c.urgency);
    auto& r = c.records[j];
    r.used_steps = std::min(r.max_steps, r.used_steps + 1 + static_cast<int>(gen() % 5));
    r.direct = r.used_steps == 0;
    EXPECT_GE(metrics::nuwl(c.records, c.urgency), before);
  }
}

TEST(MetricsProperties, ZeroUrgencyRemovesExactlyItsTerm) {
  std::mt19937 gen(33);
  for (int trial = 0; trial < 500; ++trial) {
    auto c = random_case(gen);
    const std::size_t i = gen() % c.records.size();
    const auto before = metrics::evaluate(c.records, c.urgency);
    const double n = static_cast<double>(c.records.size());
    c.urgency[c.records[i].question_id] = 0.0;
    const auto after = metrics::evaluate(c.records, c.urgency);
    EXPECT_NEAR((before.nuwl - after.nuwl) * n, before.per_question[i].weighted_latency, 1e-9);
  }
}

// --- traces ---------------------------------------------------------------------

namespace {

std::string sample_trace() {
  static const std::string text = run_scenario(generate_scenario(8), RunConfig{}).to_jsonl();
  return text;
}

}  // namespace

TEST(Recompute, MatchesStoredMetrics) {
  std::istringstream in(sample_trace());
  const auto r = metrics::recompute(in);
  EXPECT_TRUE(r.match);
  EXPECT_TRUE(r.mismatches.empty());
  EXPECT_EQ(r.recomputed.per_question.size(), 5u);
}

TEST(Recompute, ReadTraceCollectsRecordsAndUrgency) {
  std::istringstream in(sample_trace());
  const auto t = metrics::read_trace(in);
  EXPECT_EQ(t.records.size(), 5u);
  EXPECT_EQ(t.urgency.size(), 5u);
  ASSERT_TRUE(t.stored);
  EXPECT_NEAR(metrics::evaluate(t.records, t.urgency).nuwl, t.stored->nuwl, 1e-12);
}

TEST(Recompute, TamperedMetricsMismatch) {
  std::istringstream lines(sample_trace());
  std::ostringstream out;
  std::string line;
  while (std::getline(lines, line)) {
    auto j = json::parse(line);
    if (j["topic"] == "episode-end") j["payload"]["metrics"]["nuwl"] = j["payload"]["metrics"]["nuwl"].get<double>() + 0.01;
    out << j.dump() << "\n";
  }
  std::istringstream in(out.str());
  const auto r = metrics::recompute(in);
  EXPECT_FALSE(r.match);
  EXPECT_FALSE(r.mismatches.empty());
}

TEST(Recompute, CorruptTraceIsRejected) {
  std::string text = sample_trace();
  text.insert(text.size() / 2, "{not json");
  std::istringstream in(text);
  EXPECT_EQ(code_of([&] { metrics::recompute(in); }), ErrorCode::trace_corruption);

  std::istringstream missing("{\"seq\":0,\"topic\":\"answered\",\"topic_seq\":0,\"t\":0,\"payload\":{}}\n");
  EXPECT_EQ(code_of([&] { metrics::read_trace(missing); }), ErrorCode::trace_corruption);
}
