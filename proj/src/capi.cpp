#include "eqsa/eqsa.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <memory>
#include <new>
#include <sstream>
#include <string>

#include "eqsa/error.hpp"
#include "eqsa/orchestrator.hpp"
#include "eqsa/serialization.hpp"

struct eqsa_scenario {
  eqsa::Scenario value;
};

struct eqsa_config {
  eqsa::RunConfig value;
};

struct eqsa_trace {
  eqsa::EpisodeTrace value;
};

struct eqsa_report {
  eqsa::BenchReport value;
};

namespace {

thread_local std::string g_last_error;

eqsa_status status_of(eqsa::ErrorCode code) {
  using eqsa::ErrorCode;
  switch (code) {
    case ErrorCode::invalid_argument: return EQSA_ERR_INVALID_ARGUMENT;
    case ErrorCode::invalid_pose: return EQSA_ERR_INVALID_POSE;
    case ErrorCode::ambiguous_query: return EQSA_ERR_AMBIGUOUS_QUERY;
    case ErrorCode::dataset_inconsistency: return EQSA_ERR_DATASET_INCONSISTENCY;
    case ErrorCode::domain: return EQSA_ERR_DOMAIN;
    case ErrorCode::duplicate: return EQSA_ERR_DUPLICATE;
    case ErrorCode::cycle: return EQSA_ERR_CYCLE;
    case ErrorCode::unknown_room: return EQSA_ERR_UNKNOWN_ROOM;
    case ErrorCode::generation: return EQSA_ERR_GENERATION;
    case ErrorCode::invalid_scenario: return EQSA_ERR_INVALID_SCENARIO;
    case ErrorCode::trace_corruption: return EQSA_ERR_TRACE_CORRUPTION;
    case ErrorCode::undefined_metric: return EQSA_ERR_UNDEFINED_METRIC;
    case ErrorCode::budget_exhausted: return EQSA_ERR_BUDGET_EXHAUSTED;
    case ErrorCode::io: return EQSA_ERR_IO;
    case ErrorCode::parse: return EQSA_ERR_PARSE;
  }
  return EQSA_ERR_INTERNAL;
}

eqsa_status fail(eqsa_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <typename Body>
eqsa_status guarded(Body&& body) {
  g_last_error.clear();
  try {
    body();
    return EQSA_OK;
  } catch (const eqsa::Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(EQSA_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(EQSA_ERR_INTERNAL, e.what());
  }
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

#define EQSA_REQUIRE(ptr)                                              \
  do {                                                                 \
    if ((ptr) == nullptr) return fail(EQSA_ERR_NULL_ARGUMENT, #ptr " is NULL"); \
  } while (0)

eqsa_metrics to_c(const eqsa::MetricsResult& m) { return {m.acc, m.dar, m.ns, m.nuwl}; }

}  // namespace

extern "C" {

const char* eqsa_version(void) { return "0.1.0"; }

const char* eqsa_last_error(void) { return g_last_error.c_str(); }

const char* eqsa_status_name(eqsa_status status) {
  switch (status) {
    case EQSA_OK: return "ok";
    case EQSA_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case EQSA_ERR_INVALID_POSE: return "invalid-pose";
    case EQSA_ERR_AMBIGUOUS_QUERY: return "ambiguous-query";
    case EQSA_ERR_DATASET_INCONSISTENCY: return "dataset-inconsistency";
    case EQSA_ERR_DOMAIN: return "domain";
    case EQSA_ERR_DUPLICATE: return "duplicate";
    case EQSA_ERR_CYCLE: return "cycle";
    case EQSA_ERR_UNKNOWN_ROOM: return "unknown-room";
    case EQSA_ERR_GENERATION: return "generation";
    case EQSA_ERR_INVALID_SCENARIO: return "invalid-scenario";
    case EQSA_ERR_TRACE_CORRUPTION: return "trace-corruption";
    case EQSA_ERR_UNDEFINED_METRIC: return "undefined-metric";
    case EQSA_ERR_BUDGET_EXHAUSTED: return "budget-exhausted";
    case EQSA_ERR_IO: return "io";
    case EQSA_ERR_PARSE: return "parse";
    case EQSA_ERR_NULL_ARGUMENT: return "null-argument";
    case EQSA_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

void eqsa_string_free(char* s) { std::free(s); }

// --- scenarios -----------------------------------------------------------------

eqsa_status eqsa_scenario_load(const char* path, eqsa_scenario** out) {
  EQSA_REQUIRE(path);
  EQSA_REQUIRE(out);
  return guarded([&] { *out = new eqsa_scenario{eqsa::load_scenario(path)}; });
}

eqsa_status eqsa_scenario_from_json(const char* text, const char* base_dir, eqsa_scenario** out) {
  EQSA_REQUIRE(text);
  EQSA_REQUIRE(out);
  return guarded([&] {
    eqsa::json j;
    try {
      j = eqsa::json::parse(text);
    } catch (const eqsa::json::parse_error& e) {
      throw eqsa::Error(eqsa::ErrorCode::parse, e.what());
    }
    *out = new eqsa_scenario{eqsa::scenario_from_json(j, base_dir ? base_dir : "")};
  });
}

eqsa_status eqsa_scenario_generate(uint64_t seed, eqsa_scenario** out) {
  EQSA_REQUIRE(out);
  return guarded([&] { *out = new eqsa_scenario{eqsa::generate_scenario(seed)}; });
}

eqsa_status eqsa_scenario_to_json(const eqsa_scenario* scenario, char** out) {
  EQSA_REQUIRE(scenario);
  EQSA_REQUIRE(out);
  return guarded([&] { *out = copy_string(eqsa::scenario_to_json(scenario->value).dump(2)); });
}

eqsa_status eqsa_scenario_validate(const eqsa_scenario* scenario, char** violations_json, size_t* count) {
  EQSA_REQUIRE(scenario);
  return guarded([&] {
    const auto violations = eqsa::validate_scenario(scenario->value);
    if (count) *count = violations.size();
    if (violations_json) {
      eqsa::json arr = eqsa::json::array();
      for (const auto& v : violations) arr.push_back({{"question_id", v.question_id}, {"message", v.message}});
      *violations_json = copy_string(arr.dump());
    }
  });
}

const char* eqsa_scenario_id(const eqsa_scenario* scenario) {
  return scenario ? scenario->value.scenario_id.c_str() : "";
}

size_t eqsa_scenario_question_count(const eqsa_scenario* scenario) {
  return scenario ? scenario->value.initial_questions.size() + scenario->value.followup_questions.size() : 0;
}

void eqsa_scenario_free(eqsa_scenario* scenario) { delete scenario; }

// --- configs ---------------------------------------------------------------------

eqsa_status eqsa_config_new(eqsa_config** out) {
  EQSA_REQUIRE(out);
  return guarded([&] { *out = new eqsa_config{}; });
}

eqsa_status eqsa_config_from_json(const char* text, eqsa_config** out) {
  EQSA_REQUIRE(text);
  EQSA_REQUIRE(out);
  return guarded([&] {
    eqsa::json j;
    try {
      j = eqsa::json::parse(text);
    } catch (const eqsa::json::parse_error& e) {
      throw eqsa::Error(eqsa::ErrorCode::parse, e.what());
    }
    auto cfg = std::make_unique<eqsa_config>();
    eqsa::from_json(j, cfg->value);
    *out = cfg.release();
  });
}

eqsa_status eqsa_config_load(const char* path, eqsa_config** out) {
  EQSA_REQUIRE(path);
  EQSA_REQUIRE(out);
  return guarded([&] {
    auto cfg = std::make_unique<eqsa_config>();
    eqsa::from_json(eqsa::read_json_file(path), cfg->value);
    *out = cfg.release();
  });
}

eqsa_status eqsa_config_to_json(const eqsa_config* config, char** out) {
  EQSA_REQUIRE(config);
  EQSA_REQUIRE(out);
  return guarded([&] {
    eqsa::json j;
    eqsa::to_json(j, config->value);
    *out = copy_string(j.dump(2));
  });
}

eqsa_status eqsa_config_name(const eqsa_config* config, char** out) {
  EQSA_REQUIRE(config);
  EQSA_REQUIRE(out);
  return guarded([&] { *out = copy_string(config->value.name()); });
}

eqsa_status eqsa_config_set_mode(eqsa_config* config, const char* mode) {
  EQSA_REQUIRE(config);
  EQSA_REQUIRE(mode);
  return guarded([&] { config->value.mode = eqsa::mode_from_string(mode); });
}

eqsa_status eqsa_config_add_ablation(eqsa_config* config, const char* ablation) {
  EQSA_REQUIRE(config);
  EQSA_REQUIRE(ablation);
  return guarded([&] { config->value.ablations.insert(eqsa::ablation_from_string(ablation)); });
}

eqsa_status eqsa_config_set_seed(eqsa_config* config, uint64_t seed) {
  EQSA_REQUIRE(config);
  config->value.seed = seed;
  return EQSA_OK;
}

eqsa_status eqsa_config_clone(const eqsa_config* config, eqsa_config** out) {
  EQSA_REQUIRE(config);
  EQSA_REQUIRE(out);
  return guarded([&] { *out = new eqsa_config{config->value}; });
}

void eqsa_config_free(eqsa_config* config) { delete config; }

// --- episodes --------------------------------------------------------------------

eqsa_status eqsa_run(const eqsa_scenario* scenario, const eqsa_config* config, eqsa_trace** out) {
  EQSA_REQUIRE(scenario);
  EQSA_REQUIRE(config);
  EQSA_REQUIRE(out);
  return guarded([&] { *out = new eqsa_trace{eqsa::run_scenario(scenario->value, config->value)}; });
}

eqsa_status eqsa_trace_jsonl(const eqsa_trace* trace, char** out) {
  EQSA_REQUIRE(trace);
  EQSA_REQUIRE(out);
  return guarded([&] { *out = copy_string(trace->value.to_jsonl()); });
}

eqsa_status eqsa_trace_memory_jsonl(const eqsa_trace* trace, char** out) {
  EQSA_REQUIRE(trace);
  EQSA_REQUIRE(out);
  return guarded([&] {
    std::string text;
    for (const auto& rec : trace->value.memory) text += eqsa::json(rec).dump() + "\n";
    *out = copy_string(text);
  });
}

eqsa_status eqsa_trace_pool_json(const eqsa_trace* trace, char** out) {
  EQSA_REQUIRE(trace);
  EQSA_REQUIRE(out);
  return guarded([&] {
    eqsa::json arr = eqsa::json::array();
    eqsa::json edges = eqsa::json::array();
    for (const auto& [from, to] : trace->value.dag_edges) edges.push_back({from, to});
    for (const auto& e : trace->value.pool) {
      eqsa::json item{{"question_id", e.id()},
                      {"status", std::string(eqsa::to_string(e.status))},
                      {"request_time", e.request_time},
                      {"priority", e.priority},
                      {"urgency_est", e.parsed.urgency_est},
                      {"scope", std::string(eqsa::to_string(e.parsed.scope))},
                      {"urgency", e.components.urgency},
                      {"scope_component", e.components.scope},
                      {"reward", e.components.reward},
                      {"dependency", e.components.dependency}};
      item["start_time"] = e.start_time ? eqsa::json(*e.start_time) : eqsa::json(nullptr);
      arr.push_back(std::move(item));
    }
    *out = copy_string(eqsa::json{{"entries", arr}, {"edges", edges}}.dump(2));
  });
}

eqsa_status eqsa_trace_metrics(const eqsa_trace* trace, eqsa_metrics* out) {
  EQSA_REQUIRE(trace);
  EQSA_REQUIRE(out);
  *out = to_c(trace->value.metrics);
  return EQSA_OK;
}

size_t eqsa_trace_answer_count(const eqsa_trace* trace) { return trace ? trace->value.answers.size() : 0; }

void eqsa_trace_free(eqsa_trace* trace) { delete trace; }

eqsa_status eqsa_metrics_recompute(const char* trace_jsonl, eqsa_metrics* stored, eqsa_metrics* recomputed,
                                   int* match) {
  EQSA_REQUIRE(trace_jsonl);
  return guarded([&] {
    std::istringstream in(trace_jsonl);
    const auto report = eqsa::metrics::recompute(in);
    if (stored) *stored = to_c(report.stored);
    if (recomputed) *recomputed = to_c(report.recomputed);
    if (match) *match = report.match ? 1 : 0;
  });
}

// --- benchmarks ----------------------------------------------------------------

eqsa_status eqsa_bench(const eqsa_scenario* const* scenarios, size_t scenario_count,
                       const eqsa_config* const* configs, size_t config_count, eqsa_report** out) {
  EQSA_REQUIRE(scenarios);
  EQSA_REQUIRE(configs);
  EQSA_REQUIRE(out);
  return guarded([&] {
    std::vector<eqsa::Scenario> sc;
    for (size_t i = 0; i < scenario_count; ++i) {
      if (!scenarios[i]) throw eqsa::Error(eqsa::ErrorCode::invalid_argument, "NULL scenario in list");
      sc.push_back(scenarios[i]->value);
    }
    std::vector<eqsa::RunConfig> cfg;
    for (size_t i = 0; i < config_count; ++i) {
      if (!configs[i]) throw eqsa::Error(eqsa::ErrorCode::invalid_argument, "NULL config in list");
      cfg.push_back(configs[i]->value);
    }
    *out = new eqsa_report{eqsa::run_suite(sc, cfg)};
  });
}

eqsa_status eqsa_report_json(const eqsa_report* report, char** out) {
  EQSA_REQUIRE(report);
  EQSA_REQUIRE(out);
  return guarded([&] { *out = copy_string(report->value.to_json().dump(2)); });
}

eqsa_status eqsa_report_csv(const eqsa_report* report, char** out) {
  EQSA_REQUIRE(report);
  EQSA_REQUIRE(out);
  return guarded([&] { *out = copy_string(report->value.to_csv()); });
}

size_t eqsa_report_row_count(const eqsa_report* report) { return report ? report->value.rows.size() : 0; }

eqsa_status eqsa_report_row(const eqsa_report* report, size_t index, char** config_name, eqsa_metrics* mean) {
  EQSA_REQUIRE(report);
  if (index >= report->value.rows.size()) return fail(EQSA_ERR_INVALID_ARGUMENT, "row index out of range");
  return guarded([&] {
    const auto& row = report->value.rows[index];
    if (config_name) *config_name = copy_string(row.config_name);
    if (mean) *mean = to_c(row.mean);
  });
}

void eqsa_report_free(eqsa_report* report) { delete report; }

eqsa_status eqsa_generate_dataset(uint64_t seed, int count, const char* out_dir, size_t* written) {
  EQSA_REQUIRE(out_dir);
  return guarded([&] {
    const auto scenarios = eqsa::generate_dataset(seed, count);
    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    for (const auto& s : scenarios) eqsa::save_scenario(s, dir / (s.scenario_id + ".json"));
    if (written) *written = scenarios.size();
  });
}

}  // extern "C"
