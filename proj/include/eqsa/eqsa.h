/* C interface to the embodied-questions scheduling simulator.
 *
 * Every fallible call returns an eqsa_status. On failure the thread's last
 * error message is available from eqsa_last_error() until the next call on
 * the same thread. Strings returned through char** are heap copies owned by
 * the caller and released with eqsa_string_free(). Handles are released with
 * their matching *_free function; passing NULL to a free function is a no-op.
 */
#ifndef EQSA_EQSA_H
#define EQSA_EQSA_H

#include <stddef.h>
#include <stdint.h>

#if defined(EQSA_BUILDING_LIBRARY)
#define EQSA_API __attribute__((visibility("default")))
#else
#define EQSA_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum eqsa_status {
  EQSA_OK = 0,
  EQSA_ERR_INVALID_ARGUMENT = 1,
  EQSA_ERR_INVALID_POSE = 2,
  EQSA_ERR_AMBIGUOUS_QUERY = 3,
  EQSA_ERR_DATASET_INCONSISTENCY = 4,
  EQSA_ERR_DOMAIN = 5,
  EQSA_ERR_DUPLICATE = 6,
  EQSA_ERR_CYCLE = 7,
  EQSA_ERR_UNKNOWN_ROOM = 8,
  EQSA_ERR_GENERATION = 9,
  EQSA_ERR_INVALID_SCENARIO = 10,
  EQSA_ERR_TRACE_CORRUPTION = 11,
  EQSA_ERR_UNDEFINED_METRIC = 12,
  EQSA_ERR_BUDGET_EXHAUSTED = 13,
  EQSA_ERR_IO = 14,
  EQSA_ERR_PARSE = 15,
  EQSA_ERR_NULL_ARGUMENT = 16,
  EQSA_ERR_INTERNAL = 99
} eqsa_status;

typedef struct eqsa_scenario eqsa_scenario;
typedef struct eqsa_config eqsa_config;
typedef struct eqsa_trace eqsa_trace;
typedef struct eqsa_report eqsa_report;

typedef struct eqsa_metrics {
  double acc;
  double dar;
  double ns;
  double nuwl;
} eqsa_metrics;

EQSA_API const char* eqsa_version(void);
EQSA_API const char* eqsa_last_error(void);
EQSA_API const char* eqsa_status_name(eqsa_status status);
EQSA_API void eqsa_string_free(char* s);

/* Scenarios */
EQSA_API eqsa_status eqsa_scenario_load(const char* path, eqsa_scenario** out);
/* base_dir resolves a scene given as a file reference; may be NULL. */
EQSA_API eqsa_status eqsa_scenario_from_json(const char* text, const char* base_dir, eqsa_scenario** out);
EQSA_API eqsa_status eqsa_scenario_generate(uint64_t seed, eqsa_scenario** out);
EQSA_API eqsa_status eqsa_scenario_to_json(const eqsa_scenario* scenario, char** out);
/* Violations as a JSON array of {question_id, message}; *count gets its length. */
EQSA_API eqsa_status eqsa_scenario_validate(const eqsa_scenario* scenario, char** violations_json, size_t* count);
EQSA_API const char* eqsa_scenario_id(const eqsa_scenario* scenario);
EQSA_API size_t eqsa_scenario_question_count(const eqsa_scenario* scenario);
EQSA_API void eqsa_scenario_free(eqsa_scenario* scenario);

/* Run configurations */
EQSA_API eqsa_status eqsa_config_new(eqsa_config** out);
EQSA_API eqsa_status eqsa_config_from_json(const char* text, eqsa_config** out);
EQSA_API eqsa_status eqsa_config_load(const char* path, eqsa_config** out);
EQSA_API eqsa_status eqsa_config_to_json(const eqsa_config* config, char** out);
EQSA_API eqsa_status eqsa_config_name(const eqsa_config* config, char** out);
/* "paraeqsa", "seq_nomem" or "seq_mem". */
EQSA_API eqsa_status eqsa_config_set_mode(eqsa_config* config, const char* mode);
/* "no_priority", "no_urgency", "no_scope", "no_reward" or "no_dependency". */
EQSA_API eqsa_status eqsa_config_add_ablation(eqsa_config* config, const char* ablation);
EQSA_API eqsa_status eqsa_config_set_seed(eqsa_config* config, uint64_t seed);
EQSA_API eqsa_status eqsa_config_clone(const eqsa_config* config, eqsa_config** out);
EQSA_API void eqsa_config_free(eqsa_config* config);

/* Episodes */
EQSA_API eqsa_status eqsa_run(const eqsa_scenario* scenario, const eqsa_config* config, eqsa_trace** out);
EQSA_API eqsa_status eqsa_trace_jsonl(const eqsa_trace* trace, char** out);
EQSA_API eqsa_status eqsa_trace_memory_jsonl(const eqsa_trace* trace, char** out);
EQSA_API eqsa_status eqsa_trace_pool_json(const eqsa_trace* trace, char** out);
EQSA_API eqsa_status eqsa_trace_metrics(const eqsa_trace* trace, eqsa_metrics* out);
EQSA_API size_t eqsa_trace_answer_count(const eqsa_trace* trace);
EQSA_API void eqsa_trace_free(eqsa_trace* trace);

/* Recomputes metrics from a trace's JSONL text. *match is 1 when stored and
 * recomputed values agree within 1e-9, else 0. */
EQSA_API eqsa_status eqsa_metrics_recompute(const char* trace_jsonl, eqsa_metrics* stored,
                                            eqsa_metrics* recomputed, int* match);

/* Benchmarks */
EQSA_API eqsa_status eqsa_bench(const eqsa_scenario* const* scenarios, size_t scenario_count,
                                const eqsa_config* const* configs, size_t config_count, eqsa_report** out);
EQSA_API eqsa_status eqsa_report_json(const eqsa_report* report, char** out);
EQSA_API eqsa_status eqsa_report_csv(const eqsa_report* report, char** out);
EQSA_API size_t eqsa_report_row_count(const eqsa_report* report);
EQSA_API eqsa_status eqsa_report_row(const eqsa_report* report, size_t index, char** config_name,
                                     eqsa_metrics* mean);
EQSA_API void eqsa_report_free(eqsa_report* report);

/* Writes `count` generated scenarios as <out_dir>/<scenario_id>.json. */
EQSA_API eqsa_status eqsa_generate_dataset(uint64_t seed, int count, const char* out_dir, size_t* written);

#ifdef __cplusplus
}
#endif

#endif /* EQSA_EQSA_H */
