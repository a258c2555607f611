// Command-line front end. Talks to the simulator only through the C API.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "eqsa/eqsa.h"

namespace fs = std::filesystem;

namespace {

struct CString {
  char* p = nullptr;
  ~CString() { eqsa_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

int report(eqsa_status s, const std::string& what) {
  std::cerr << "eqsa: " << what << ": " << eqsa_status_name(s) << ": " << eqsa_last_error() << "\n";
  return 2;
}

bool write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    std::cerr << "eqsa: cannot write " << path << "\n";
    return false;
  }
  return true;
}

std::vector<std::string> split_list(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const auto& item : items) {
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ','))
      if (!part.empty()) out.push_back(part);
  }
  return out;
}

eqsa_status load_config(const std::string& path, eqsa_config** out) {
  return path.empty() ? eqsa_config_new(out) : eqsa_config_load(path.c_str(), out);
}

int cmd_run(const std::string& scenario_path, const std::string& config_path, const std::string& trace_out,
            const std::string& memory_out, const std::string& pool_out) {
  eqsa_scenario* scenario = nullptr;
  if (auto s = eqsa_scenario_load(scenario_path.c_str(), &scenario); s != EQSA_OK) return report(s, scenario_path);
  eqsa_config* config = nullptr;
  if (auto s = load_config(config_path, &config); s != EQSA_OK) {
    eqsa_scenario_free(scenario);
    return report(s, config_path);
  }
  eqsa_trace* trace = nullptr;
  const auto s = eqsa_run(scenario, config, &trace);
  eqsa_config_free(config);
  eqsa_scenario_free(scenario);
  if (s != EQSA_OK) return report(s, "run");

  int rc = 0;
  CString text;
  eqsa_trace_jsonl(trace, &text.p);
  if (!trace_out.empty() && !write_file(trace_out, text.str())) rc = 2;
  if (!memory_out.empty()) {
    CString mem;
    eqsa_trace_memory_jsonl(trace, &mem.p);
    if (!write_file(memory_out, mem.str())) rc = 2;
  }
  if (!pool_out.empty()) {
    CString pool;
    eqsa_trace_pool_json(trace, &pool.p);
    if (!write_file(pool_out, pool.str() + "\n")) rc = 2;
  }
  eqsa_metrics m{};
  eqsa_trace_metrics(trace, &m);
  std::printf("answers=%zu Acc=%.4f DAR=%.4f NS=%.4f NUWL=%.4f\n", eqsa_trace_answer_count(trace), m.acc, m.dar,
              m.ns, m.nuwl);
  eqsa_trace_free(trace);
  return rc;
}

int cmd_bench(const std::string& dir, const std::vector<std::string>& modes_in,
              const std::vector<std::string>& ablations_in, const std::string& config_path,
              const std::string& report_path, std::uint64_t seed) {
  std::vector<fs::path> files;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(dir, ec))
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  if (ec) {
    std::cerr << "eqsa: cannot list " << dir << ": " << ec.message() << "\n";
    return 2;
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    std::cerr << "eqsa: no scenario files in " << dir << "\n";
    return 2;
  }

  std::vector<eqsa_scenario*> scenarios;
  std::vector<eqsa_config*> configs;
  auto cleanup = [&] {
    for (auto* s : scenarios) eqsa_scenario_free(s);
    for (auto* c : configs) eqsa_config_free(c);
  };
  for (const auto& f : files) {
    eqsa_scenario* s = nullptr;
    if (auto st = eqsa_scenario_load(f.string().c_str(), &s); st != EQSA_OK) {
      cleanup();
      return report(st, f.string());
    }
    scenarios.push_back(s);
  }

  auto make = [&](const std::string& mode, const std::string& ablation) -> eqsa_status {
    eqsa_config* c = nullptr;
    if (auto st = load_config(config_path, &c); st != EQSA_OK) return st;
    configs.push_back(c);
    eqsa_config_set_seed(c, seed);
    if (auto st = eqsa_config_set_mode(c, mode.c_str()); st != EQSA_OK) return st;
    if (!ablation.empty()) return eqsa_config_add_ablation(c, ablation.c_str());
    return EQSA_OK;
  };
  auto modes = split_list(modes_in);
  if (modes.empty()) modes = {"paraeqsa", "seq_nomem", "seq_mem"};
  for (const auto& m : modes) {
    if (auto st = make(m, ""); st != EQSA_OK) {
      cleanup();
      return report(st, "config " + m);
    }
  }
  for (const auto& a : split_list(ablations_in)) {
    if (auto st = make("paraeqsa", a); st != EQSA_OK) {
      cleanup();
      return report(st, "ablation " + a);
    }
  }

  eqsa_report* rep = nullptr;
  const auto st = eqsa_bench(scenarios.data(), scenarios.size(), configs.data(), configs.size(), &rep);
  cleanup();
  if (st != EQSA_OK) return report(st, "bench");

  CString json, csv;
  eqsa_report_json(rep, &json.p);
  eqsa_report_csv(rep, &csv.p);
  eqsa_report_free(rep);
  std::cout << csv.str();
  if (!report_path.empty()) {
    fs::path csv_path(report_path);
    csv_path.replace_extension(".csv");
    if (!write_file(report_path, json.str() + "\n") || !write_file(csv_path, csv.str())) return 2;
  }
  return 0;
}

int cmd_generate(std::uint64_t seed, int count, const std::string& out) {
  std::size_t written = 0;
  if (auto s = eqsa_generate_dataset(seed, count, out.c_str(), &written); s != EQSA_OK) return report(s, "generate");
  std::printf("wrote %zu scenarios to %s\n", written, out.c_str());
  return 0;
}

int cmd_recompute(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "eqsa: cannot open " << path << "\n";
    return 2;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  eqsa_metrics stored{}, recomputed{};
  int match = 0;
  if (auto s = eqsa_metrics_recompute(buf.str().c_str(), &stored, &recomputed, &match); s != EQSA_OK) {
    return report(s, path);
  }
  std::printf("metric    stored               recomputed\n");
  std::printf("Acc   %.17g  %.17g\n", stored.acc, recomputed.acc);
  std::printf("DAR   %.17g  %.17g\n", stored.dar, recomputed.dar);
  std::printf("NS    %.17g  %.17g\n", stored.ns, recomputed.ns);
  std::printf("NUWL  %.17g  %.17g\n", stored.nuwl, recomputed.nuwl);
  std::printf("%s\n", match ? "match" : "MISMATCH");
  return match ? 0 : 1;
}

int cmd_validate(const std::vector<std::string>& paths) {
  int rc = 0;
  for (const auto& p : paths) {
    eqsa_scenario* s = nullptr;
    if (auto st = eqsa_scenario_load(p.c_str(), &s); st != EQSA_OK) {
      report(st, p);
      rc = 1;
      continue;
    }
    CString violations;
    std::size_t n = 0;
    eqsa_scenario_validate(s, &violations.p, &n);
    eqsa_scenario_free(s);
    if (n == 0) {
      std::printf("%s: ok\n", p.c_str());
    } else {
      std::printf("%s: %zu violation(s) %s\n", p.c_str(), n, violations.str().c_str());
      rc = 1;
    }
  }
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Embodied-questions scheduling simulator"};
  app.require_subcommand(1);

  std::string scenario, config, trace_out, memory_out, pool_out;
  auto* run = app.add_subcommand("run", "Run one scenario and write its trace");
  run->add_option("--scenario", scenario, "Scenario JSON")->required()->check(CLI::ExistingFile);
  run->add_option("--config", config, "RunConfig JSON (defaults when omitted)")->check(CLI::ExistingFile);
  run->add_option("--trace-out", trace_out, "EpisodeTrace JSONL output");
  run->add_option("--memory-out", memory_out, "Memory dump JSONL output");
  run->add_option("--pool-out", pool_out, "Final pool state JSON output");

  std::string scenarios_dir, report_path;
  std::vector<std::string> modes, ablations;
  std::uint64_t seed = 0;
  auto* bench = app.add_subcommand("bench", "Run every scenario under every configuration");
  bench->add_option("--scenarios", scenarios_dir, "Directory of scenario JSON files")
      ->required()
      ->check(CLI::ExistingDirectory);
  bench->add_option("--modes", modes, "Comma-separated modes")->delimiter(',');
  bench->add_option("--ablations", ablations, "Comma-separated ablations applied to paraeqsa")->delimiter(',');
  bench->add_option("--config", config, "Base RunConfig JSON")->check(CLI::ExistingFile);
  bench->add_option("--report", report_path, "Report JSON path; CSV is written alongside");
  bench->add_option("--seed", seed, "Run seed");

  std::uint64_t gen_seed = 0;
  int count = 40;
  std::string out_dir;
  auto* gen = app.add_subcommand("generate", "Generate a scenario dataset");
  gen->add_option("--seed", gen_seed, "Dataset seed")->required();
  gen->add_option("--count", count, "Number of scenarios")->check(CLI::PositiveNumber);
  gen->add_option("--out,--out-dir", out_dir, "Output directory")->required();

  std::string trace_path;
  auto* metrics = app.add_subcommand("metrics", "Metric utilities");
  metrics->require_subcommand(1);
  auto* recompute = metrics->add_subcommand("recompute", "Recompute metrics from a trace and compare");
  recompute->add_option("--trace", trace_path, "EpisodeTrace JSONL")->required()->check(CLI::ExistingFile);

  std::vector<std::string> validate_paths;
  auto* validate = app.add_subcommand("validate", "Check scenario files");
  validate->add_option("scenarios", validate_paths, "Scenario JSON files")->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  if (*run) return cmd_run(scenario, config, trace_out, memory_out, pool_out);
  if (*bench) return cmd_bench(scenarios_dir, modes, ablations, config, report_path, seed);
  if (*gen) return cmd_generate(gen_seed, count, out_dir);
  if (*recompute) return cmd_recompute(trace_path);
  if (*validate) return cmd_validate(validate_paths);
  return 1;
}
