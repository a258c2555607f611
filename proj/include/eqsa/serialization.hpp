#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include <json.hpp>

#include "eqsa/group_memory.hpp"
#include "eqsa/metrics.hpp"
#include "eqsa/query.hpp"
#include "eqsa/question.hpp"
#include "eqsa/scene.hpp"

namespace eqsa {

using json = nlohmann::json;

// ADL hooks for nlohmann::json. Readers throw Error(parse) on malformed input.
void to_json(json& j, const Cell& c);  // [x, y]
void from_json(const json& j, Cell& c);
void to_json(json& j, const Pose& p);
void from_json(const json& j, Pose& p);
void to_json(json& j, const Query& q);
void from_json(const json& j, Query& q);
void to_json(json& j, const Question& q);
void from_json(const json& j, Question& q);
void to_json(json& j, const Sighting& s);
void from_json(const json& j, Sighting& s);
void to_json(json& j, const Observation& o);
void from_json(const json& j, Observation& o);
void to_json(json& j, const MemoryRecord& r);
void from_json(const json& j, MemoryRecord& r);
void to_json(json& j, const AnswerRecord& r);
void from_json(const json& j, AnswerRecord& r);
void to_json(json& j, const MetricsResult& m);
void from_json(const json& j, MetricsResult& m);

json scene_to_json(const GridScene& scene);
std::shared_ptr<const GridScene> scene_from_json(const json& j);

// A scenario's "scene" member is either an inline object or a path, resolved
// against `base_dir`, to a scene JSON file.
json scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const json& j, const std::filesystem::path& base_dir = {});

Scenario load_scenario(const std::filesystem::path& path);
void save_scenario(const Scenario& s, const std::filesystem::path& path);

json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace eqsa
