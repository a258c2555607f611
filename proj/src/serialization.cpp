#include "eqsa/serialization.hpp"

#include <fstream>
#include <sstream>

#include "eqsa/error.hpp"

namespace eqsa {

namespace {

template <typename T>
T get_field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorCode::parse, std::string("missing field '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse, std::string("bad field '") + key + "': " + e.what());
  }
}

template <typename T>
std::optional<T> get_optional(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return get_field<T>(j, key);
}

char label_from_json(const json& j) {
  const auto s = j.get<std::string>();
  if (s.size() != 1 || option_index(s[0]) < 0) throw Error(ErrorCode::parse, "bad option label '" + s + "'");
  return s[0];
}

}  // namespace

void to_json(json& j, const Cell& c) { j = json::array({c.x, c.y}); }

void from_json(const json& j, Cell& c) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
    throw Error(ErrorCode::parse, "cell must be [x, y]");
  }
  c = {j[0].get<int>(), j[1].get<int>()};
}

void to_json(json& j, const Pose& p) {
  j = json{{"cell", p.cell}, {"heading", std::string(to_string(p.heading))}};
}

void from_json(const json& j, Pose& p) {
  p.cell = get_field<Cell>(j, "cell");
  p.heading = heading_from_string(get_optional<std::string>(j, "heading").value_or("north"));
}

void to_json(json& j, const Query& q) {
  j = json{{"category", std::string(to_string(q.category))}, {"target_category", q.target_category}};
  j["room_id"] = q.room_id ? json(*q.room_id) : json(nullptr);
  j["attribute"] = q.attribute ? json(*q.attribute) : json(nullptr);
}

void from_json(const json& j, Query& q) {
  q.category = query_category_from_string(get_field<std::string>(j, "category"));
  q.target_category = get_field<std::string>(j, "target_category");
  q.room_id = get_optional<std::string>(j, "room_id");
  q.attribute = get_optional<std::string>(j, "attribute");
}

void to_json(json& j, const Question& q) {
  json options = json::object();
  for (std::size_t i = 0; i < kOptionLabels.size(); ++i) {
    options[std::string(1, kOptionLabels[i])] = q.options[i];
  }
  j = json{{"question_id", q.question_id},
           {"text", q.text},
           {"query", q.query},
           {"options", options},
           {"ground_truth", std::string(1, q.ground_truth)},
           {"urgency_true", q.urgency_true},
           {"arrival_time", q.arrival_time},
           {"safety_flag", q.safety_flag},
           {"functional_flag", q.functional_flag},
           {"declared_deps", q.declared_deps}};
}

void from_json(const json& j, Question& q) {
  q.question_id = get_field<std::string>(j, "question_id");
  q.text = get_optional<std::string>(j, "text").value_or("");
  q.query = get_field<Query>(j, "query");
  const json& options = j.contains("options") ? j.at("options") : json();
  if (!options.is_object()) throw Error(ErrorCode::parse, "question '" + q.question_id + "' needs options A-D");
  for (std::size_t i = 0; i < kOptionLabels.size(); ++i) {
    q.options[i] = get_field<std::string>(options, std::string(1, kOptionLabels[i]).c_str());
  }
  if (options.size() != kOptionLabels.size()) {
    throw Error(ErrorCode::parse, "question '" + q.question_id + "' must have exactly 4 options");
  }
  if (!j.contains("ground_truth")) throw Error(ErrorCode::parse, "missing field 'ground_truth'");
  q.ground_truth = label_from_json(j.at("ground_truth"));
  q.urgency_true = get_field<double>(j, "urgency_true");
  q.arrival_time = get_optional<double>(j, "arrival_time").value_or(0.0);
  q.safety_flag = get_optional<bool>(j, "safety_flag").value_or(false);
  q.functional_flag = get_optional<bool>(j, "functional_flag").value_or(false);
  q.declared_deps = get_optional<std::vector<std::string>>(j, "declared_deps").value_or(std::vector<std::string>{});
}

void to_json(json& j, const Sighting& s) {
  j = json{{"object_id", s.object_id},
           {"category", s.category},
           {"cell", s.cell},
           {"room_id", s.room_id},
           {"attributes", s.attributes}};
}

void from_json(const json& j, Sighting& s) {
  s.object_id = get_field<std::string>(j, "object_id");
  s.category = get_field<std::string>(j, "category");
  s.cell = get_field<Cell>(j, "cell");
  s.room_id = get_optional<std::string>(j, "room_id").value_or("");
  s.attributes = get_optional<std::map<std::string, std::string>>(j, "attributes").value_or(
      std::map<std::string, std::string>{});
}

void to_json(json& j, const Observation& o) {
  j = json{{"time", o.time},
           {"pose", o.pose},
           {"visible_cells", o.visible_cells},
           {"visible_walls", o.visible_walls},
           {"sightings", o.sightings}};
}

void from_json(const json& j, Observation& o) {
  o.time = get_field<double>(j, "time");
  o.pose = get_field<Pose>(j, "pose");
  o.visible_cells = get_field<std::vector<Cell>>(j, "visible_cells");
  o.visible_walls = get_optional<std::vector<Cell>>(j, "visible_walls").value_or(std::vector<Cell>{});
  o.sightings = get_field<std::vector<Sighting>>(j, "sightings");
}

void to_json(json& j, const MemoryRecord& r) {
  j = json{{"observation", r.observation}, {"caption", r.caption}};
  j["source_question"] = r.source_question ? json(*r.source_question) : json(nullptr);
}

void from_json(const json& j, MemoryRecord& r) {
  r.observation = get_field<Observation>(j, "observation");
  r.source_question = get_optional<std::string>(j, "source_question");
  r.caption = get_optional<std::string>(j, "caption").value_or("");
}

void to_json(json& j, const AnswerRecord& r) {
  j = json{{"question_id", r.question_id},
           {"predicted", std::string(1, r.predicted)},
           {"correct", r.correct},
           {"direct", r.direct},
           {"used_steps", r.used_steps},
           {"max_steps", r.max_steps},
           {"request_time", r.request_time},
           {"answer_time", r.answer_time},
           {"timed_out", r.timed_out}};
  j["start_time"] = r.start_time ? json(*r.start_time) : json(nullptr);
}

void from_json(const json& j, AnswerRecord& r) {
  r.question_id = get_field<std::string>(j, "question_id");
  if (!j.contains("predicted")) throw Error(ErrorCode::parse, "missing field 'predicted'");
  r.predicted = label_from_json(j.at("predicted"));
  r.correct = get_field<bool>(j, "correct");
  r.direct = get_field<bool>(j, "direct");
  r.used_steps = get_field<int>(j, "used_steps");
  r.max_steps = get_field<int>(j, "max_steps");
  r.request_time = get_field<double>(j, "request_time");
  r.start_time = get_optional<double>(j, "start_time");
  r.answer_time = get_field<double>(j, "answer_time");
  r.timed_out = get_optional<bool>(j, "timed_out").value_or(false);
}

void to_json(json& j, const MetricsResult& m) {
  json rows = json::array();
  for (const auto& q : m.per_question) {
    rows.push_back(json{{"question_id", q.question_id},
                        {"ns", q.ns},
                        {"latency", q.latency},
                        {"weighted_latency", q.weighted_latency}});
  }
  j = json{{"acc", m.acc}, {"dar", m.dar}, {"ns", m.ns}, {"nuwl", m.nuwl}, {"per_question", rows}};
}

void from_json(const json& j, MetricsResult& m) {
  m.acc = get_field<double>(j, "acc");
  m.dar = get_field<double>(j, "dar");
  m.ns = get_field<double>(j, "ns");
  m.nuwl = get_field<double>(j, "nuwl");
  m.per_question.clear();
  if (j.contains("per_question")) {
    for (const auto& row : j.at("per_question")) {
      m.per_question.push_back({get_field<std::string>(row, "question_id"), get_field<double>(row, "ns"),
                                get_field<double>(row, "latency"), get_field<double>(row, "weighted_latency")});
    }
  }
}

json scene_to_json(const GridScene& scene) {
  json rooms = json::array();
  for (const Room& r : scene.rooms()) {
    rooms.push_back(json{{"room_id", r.room_id}, {"label", r.label}, {"cells", r.cells}});
  }
  json objects = json::array();
  for (const ObjectInstance& o : scene.objects()) {
    objects.push_back(json{{"object_id", o.object_id},
                           {"category", o.category},
                           {"cell", o.cell},
                           {"attributes", o.attributes}});
  }
  return json{{"scene_id", scene.scene_id()},
              {"width", scene.width()},
              {"height", scene.height()},
              {"walls", scene.walls()},
              {"rooms", rooms},
              {"objects", objects}};
}

std::shared_ptr<const GridScene> scene_from_json(const json& j) {
  std::vector<Room> rooms;
  for (const auto& r : get_field<json>(j, "rooms")) {
    rooms.push_back({get_field<std::string>(r, "room_id"), get_field<std::string>(r, "label"),
                     get_field<std::vector<Cell>>(r, "cells")});
  }
  std::vector<ObjectInstance> objects;
  for (const auto& o : get_field<json>(j, "objects")) {
    objects.push_back({get_field<std::string>(o, "object_id"), get_field<std::string>(o, "category"),
                       get_field<Cell>(o, "cell"),
                       get_optional<std::map<std::string, std::string>>(o, "attributes")
                           .value_or(std::map<std::string, std::string>{})});
  }
  return std::make_shared<const GridScene>(get_field<std::string>(j, "scene_id"), get_field<int>(j, "width"),
                                           get_field<int>(j, "height"), get_field<std::vector<Cell>>(j, "walls"),
                                           std::move(rooms), std::move(objects));
}

json scenario_to_json(const Scenario& s) {
  json questions = json::array();
  auto add = [&](const Question& q, const char* role) {
    json item = q;
    item["role"] = role;
    questions.push_back(std::move(item));
  };
  for (const auto& q : s.initial_questions) add(q, "initial");
  for (const auto& q : s.followup_questions) add(q, "followup");
  return json{{"scenario_id", s.scenario_id},
              {"scene", s.scene ? scene_to_json(*s.scene) : json(nullptr)},
              {"max_time", s.max_time},
              {"initial_pose", s.initial_pose},
              {"questions", questions}};
}

Scenario scenario_from_json(const json& j, const std::filesystem::path& base_dir) {
  Scenario s;
  s.scenario_id = get_field<std::string>(j, "scenario_id");
  const json scene = get_field<json>(j, "scene");
  if (scene.is_string()) {
    s.scene = scene_from_json(read_json_file(base_dir / scene.get<std::string>()));
  } else if (scene.is_object()) {
    s.scene = scene_from_json(scene);
  } else {
    throw Error(ErrorCode::parse, "scenario '" + s.scenario_id + "' has no scene");
  }
  s.max_time = get_optional<double>(j, "max_time").value_or(600.0);
  s.initial_pose = get_field<Pose>(j, "initial_pose");
  for (const auto& item : get_field<json>(j, "questions")) {
    Question q = item.get<Question>();
    const auto role = get_optional<std::string>(item, "role").value_or(q.arrival_time > 0 ? "followup" : "initial");
    if (role == "initial") {
      s.initial_questions.push_back(std::move(q));
    } else if (role == "followup") {
      s.followup_questions.push_back(std::move(q));
    } else {
      throw Error(ErrorCode::parse, "unknown question role '" + role + "'");
    }
  }
  return s;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::parse, path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::io, "write failed for " + path.string());
}

Scenario load_scenario(const std::filesystem::path& path) {
  return scenario_from_json(read_json_file(path), path.parent_path());
}

void save_scenario(const Scenario& s, const std::filesystem::path& path) {
  write_text_file(path, scenario_to_json(s).dump(2) + "\n");
}

}  // namespace eqsa
