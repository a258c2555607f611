#pragma once

#include <memory>
#include <string>
#include <vector>

#include "eqsa/question.hpp"
#include "eqsa/scene.hpp"

namespace eqsa::testing {

// Builds a scene from rows of characters:
//   '#' wall, '.' free cell outside every room, 'a'..'z' free cell in room
//   "r_<letter>" labelled "<letter>room".
inline std::shared_ptr<const GridScene> ascii_scene(const std::vector<std::string>& rows,
                                                    std::vector<ObjectInstance> objects = {},
                                                    const std::string& scene_id = "ascii") {
  const int h = static_cast<int>(rows.size());
  const int w = static_cast<int>(rows.front().size());
  std::vector<Cell> walls;
  std::map<char, std::vector<Cell>> room_cells;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const char c = rows[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)];
      if (c == '#') walls.push_back({x, y});
      if (c >= 'a' && c <= 'z') room_cells[c].push_back({x, y});
    }
  }
  std::vector<Room> rooms;
  for (auto& [letter, cells] : room_cells) {
    rooms.push_back({std::string("r_") + letter, std::string(1, letter) + "room", cells});
  }
  return std::make_shared<const GridScene>(scene_id, w, h, walls, rooms, std::move(objects));
}

inline std::vector<std::string> filled(int w, int h, char c) {
  return std::vector<std::string>(static_cast<std::size_t>(h), std::string(static_cast<std::size_t>(w), c));
}

inline Options opts(std::string a, std::string b, std::string c = std::string(kDummyOption),
                    std::string d = std::string(kDummyOption)) {
  return {std::move(a), std::move(b), std::move(c), std::move(d)};
}

inline Question make_question(std::string id, Query query, Options options, char gt, double urgency = 0.5,
                              double arrival = 0.0) {
  Question q;
  q.question_id = std::move(id);
  q.text = "q";
  q.query = std::move(query);
  q.options = std::move(options);
  q.ground_truth = gt;
  q.urgency_true = urgency;
  q.arrival_time = arrival;
  return q;
}

}  // namespace eqsa::testing
