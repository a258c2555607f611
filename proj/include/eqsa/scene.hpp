#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eqsa/query.hpp"

namespace eqsa {

struct Cell {
  int x = 0;
  int y = 0;

  auto operator<=>(const Cell&) const = default;
};

inline int chebyshev(Cell a, Cell b) {
  int dx = a.x > b.x ? a.x - b.x : b.x - a.x;
  int dy = a.y > b.y ? a.y - b.y : b.y - a.y;
  return dx > dy ? dx : dy;
}

// y grows downward, so north is -y.
enum class Heading { north, east, south, west };

std::string_view to_string(Heading h) noexcept;
Heading heading_from_string(std::string_view s);

struct Pose {
  Cell cell;
  Heading heading = Heading::north;

  bool operator==(const Pose&) const = default;
};

struct Room {
  std::string room_id;
  std::string label;
  std::vector<Cell> cells;
};

struct ObjectInstance {
  std::string object_id;
  std::string category;
  Cell cell;
  std::map<std::string, std::string> attributes;
};

// Attribute domains used by observation noise and the generator. Attributes
// without a domain are never perturbed.
std::span<const std::string_view> attribute_domain(std::string_view attribute);

// Immutable occupancy grid with rooms and attributed objects. The constructor
// enforces the scene invariants and throws Error(invalid_argument) otherwise.
class GridScene {
 public:
  GridScene(std::string scene_id, int width, int height, std::vector<Cell> walls,
            std::vector<Room> rooms, std::vector<ObjectInstance> objects);

  const std::string& scene_id() const { return scene_id_; }
  int width() const { return width_; }
  int height() const { return height_; }
  const std::vector<Room>& rooms() const { return rooms_; }
  const std::vector<ObjectInstance>& objects() const { return objects_; }

  bool in_bounds(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_; }
  bool is_wall(Cell c) const { return wall_[index(c)] != 0; }
  bool is_free(Cell c) const { return in_bounds(c) && !is_wall(c); }
  std::vector<Cell> walls() const;
  std::size_t free_cell_count() const { return free_count_; }

  // Index into rooms(), or -1 when the cell is outside every room.
  int room_index_at(Cell c) const { return in_bounds(c) ? room_of_[index(c)] : -1; }
  const Room* find_room(std::string_view room_id) const;
  const Room* room_at(Cell c) const;

 private:
  std::size_t index(Cell c) const {
    return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(c.x);
  }

  std::string scene_id_;
  int width_;
  int height_;
  std::vector<std::uint8_t> wall_;
  std::vector<int> room_of_;
  std::vector<Room> rooms_;
  std::vector<ObjectInstance> objects_;
  std::size_t free_count_ = 0;
};

// What the agent is allowed to know about a scene up front: the room layout,
// never the objects.
struct SceneMeta {
  int width = 0;
  int height = 0;
  std::size_t free_cells = 0;
  std::map<std::string, std::vector<Cell>> room_cells;
  std::map<std::string, Cell> room_centroid;
  std::map<std::string, std::string> room_label;
  std::vector<std::string> room_of;  // row-major, empty string when no room

  static std::shared_ptr<const SceneMeta> from_scene(const GridScene& scene);

  const std::string& room_at(Cell c) const {
    return room_of[static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width) +
                   static_cast<std::size_t>(c.x)];
  }
  bool has_room(std::string_view room_id) const {
    return room_cells.find(std::string(room_id)) != room_cells.end();
  }
};

struct Sighting {
  std::string object_id;
  std::string category;
  Cell cell;
  std::string room_id;
  std::map<std::string, std::string> attributes;  // as perceived

  bool operator==(const Sighting&) const = default;
};

struct Observation {
  double time = 0.0;
  Pose pose;
  std::vector<Cell> visible_cells;  // sorted
  std::vector<Cell> visible_walls;  // sorted
  std::vector<Sighting> sightings;

  bool operator==(const Observation&) const = default;
};

// True when neither Bresenham line between a and b passes through a wall
// strictly between the endpoints. Tracing both directions keeps it symmetric.
bool line_of_sight(const GridScene& scene, Cell a, Cell b);

// Free cells within Chebyshev `range` of the pose that are in line of sight.
// Always contains pose.cell. Result is sorted.
std::vector<Cell> visible_cells(const GridScene& scene, const Pose& pose, int range);

// Wall cells in line of sight within `range`; lets the explorer learn walls.
std::vector<Cell> visible_walls(const GridScene& scene, const Pose& pose, int range);

Observation observe(const GridScene& scene, const Pose& pose, int range, double noise_rate,
                    std::uint64_t rng_seed, double time = 0.0);

// Evaluates the query against the scene and returns the answer value as a
// string ("yes"/"no", a count, an attribute value or a room label).
std::string evaluate_query(const GridScene& scene, const Query& query);

// Label of the option whose value equals evaluate_query().
char ground_truth_answer(const GridScene& scene, const Query& query, const Options& options);

}  // namespace eqsa
