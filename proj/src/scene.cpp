#include "eqsa/scene.hpp"

#include <algorithm>
#include <array>
#include <set>

#include "eqsa/error.hpp"
#include "eqsa/rng.hpp"

namespace eqsa {

namespace {

constexpr std::array<std::string_view, 4> kStateDomain = {"on", "off", "open", "closed"};
constexpr std::array<std::string_view, 6> kColorDomain = {"red",   "blue",  "green",
                                                          "white", "black", "brown"};
constexpr std::array<std::string_view, 6> kMaterialDomain = {"wood",    "metal",   "fabric",
                                                             "leather", "plastic", "glass"};

std::string cell_str(Cell c) {
  return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")";
}

// Cells strictly between a and b on the Bresenham line from a.
template <typename Visit>
bool walk_line(Cell a, Cell b, Visit&& visit) {
  int dx = b.x > a.x ? b.x - a.x : a.x - b.x;
  int dy = b.y > a.y ? b.y - a.y : a.y - b.y;
  int sx = a.x < b.x ? 1 : -1;
  int sy = a.y < b.y ? 1 : -1;
  int err = dx - dy;
  Cell cur = a;
  while (true) {
    if (cur == b) return true;
    int e2 = 2 * err;
    if (e2 > -dy) {
      err -= dy;
      cur.x += sx;
    }
    if (e2 < dx) {
      err += dx;
      cur.y += sy;
    }
    if (cur != b && !visit(cur)) return false;
  }
}

bool one_way_clear(const GridScene& scene, Cell a, Cell b) {
  return walk_line(a, b, [&](Cell c) { return !scene.is_wall(c); });
}

template <typename Keep>
std::vector<Cell> scan_visible(const GridScene& scene, const Pose& pose, int range, Keep&& keep) {
  if (!scene.is_free(pose.cell)) {
    throw Error(ErrorCode::invalid_pose, "pose " + cell_str(pose.cell) + " is not a free cell");
  }
  if (range < 0) throw Error(ErrorCode::invalid_argument, "negative view range");
  std::vector<Cell> out;
  const Cell o = pose.cell;
  for (int x = std::max(0, o.x - range); x <= std::min(scene.width() - 1, o.x + range); ++x) {
    for (int y = std::max(0, o.y - range); y <= std::min(scene.height() - 1, o.y + range); ++y) {
      Cell c{x, y};
      if (keep(c) && line_of_sight(scene, o, c)) out.push_back(c);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::string_view to_string(Heading h) noexcept {
  switch (h) {
    case Heading::north: return "north";
    case Heading::east: return "east";
    case Heading::south: return "south";
    case Heading::west: return "west";
  }
  return "north";
}

Heading heading_from_string(std::string_view s) {
  if (s == "north") return Heading::north;
  if (s == "east") return Heading::east;
  if (s == "south") return Heading::south;
  if (s == "west") return Heading::west;
  throw Error(ErrorCode::parse, "unknown heading '" + std::string(s) + "'");
}

std::string_view to_string(QueryCategory c) noexcept {
  switch (c) {
    case QueryCategory::existence: return "existence";
    case QueryCategory::counting: return "counting";
    case QueryCategory::state: return "state";
    case QueryCategory::identification: return "identification";
    case QueryCategory::location: return "location";
  }
  return "existence";
}

QueryCategory query_category_from_string(std::string_view s) {
  if (s == "existence") return QueryCategory::existence;
  if (s == "counting") return QueryCategory::counting;
  if (s == "state") return QueryCategory::state;
  if (s == "identification") return QueryCategory::identification;
  if (s == "location") return QueryCategory::location;
  throw Error(ErrorCode::parse, "unknown query category '" + std::string(s) + "'");
}

std::span<const std::string_view> attribute_domain(std::string_view attribute) {
  if (attribute == "state") return kStateDomain;
  if (attribute == "color") return kColorDomain;
  if (attribute == "material") return kMaterialDomain;
  return {};
}

GridScene::GridScene(std::string scene_id, int width, int height, std::vector<Cell> walls,
                     std::vector<Room> rooms, std::vector<ObjectInstance> objects)
    : scene_id_(std::move(scene_id)),
      width_(width),
      height_(height),
      rooms_(std::move(rooms)),
      objects_(std::move(objects)) {
  if (width_ <= 0 || height_ <= 0) {
    throw Error(ErrorCode::invalid_argument, "scene dimensions must be positive");
  }
  const auto n = static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  wall_.assign(n, 0);
  room_of_.assign(n, -1);
  for (Cell w : walls) {
    if (!in_bounds(w)) throw Error(ErrorCode::invalid_argument, "wall out of bounds " + cell_str(w));
    wall_[index(w)] = 1;
  }
  free_count_ = static_cast<std::size_t>(std::count(wall_.begin(), wall_.end(), 0));
  if (free_count_ == 0) throw Error(ErrorCode::invalid_argument, "scene has no free cell");

  std::set<std::string> room_ids;
  for (std::size_t r = 0; r < rooms_.size(); ++r) {
    const Room& room = rooms_[r];
    if (room.cells.empty() || room.label.empty()) {
      throw Error(ErrorCode::invalid_argument, "room '" + room.room_id + "' needs cells and a label");
    }
    if (!room_ids.insert(room.room_id).second) {
      throw Error(ErrorCode::invalid_argument, "duplicate room id '" + room.room_id + "'");
    }
    for (Cell c : room.cells) {
      if (!is_free(c)) {
        throw Error(ErrorCode::invalid_argument,
                    "room '" + room.room_id + "' covers non-free cell " + cell_str(c));
      }
      if (room_of_[index(c)] != -1 && room_of_[index(c)] != static_cast<int>(r)) {
        throw Error(ErrorCode::invalid_argument, "rooms overlap at " + cell_str(c));
      }
      room_of_[index(c)] = static_cast<int>(r);
    }
  }

  std::set<std::string> object_ids;
  for (const ObjectInstance& obj : objects_) {
    if (obj.category.empty()) throw Error(ErrorCode::invalid_argument, "object without category");
    if (!object_ids.insert(obj.object_id).second) {
      throw Error(ErrorCode::invalid_argument, "duplicate object id '" + obj.object_id + "'");
    }
    if (!is_free(obj.cell) || room_of_[index(obj.cell)] < 0) {
      throw Error(ErrorCode::invalid_argument,
                  "object '" + obj.object_id + "' must sit on a free cell inside a room");
    }
  }
}

std::vector<Cell> GridScene::walls() const {
  std::vector<Cell> out;
  for (int y = 0; y < height_; ++y)
    for (int x = 0; x < width_; ++x)
      if (wall_[index({x, y})]) out.push_back({x, y});
  return out;
}

const Room* GridScene::find_room(std::string_view room_id) const {
  for (const Room& r : rooms_)
    if (r.room_id == room_id) return &r;
  return nullptr;
}

const Room* GridScene::room_at(Cell c) const {
  int r = room_index_at(c);
  return r < 0 ? nullptr : &rooms_[static_cast<std::size_t>(r)];
}

std::shared_ptr<const SceneMeta> SceneMeta::from_scene(const GridScene& scene) {
  auto meta = std::make_shared<SceneMeta>();
  meta->width = scene.width();
  meta->height = scene.height();
  meta->free_cells = scene.free_cell_count();
  meta->room_of.assign(static_cast<std::size_t>(scene.width()) *
                           static_cast<std::size_t>(scene.height()),
                       std::string());
  for (const Room& room : scene.rooms()) {
    auto cells = room.cells;
    std::sort(cells.begin(), cells.end());
    long sx = 0, sy = 0;
    for (Cell c : cells) {
      sx += c.x;
      sy += c.y;
      meta->room_of[static_cast<std::size_t>(c.y) * static_cast<std::size_t>(scene.width()) +
                    static_cast<std::size_t>(c.x)] = room.room_id;
    }
    const auto n = static_cast<long>(cells.size());
    meta->room_centroid[room.room_id] = Cell{static_cast<int>(sx / n), static_cast<int>(sy / n)};
    meta->room_label[room.room_id] = room.label;
    meta->room_cells[room.room_id] = std::move(cells);
  }
  return meta;
}

bool line_of_sight(const GridScene& scene, Cell a, Cell b) {
  return one_way_clear(scene, a, b) && one_way_clear(scene, b, a);
}

std::vector<Cell> visible_cells(const GridScene& scene, const Pose& pose, int range) {
  return scan_visible(scene, pose, range, [&](Cell c) { return !scene.is_wall(c); });
}

std::vector<Cell> visible_walls(const GridScene& scene, const Pose& pose, int range) {
  return scan_visible(scene, pose, range, [&](Cell c) { return scene.is_wall(c); });
}

Observation observe(const GridScene& scene, const Pose& pose, int range, double noise_rate,
                    std::uint64_t rng_seed, double time) {
  if (!(noise_rate >= 0.0 && noise_rate < 1.0)) {
    throw Error(ErrorCode::invalid_argument, "noise_rate must lie in [0, 1)");
  }
  if (time < 0.0) throw Error(ErrorCode::invalid_argument, "observation time must be >= 0");
  Observation obs;
  obs.time = time;
  obs.pose = pose;
  obs.visible_cells = visible_cells(scene, pose, range);
  obs.visible_walls = visible_walls(scene, pose, range);

  for (const ObjectInstance& obj : scene.objects()) {
    if (!std::binary_search(obs.visible_cells.begin(), obs.visible_cells.end(), obj.cell)) continue;
    Sighting s{obj.object_id, obj.category, obj.cell, scene.room_at(obj.cell)->room_id,
               obj.attributes};
    if (noise_rate > 0.0) {
      for (auto& [name, value] : s.attributes) {
        auto domain = attribute_domain(name);
        if (domain.size() < 2) continue;
        // Per (object, attribute) stream so a draw never depends on what else is in view.
        Rng rng(derive_seed(rng_seed, stable_hash(obj.object_id), stable_hash(name)));
        if (!rng.bernoulli(noise_rate)) continue;
        std::vector<std::string_view> wrong;
        for (auto v : domain)
          if (v != value) wrong.push_back(v);
        if (!wrong.empty()) value = std::string(wrong[rng.below(wrong.size())]);
      }
    }
    obs.sightings.push_back(std::move(s));
  }
  return obs;
}

std::string evaluate_query(const GridScene& scene, const Query& query) {
  int room_index = -1;
  if (query.room_id) {
    const Room* room = scene.find_room(*query.room_id);
    if (!room) throw Error(ErrorCode::unknown_room, "unknown room '" + *query.room_id + "'");
    room_index = static_cast<int>(room - scene.rooms().data());
  }
  std::vector<const ObjectInstance*> matches;
  for (const ObjectInstance& obj : scene.objects()) {
    if (obj.category != query.target_category) continue;
    if (room_index >= 0 && scene.room_index_at(obj.cell) != room_index) continue;
    matches.push_back(&obj);
  }

  switch (query.category) {
    case QueryCategory::existence:
      return matches.empty() ? "no" : "yes";
    case QueryCategory::counting:
      return std::to_string(matches.size());
    case QueryCategory::state:
    case QueryCategory::identification: {
      if (matches.size() != 1) {
        throw Error(ErrorCode::ambiguous_query,
                    "query references " + std::to_string(matches.size()) + " '" +
                        query.target_category + "' instances, expected exactly one");
      }
      if (!query.attribute) throw Error(ErrorCode::dataset_inconsistency, "attribute query without attribute");
      auto it = matches.front()->attributes.find(*query.attribute);
      if (it == matches.front()->attributes.end()) {
        throw Error(ErrorCode::dataset_inconsistency,
                    "object '" + matches.front()->object_id + "' has no attribute '" +
                        *query.attribute + "'");
      }
      return it->second;
    }
    case QueryCategory::location: {
      if (matches.size() != 1) {
        throw Error(ErrorCode::ambiguous_query,
                    "location query needs exactly one '" + query.target_category + "'");
      }
      return scene.room_at(matches.front()->cell)->label;
    }
  }
  throw Error(ErrorCode::invalid_argument, "unhandled query category");
}

char ground_truth_answer(const GridScene& scene, const Query& query, const Options& options) {
  const std::string value = evaluate_query(scene, query);
  for (std::size_t i = 0; i < options.size(); ++i) {
    if (options[i] == value) return kOptionLabels[i];
  }
  throw Error(ErrorCode::dataset_inconsistency,
              "no option matches scene value '" + value + "' for '" + query.target_category + "'");
}

}  // namespace eqsa
