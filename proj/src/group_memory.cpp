#include "eqsa/group_memory.hpp"

#include <algorithm>
#include <iterator>
#include <set>

#include "eqsa/error.hpp"
#include "eqsa/serialization.hpp"

namespace eqsa {

namespace {

void index_record(MemoryIndex& index, const MemoryRecord& rec, std::size_t pos, const SceneMeta& meta) {
  std::set<std::string> cats;
  for (const auto& s : rec.observation.sightings) cats.insert(s.category);
  for (const auto& c : cats) index.by_category[c].push_back(pos);

  std::set<std::string> rooms;
  for (Cell c : rec.observation.visible_cells) {
    const std::string& room = meta.room_at(c);
    if (!room.empty()) rooms.insert(room);
  }
  for (const auto& r : rooms) index.by_room[r].push_back(pos);

  std::vector<Cell> merged;
  merged.reserve(index.seen_cells.size() + rec.observation.visible_cells.size());
  std::set_union(index.seen_cells.begin(), index.seen_cells.end(),
                 rec.observation.visible_cells.begin(), rec.observation.visible_cells.end(),
                 std::back_inserter(merged));
  index.seen_cells = std::move(merged);
}

bool boosts(QueryCategory c, bool local) {
  switch (c) {
    case QueryCategory::existence:
    case QueryCategory::location: return true;
    case QueryCategory::state:
    case QueryCategory::identification: return local;
    case QueryCategory::counting: return false;
  }
  return false;
}

}  // namespace

GroupMemory::GroupMemory(std::shared_ptr<const SceneMeta> meta) : meta_(std::move(meta)) {
  if (!meta_) throw Error(ErrorCode::invalid_argument, "group memory needs scene metadata");
  seen_grid_.assign(static_cast<std::size_t>(meta_->width) * static_cast<std::size_t>(meta_->height), 0);
}

void GroupMemory::insert(MemoryRecord record) {
  for (Cell c : record.observation.visible_cells) {
    auto& flag = seen_grid_[flat(c)];
    if (flag) continue;
    flag = 1;
    ++seen_total_;
    const std::string& room = meta_->room_at(c);
    if (!room.empty()) ++seen_per_room_[room];
  }
  records_.push_back(std::move(record));
  index_record(index_, records_.back(), records_.size() - 1, *meta_);
}

MemoryIndex GroupMemory::rebuild_index(const std::vector<MemoryRecord>& records, const SceneMeta& meta) {
  MemoryIndex index;
  for (std::size_t i = 0; i < records.size(); ++i) index_record(index, records[i], i, meta);
  return index;
}

std::vector<const MemoryRecord*> GroupMemory::retrieve(const Query& query) const {
  std::vector<const MemoryRecord*> out;
  auto it = index_.by_category.find(query.target_category);
  if (it == index_.by_category.end()) return out;
  for (std::size_t pos : it->second) {
    const MemoryRecord& rec = records_[pos];
    bool match = std::any_of(rec.observation.sightings.begin(), rec.observation.sightings.end(),
                             [&](const Sighting& s) {
                               return s.category == query.target_category &&
                                      (!query.room_id || s.room_id == *query.room_id);
                             });
    if (match) out.push_back(&rec);
  }
  // Most recent first; among equal times the later insert wins.
  std::sort(out.begin(), out.end(), [](const MemoryRecord* a, const MemoryRecord* b) {
    if (a->observation.time != b->observation.time) return a->observation.time > b->observation.time;
    return a > b;
  });
  return out;
}

bool GroupMemory::has_matching_sighting(const Query& query) const {
  auto it = index_.by_category.find(query.target_category);
  if (it == index_.by_category.end()) return false;
  for (std::size_t pos : it->second)
    for (const auto& s : records_[pos].observation.sightings)
      if (s.category == query.target_category && (!query.room_id || s.room_id == *query.room_id))
        return true;
  return false;
}

double GroupMemory::coverage(const Query& query) const {
  if (query.room_id) {
    auto cells = meta_->room_cells.find(*query.room_id);
    if (cells == meta_->room_cells.end()) {
      throw Error(ErrorCode::unknown_room, "unknown room '" + *query.room_id + "'");
    }
    auto seen_it = seen_per_room_.find(*query.room_id);
    const std::size_t seen_n = seen_it == seen_per_room_.end() ? 0 : seen_it->second;
    return static_cast<double>(seen_n) / static_cast<double>(cells->second.size());
  }
  return static_cast<double>(seen_total_) / static_cast<double>(meta_->free_cells);
}

double GroupMemory::confidence(const Query& query) const {
  const double cov = coverage(query);
  if (boosts(query.category, query.room_id.has_value()) && has_matching_sighting(query)) return 1.0;
  return cov;
}

void GroupMemory::clear() {
  records_.clear();
  index_ = MemoryIndex{};
  std::fill(seen_grid_.begin(), seen_grid_.end(), 0);
  seen_per_room_.clear();
  seen_total_ = 0;
}

void GroupMemory::dump_jsonl(std::ostream& out) const {
  for (const auto& rec : records_) out << json(rec).dump() << '\n';
}

}  // namespace eqsa
