#pragma once

#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "eqsa/query.hpp"
#include "eqsa/scene.hpp"

namespace eqsa {

struct MemoryRecord {
  Observation observation;
  std::optional<std::string> source_question;
  std::string caption;  // reserved for textual captions; unused by the rule oracles

  bool operator==(const MemoryRecord&) const = default;
};

struct MemoryIndex {
  std::map<std::string, std::vector<std::size_t>> by_category;
  std::map<std::string, std::vector<std::size_t>> by_room;
  std::vector<Cell> seen_cells;  // sorted

  bool operator==(const MemoryIndex&) const = default;
};

// Scenario-lifetime store of observations shared by every question.
// Single writer; readers take const references between writes.
class GroupMemory {
 public:
  explicit GroupMemory(std::shared_ptr<const SceneMeta> meta);

  void insert(MemoryRecord record);

  // Records with a sighting of the target category (inside the named room for
  // local queries), most recent first.
  std::vector<const MemoryRecord*> retrieve(const Query& query) const;

  // Coverage of the relevant area, boosted to 1 by a matching sighting for
  // categories where one sighting settles the answer. Throws
  // Error(unknown_room) for a room that is not in the scene.
  double confidence(const Query& query) const;

  // Fraction of the query's area (room or whole scene) already seen.
  double coverage(const Query& query) const;

  void clear();

  bool empty() const { return records_.empty(); }
  std::size_t size() const { return records_.size(); }
  const std::vector<MemoryRecord>& records() const { return records_; }
  const MemoryIndex& index() const { return index_; }
  bool seen(Cell c) const { return seen_grid_[flat(c)] != 0; }
  const SceneMeta& meta() const { return *meta_; }

  // Builds the index from the record list alone.
  static MemoryIndex rebuild_index(const std::vector<MemoryRecord>& records, const SceneMeta& meta);

  void dump_jsonl(std::ostream& out) const;

 private:
  std::size_t flat(Cell c) const {
    return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(meta_->width) +
           static_cast<std::size_t>(c.x);
  }
  bool has_matching_sighting(const Query& query) const;

  std::shared_ptr<const SceneMeta> meta_;
  std::vector<MemoryRecord> records_;
  MemoryIndex index_;
  std::vector<std::uint8_t> seen_grid_;
  std::map<std::string, std::size_t> seen_per_room_;
  std::size_t seen_total_ = 0;
};

}  // namespace eqsa
