#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "eqsa/error.hpp"
#include "eqsa/question.hpp"
#include "eqsa/scene.hpp"
#include "support.hpp"

using namespace eqsa;
using eqsa::testing::ascii_scene;
using eqsa::testing::filled;
using eqsa::testing::opts;

namespace {


template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no eqsa::Error thrown";
  return ErrorCode::io;
}

}  // namespace

TEST(Visibility, RangeZeroIsOwnCell) {
  auto scene = ascii_scene(filled(5, 5, 'a'));
  EXPECT_EQ(visible_cells(*scene, {{2, 2}, Heading::north}, 0), (std::vector<Cell>{{2, 2}}));
}

TEST(Visibility, OpenRoomCenterSeesEverything) {
  auto scene = ascii_scene(filled(5, 5, 'a'));
  EXPECT_EQ(visible_cells(*scene, {{2, 2}, Heading::east}, 2).size(), 25u);
}

TEST(Visibility, WallColumnHidesCellsBehindIt) {
  auto rows = filled(7, 7, 'a');
  for (auto& r : rows) r[3] = '#';
  auto scene = ascii_scene(rows);
  const auto vis = visible_cells(*scene, {{2, 3}, Heading::east}, 3);
  for (Cell c : vis) EXPECT_LT(c.x, 3) << c.x << "," << c.y;
  // Every free cell on the pose's side within range is visible.
  std::size_t expected = 0;
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 7; ++y)
      if (chebyshev({x, y}, {2, 3}) <= 3) ++expected;
  EXPECT_EQ(vis.size(), expected);
}

TEST(Visibility, WallsSeenButNotPassed) {
  auto rows = filled(7, 7, 'a');
  for (auto& r : rows) r[3] = '#';
  auto scene = ascii_scene(rows);
  const auto walls = visible_walls(*scene, {{2, 3}, Heading::east}, 3);
  EXPECT_FALSE(walls.empty());
  for (Cell c : walls) EXPECT_EQ(c.x, 3);
}

TEST(Visibility, InvalidPoseIsRejected) {
  auto rows = filled(5, 5, 'a');
  rows[1][1] = '#';
  auto scene = ascii_scene(rows);
  EXPECT_EQ(code_of([&] { visible_cells(*scene, {{1, 1}, Heading::north}, 2); }), ErrorCode::invalid_pose);
  EXPECT_EQ(code_of([&] { visible_cells(*scene, {{7, 0}, Heading::north}, 2); }), ErrorCode::invalid_pose);
  EXPECT_EQ(code_of([&] { visible_cells(*scene, {{0, -1}, Heading::north}, 2); }), ErrorCode::invalid_pose);
}

TEST(Visibility, SymmetricAndContainsPoseOnRandomScenes) {
  std::mt19937 gen(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int w = 6 + static_cast<int>(gen() % 6), h = 6 + static_cast<int>(gen() % 6);
    auto rows = filled(w, h, 'a');
    for (auto& r : rows)
      for (auto& c : r)
        if (gen() % 4 == 0) c = '#';
    rows[0][0] = 'a';
    auto scene = ascii_scene(rows);
    const int range = static_cast<int>(gen() % 5);
    std::vector<Cell> free;
    for (int x = 0; x < w; ++x)
      for (int y = 0; y < h; ++y)
        if (scene->is_free({x, y})) free.push_back({x, y});
    for (int k = 0; k < 5; ++k) {
      Cell a = free[gen() % free.size()];
      const auto vis = visible_cells(*scene, {a, Heading::north}, range);
      ASSERT_TRUE(std::binary_search(vis.begin(), vis.end(), a));
      for (Cell b : vis) {
        ASSERT_LE(chebyshev(a, b), range);
        const auto back = visible_cells(*scene, {b, Heading::south}, range);
        ASSERT_TRUE(std::binary_search(back.begin(), back.end(), a))
            << "trial " << trial << " a=" << a.x << "," << a.y << " b=" << b.x << "," << b.y;
      }
    }
  }
}

TEST(SceneInvariants, ConstructorRejectsBrokenScenes) {
  EXPECT_EQ(code_of([] { GridScene("s", 2, 2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}}, {}, {}); }),
            ErrorCode::invalid_argument);
  EXPECT_EQ(code_of([] {
              GridScene("s", 3, 3, {{1, 1}}, {{"r", "kitchen", {{1, 1}}}}, {});
            }),
            ErrorCode::invalid_argument);
  EXPECT_EQ(code_of([] {
              GridScene("s", 3, 3, {}, {{"r1", "a", {{0, 0}}}, {"r2", "b", {{0, 0}}}}, {});
            }),
            ErrorCode::invalid_argument);
  EXPECT_EQ(code_of([] {
              GridScene("s", 3, 3, {}, {{"r1", "a", {{0, 0}}}}, {{"o", "cup", {2, 2}, {}}});
            }),
            ErrorCode::invalid_argument);
  EXPECT_EQ(code_of([] { GridScene("s", 3, 3, {}, {{"r1", "", {{0, 0}}}}, {}); }), ErrorCode::invalid_argument);
}

namespace {

std::shared_ptr<const GridScene> furnished() {
  std::vector<ObjectInstance> objects = {
      {"o1", "lamp", {1, 1}, {{"state", "on"}, {"color", "red"}}},
      {"o2", "chair", {3, 1}, {{"material", "wood"}, {"color", "blue"}}},
      {"o3", "chair", {1, 3}, {{"material", "metal"}, {"color", "blue"}}},
      {"o4", "chair", {3, 3}, {{"material", "wood"}, {"color", "green"}}},
      {"o5", "sink", {7, 2}, {{"state", "off"}}},
  };
  return ascii_scene({"aaaa#bbbb", "aaaa#bbbb", "aaaa.bbbb", "aaaa#bbbb", "aaaa#bbbb"}, objects);
}

}  // namespace

TEST(Observe, NoiselessSightingsMatchGroundTruth) {
  auto scene = furnished();
  const Pose pose{{2, 2}, Heading::north};
  const auto obs = observe(*scene, pose, 3, 0.0, 99, 5.0);
  EXPECT_DOUBLE_EQ(obs.time, 5.0);
  std::set<std::string> expected;
  for (const auto& o : scene->objects())
    if (std::binary_search(obs.visible_cells.begin(), obs.visible_cells.end(), o.cell)) expected.insert(o.object_id);
  std::set<std::string> got;
  for (const auto& s : obs.sightings) {
    got.insert(s.object_id);
    const auto& truth = *std::find_if(scene->objects().begin(), scene->objects().end(),
                                      [&](const auto& o) { return o.object_id == s.object_id; });
    EXPECT_EQ(s.attributes, truth.attributes);
    EXPECT_EQ(s.category, truth.category);
    EXPECT_EQ(s.room_id, "r_a");
  }
  EXPECT_EQ(got, expected);
  EXPECT_EQ(got.size(), 4u);
}

TEST(Observe, NothingVisibleMeansNoSightings) {
  auto scene = furnished();
  const auto obs = observe(*scene, {{0, 4}, Heading::north}, 0, 0.0, 1);
  EXPECT_TRUE(obs.sightings.empty());
}

TEST(Observe, SeededNoiseIsReproducibleAndStaysInDomain) {
  auto scene = furnished();
  const Pose pose{{2, 2}, Heading::north};
  const auto a = observe(*scene, pose, 3, 0.5, 1234);
  const auto b = observe(*scene, pose, 3, 0.5, 1234);
  EXPECT_EQ(a, b);

  int flipped = 0, total = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto obs = observe(*scene, pose, 3, 0.5, seed);
    for (const auto& s : obs.sightings) {
      const auto& truth = *std::find_if(scene->objects().begin(), scene->objects().end(),
                                        [&](const auto& o) { return o.object_id == s.object_id; });
      for (const auto& [attr, value] : s.attributes) {
        ++total;
        auto dom = attribute_domain(attr);
        EXPECT_NE(std::find(dom.begin(), dom.end(), value), dom.end());
        if (value != truth.attributes.at(attr)) ++flipped;
      }
    }
  }
  const double rate = static_cast<double>(flipped) / total;
  EXPECT_GT(rate, 0.4);
  EXPECT_LT(rate, 0.6);
}

TEST(Observe, SightedObjectsLieInVisibleCells) {
  auto scene = furnished();
  for (int x = 0; x < scene->width(); ++x) {
    for (int y = 0; y < scene->height(); ++y) {
      if (!scene->is_free({x, y})) continue;
      const auto obs = observe(*scene, {{x, y}, Heading::west}, 2, 0.1, 3);
      for (const auto& s : obs.sightings)
        EXPECT_TRUE(std::binary_search(obs.visible_cells.begin(), obs.visible_cells.end(), s.cell));
    }
  }
}

TEST(GroundTruth, ExistenceYes) {
  auto scene = furnished();
  Query q{QueryCategory::existence, "lamp", "r_a", std::nullopt};
  EXPECT_EQ(ground_truth_answer(*scene, q, opts("yes", "no")), 'A');
  Query absent{QueryCategory::existence, "lamp", "r_b", std::nullopt};
  EXPECT_EQ(ground_truth_answer(*scene, absent, opts("yes", "no")), 'B');
}

TEST(GroundTruth, CountingByScan) {
  auto scene = furnished();
  Query q{QueryCategory::counting, "chair", "r_a", std::nullopt};
  int n = 0;
  for (const auto& o : scene->objects())
    if (o.category == "chair" && scene->room_at(o.cell)->room_id == "r_a") ++n;
  ASSERT_EQ(n, 3);
  EXPECT_EQ(ground_truth_answer(*scene, q, {"1", "2", "3", "4"}), 'C');
}

TEST(GroundTruth, AttributeAndLocation) {
  auto scene = furnished();
  EXPECT_EQ(ground_truth_answer(*scene, {QueryCategory::state, "lamp", "r_a", "state"}, opts("off", "on")), 'B');
  EXPECT_EQ(ground_truth_answer(*scene, {QueryCategory::location, "sink", std::nullopt, std::nullopt},
                                opts("aroom", "broom")),
            'B');
}

TEST(GroundTruth, Errors) {
  auto scene = furnished();
  EXPECT_EQ(code_of([&] {
              ground_truth_answer(*scene, {QueryCategory::state, "stove", "r_a", "state"}, opts("on", "off"));
            }),
            ErrorCode::ambiguous_query);
  EXPECT_EQ(code_of([&] {
              ground_truth_answer(*scene, {QueryCategory::identification, "chair", "r_a", "color"},
                                  opts("blue", "green"));
            }),
            ErrorCode::ambiguous_query);
  EXPECT_EQ(code_of([&] {
              ground_truth_answer(*scene, {QueryCategory::counting, "chair", "r_a", std::nullopt}, opts("1", "2"));
            }),
            ErrorCode::dataset_inconsistency);
  EXPECT_EQ(code_of([&] {
              ground_truth_answer(*scene, {QueryCategory::existence, "lamp", "r_zz", std::nullopt},
                                  opts("yes", "no"));
            }),
            ErrorCode::unknown_room);
}

namespace {

// Straight scan over the object list; shares nothing with evaluate_query.
std::string brute_force_value(const GridScene& scene, const Query& q) {
  std::vector<const ObjectInstance*> hits;
  for (const auto& o : scene.objects()) {
    if (o.category != q.target_category) continue;
    std::string room;
    for (const auto& r : scene.rooms())
      for (Cell c : r.cells)
        if (c == o.cell) room = r.room_id;
    if (q.room_id && room != *q.room_id) continue;
    hits.push_back(&o);
  }
  switch (q.category) {
    case QueryCategory::existence: return hits.empty() ? "no" : "yes";
    case QueryCategory::counting: return std::to_string(hits.size());
    case QueryCategory::state:
    case QueryCategory::identification:
      if (hits.size() != 1) return "<ambiguous>";
      return hits[0]->attributes.at(*q.attribute);
    case QueryCategory::location:
      if (hits.size() != 1) return "<ambiguous>";
      for (const auto& r : scene.rooms())
        for (Cell c : r.cells)
          if (c == hits[0]->cell) return r.label;
  }
  return "<none>";
}

}  // namespace

TEST(GroundTruth, AgreesWithBruteForceOnGeneratedQuestions) {
  int checked = 0;
  for (std::uint64_t seed = 0; checked < 1000; ++seed) {
    const Scenario s = generate_scenario(seed);
    for (const Question* q : s.all_questions()) {
      const std::string value = brute_force_value(*s.scene, q->query);
      const int idx = option_index(q->ground_truth);
      ASSERT_EQ(q->options[static_cast<std::size_t>(idx)], value) << s.scenario_id << " " << q->question_id;
      ASSERT_EQ(ground_truth_answer(*s.scene, q->query, q->options), q->ground_truth);
      ++checked;
    }
  }
}
