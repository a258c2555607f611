#include <algorithm>
#include <cstdio>
#include <array>
#include <map>
#include <optional>
#include <set>

#include "eqsa/error.hpp"
#include "eqsa/question.hpp"
#include "eqsa/rng.hpp"

namespace eqsa {

namespace {

struct CategorySpec {
  std::string_view name;
  std::vector<std::string_view> attributes;
  std::array<std::string_view, 2> states;  // empty when the object has no state
};

const std::vector<CategorySpec>& catalog() {
  static const std::vector<CategorySpec> specs = {
      {"tv", {"state", "color"}, {"on", "off"}},
      {"lamp", {"state", "color"}, {"on", "off"}},
      {"stove", {"state", "material"}, {"on", "off"}},
      {"fridge", {"state", "color"}, {"open", "closed"}},
      {"window", {"state", "material"}, {"open", "closed"}},
      {"wardrobe", {"state", "material"}, {"open", "closed"}},
      {"sofa", {"material", "color"}, {}},
      {"chair", {"material", "color"}, {}},
      {"table", {"material", "color"}, {}},
      {"bed", {"color", "material"}, {}},
      {"bathtub", {"color", "material"}, {}},
      {"cabinet", {"material", "color"}, {}},
      {"basket", {"material", "color"}, {}},
      {"towel", {"color", "material"}, {}},
      {"shelf", {"material", "color"}, {}},
      {"plant", {"color"}, {}},
  };
  return specs;
}

const CategorySpec& spec_of(std::string_view name) {
  for (const auto& s : catalog())
    if (s.name == name) return s;
  throw Error(ErrorCode::generation, "unknown category");
}

constexpr std::array<std::string_view, 12> kRoomLabels = {
    "kitchen", "bathroom",   "bedroom", "living room", "dining room", "office",
    "laundry", "guest room", "garage",  "hallway",     "nursery",     "pantry"};

constexpr std::array<double, 3> kBandShares = {0.575, 0.265, 0.160};
constexpr std::array<double, 5> kCategoryShares = {0.345, 0.230, 0.215, 0.145, 0.065};
constexpr std::array<QueryCategory, 5> kCategories = {
    QueryCategory::existence, QueryCategory::counting, QueryCategory::state,
    QueryCategory::identification, QueryCategory::location};

template <std::size_t N>
std::size_t sample_weighted(Rng& rng, const std::array<double, N>& shares) {
  double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    acc += shares[i];
    if (u < acc) return i;
  }
  return N - 1;
}

// Largest-remainder apportionment of `total` items over `shares`.
template <std::size_t N>
std::array<int, N> apportion(int total, const std::array<double, N>& shares) {
  std::array<int, N> counts{};
  std::array<std::pair<double, std::size_t>, N> rem{};
  int used = 0;
  for (std::size_t i = 0; i < N; ++i) {
    double exact = shares[i] * total;
    counts[i] = static_cast<int>(exact + 1e-9);
    used += counts[i];
    rem[i] = {exact - counts[i], i};
  }
  std::stable_sort(rem.begin(), rem.end(), [](auto& a, auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; used < total; ++k, ++used) counts[rem[k % N].second] += 1;
  return counts;
}

std::vector<int> split_span(int available, int parts) {
  std::vector<int> sizes(static_cast<std::size_t>(parts), available / parts);
  for (int i = 0; i < available % parts; ++i) sizes[static_cast<std::size_t>(i)] += 1;
  return sizes;
}

struct Layout {
  std::vector<Cell> walls;
  std::vector<Room> rooms;
};

Layout build_layout(Rng& rng, const GeneratorParams& p) {
  const int inner_w = p.width - 2 - (p.room_cols - 1);
  const int inner_h = p.height - 2 - (p.room_rows - 1);
  if (inner_w < 3 * p.room_cols || inner_h < 3 * p.room_rows) {
    throw Error(ErrorCode::generation, "grid too small for the requested room layout");
  }
  const auto n_rooms = static_cast<std::size_t>(p.room_rows * p.room_cols);
  if (n_rooms > kRoomLabels.size()) throw Error(ErrorCode::generation, "too many rooms for label pool");

  auto widths = split_span(inner_w, p.room_cols);
  auto heights = split_span(inner_h, p.room_rows);
  std::vector<int> x0(widths.size()), y0(heights.size());
  for (std::size_t c = 0, x = 1; c < widths.size(); ++c) {
    x0[c] = static_cast<int>(x);
    x += static_cast<std::size_t>(widths[c]) + 1;
  }
  for (std::size_t r = 0, y = 1; r < heights.size(); ++r) {
    y0[r] = static_cast<int>(y);
    y += static_cast<std::size_t>(heights[r]) + 1;
  }

  std::vector<std::uint8_t> wall(static_cast<std::size_t>(p.width * p.height), 1);
  auto at = [&](int x, int y) -> std::uint8_t& {
    return wall[static_cast<std::size_t>(y * p.width + x)];
  };

  std::vector<std::string_view> labels(kRoomLabels.begin(), kRoomLabels.end());
  rng.shuffle(labels.begin(), labels.end());

  Layout out;
  for (int r = 0; r < p.room_rows; ++r) {
    for (int c = 0; c < p.room_cols; ++c) {
      Room room;
      room.room_id = "room_" + std::to_string(r * p.room_cols + c);
      room.label = std::string(labels[static_cast<std::size_t>(r * p.room_cols + c)]);
      for (int y = y0[static_cast<std::size_t>(r)];
           y < y0[static_cast<std::size_t>(r)] + heights[static_cast<std::size_t>(r)]; ++y)
        for (int x = x0[static_cast<std::size_t>(c)];
             x < x0[static_cast<std::size_t>(c)] + widths[static_cast<std::size_t>(c)]; ++x) {
          at(x, y) = 0;
          room.cells.push_back({x, y});
        }
      out.rooms.push_back(std::move(room));
    }
  }

  // Doors: a random spanning tree over the room grid plus occasional extra links.
  struct Link { int a, b; };
  std::vector<Link> links;
  for (int r = 0; r < p.room_rows; ++r)
    for (int c = 0; c < p.room_cols; ++c) {
      int id = r * p.room_cols + c;
      if (c + 1 < p.room_cols) links.push_back({id, id + 1});
      if (r + 1 < p.room_rows) links.push_back({id, id + p.room_cols});
    }
  rng.shuffle(links.begin(), links.end());
  std::vector<int> parent(n_rooms);
  for (std::size_t i = 0; i < n_rooms; ++i) parent[i] = static_cast<int>(i);
  auto find = [&](int v) {
    while (parent[static_cast<std::size_t>(v)] != v) v = parent[static_cast<std::size_t>(v)];
    return v;
  };
  for (const Link& l : links) {
    int ra = find(l.a), rb = find(l.b);
    bool tree_edge = ra != rb;
    if (!tree_edge && !rng.bernoulli(0.3)) continue;
    if (tree_edge) parent[static_cast<std::size_t>(ra)] = rb;
    const int ar = l.a / p.room_cols, ac = l.a % p.room_cols;
    if (l.b == l.a + 1) {
      int x = x0[static_cast<std::size_t>(ac)] + widths[static_cast<std::size_t>(ac)];
      int y = y0[static_cast<std::size_t>(ar)] + rng.between(0, heights[static_cast<std::size_t>(ar)] - 1);
      at(x, y) = 0;
    } else {
      int y = y0[static_cast<std::size_t>(ar)] + heights[static_cast<std::size_t>(ar)];
      int x = x0[static_cast<std::size_t>(ac)] + rng.between(0, widths[static_cast<std::size_t>(ac)] - 1);
      at(x, y) = 0;
    }
  }

  for (int y = 0; y < p.height; ++y)
    for (int x = 0; x < p.width; ++x)
      if (at(x, y)) out.walls.push_back({x, y});
  return out;
}

std::vector<ObjectInstance> place_objects(Rng& rng, const GeneratorParams& p,
                                          const std::vector<Room>& rooms) {
  std::vector<ObjectInstance> objects;
  int next_id = 0;
  for (const Room& room : rooms) {
    std::vector<Cell> free_cells = room.cells;
    rng.shuffle(free_cells.begin(), free_cells.end());
    std::size_t used = 0;
    const int groups = rng.between(p.objects_per_room_min, p.objects_per_room_max);
    for (int g = 0; g < groups; ++g) {
      const CategorySpec& spec = catalog()[rng.below(catalog().size())];
      const int copies = rng.bernoulli(0.7) ? 1 : rng.between(2, 3);
      for (int k = 0; k < copies && used < free_cells.size(); ++k) {
        ObjectInstance obj;
        obj.object_id = "obj_" + std::to_string(next_id++);
        obj.category = std::string(spec.name);
        obj.cell = free_cells[used++];
        for (auto attr : spec.attributes) {
          if (attr == "state") {
            obj.attributes["state"] = std::string(spec.states[rng.below(2)]);
          } else {
            auto dom = attribute_domain(attr);
            obj.attributes[std::string(attr)] = std::string(dom[rng.below(dom.size())]);
          }
        }
        objects.push_back(std::move(obj));
      }
    }
  }
  return objects;
}

class QuestionBuilder {
 public:
  QuestionBuilder(Rng& rng, const GridScene& scene) : rng_(rng), scene_(scene) {
    for (const ObjectInstance& o : scene.objects()) {
      const Room* room = scene.room_at(o.cell);
      per_room_[room->room_id][o.category].push_back(&o);
      scene_count_[o.category] += 1;
    }
  }

  // Returns nullopt when the category cannot be posed in this scene.
  std::optional<Question> build(QueryCategory cat, const std::set<std::string>& preferred_rooms) {
    switch (cat) {
      case QueryCategory::existence: return existence(preferred_rooms);
      case QueryCategory::counting: return counting(preferred_rooms);
      case QueryCategory::state: return attribute_question(cat, preferred_rooms);
      case QueryCategory::identification: return attribute_question(cat, preferred_rooms);
      case QueryCategory::location: return location();
    }
    return std::nullopt;
  }

 private:
  template <typename T>
  const T& pick(const std::vector<T>& v) { return v[rng_.below(v.size())]; }

  // Candidates inside preferred rooms win when any exist.
  template <typename T>
  std::vector<std::pair<std::string, T>> prefer(const std::vector<std::pair<std::string, T>>& all,
                                                const std::set<std::string>& preferred) {
    std::vector<std::pair<std::string, T>> in;
    for (const auto& entry : all)
      if (preferred.count(entry.first)) in.push_back(entry);
    return in.empty() ? all : in;
  }

  const std::string& label_of(const std::string& room_id) const { return scene_.find_room(room_id)->label; }

  std::optional<Question> existence(const std::set<std::string>& preferred) {
    std::vector<std::pair<std::string, std::string>> rooms;
    for (const Room& r : scene_.rooms()) rooms.push_back({r.room_id, r.room_id});
    const std::string room_id = pick(prefer(rooms, preferred)).first;
    const auto& present = per_room_[room_id];
    std::string category;
    if (!present.empty() && rng_.bernoulli(0.5)) {
      std::vector<std::string> cats;
      for (const auto& [c, _] : present) cats.push_back(c);
      category = pick(cats);
    } else {
      std::vector<std::string> absent;
      for (const auto& s : catalog())
        if (!present.count(std::string(s.name))) absent.push_back(std::string(s.name));
      category = pick(absent);
    }
    Question q;
    q.query = {QueryCategory::existence, category, room_id, std::nullopt};
    q.text = "Is there a " + category + " in the " + label_of(room_id) + "?";
    std::array<std::string, 2> yn = {"yes", "no"};
    rng_.shuffle(yn.begin(), yn.end());
    q.options = {yn[0], yn[1], std::string(kDummyOption), std::string(kDummyOption)};
    return q;
  }

  std::optional<Question> counting(const std::set<std::string>& preferred) {
    std::vector<std::pair<std::string, std::pair<std::string, int>>> cands;
    for (const auto& [room, cats] : per_room_)
      for (const auto& [cat, objs] : cats)
        cands.push_back({room, {cat, static_cast<int>(objs.size())}});
    if (cands.empty()) return std::nullopt;
    const auto chosen = pick(prefer(cands, preferred));
    const std::string& room_id = chosen.first;
    const std::string& category = chosen.second.first;
    const int count = chosen.second.second;
    std::vector<int> pool;
    for (int v = 0; v <= std::max(5, count + 2); ++v)
      if (v != count) pool.push_back(v);
    rng_.shuffle(pool.begin(), pool.end());
    std::array<std::string, 4> opts = {std::to_string(count), std::to_string(pool[0]),
                                       std::to_string(pool[1]), std::to_string(pool[2])};
    rng_.shuffle(opts.begin(), opts.end());
    Question q;
    q.query = {QueryCategory::counting, category, room_id, std::nullopt};
    q.text = "How many " + category + " items are in the " + label_of(room_id) + "?";
    q.options = opts;
    return q;
  }

  std::optional<Question> attribute_question(QueryCategory cat, const std::set<std::string>& preferred) {
    std::vector<std::pair<std::string, const ObjectInstance*>> cands;
    for (const auto& [room, cats] : per_room_)
      for (const auto& [c, objs] : cats) {
        if (objs.size() != 1) continue;
        const ObjectInstance* o = objs.front();
        bool has_state = o->attributes.count("state") > 0;
        bool has_other = o->attributes.size() > (has_state ? 1u : 0u);
        if ((cat == QueryCategory::state && has_state) ||
            (cat == QueryCategory::identification && has_other))
          cands.push_back({room, o});
      }
    if (cands.empty()) return std::nullopt;
    const ObjectInstance* obj = pick(prefer(cands, preferred)).second;
    const std::string room_id = scene_.room_at(obj->cell)->room_id;
    Question q;
    if (cat == QueryCategory::state) {
      const auto& states = spec_of(obj->category).states;
      std::array<std::string, 2> pair = {std::string(states[0]), std::string(states[1])};
      rng_.shuffle(pair.begin(), pair.end());
      q.query = {cat, obj->category, room_id, std::string("state")};
      q.text = "Is the " + obj->category + " in the " + label_of(room_id) + " " + std::string(states[0]) +
               " or " + std::string(states[1]) + "?";
      q.options = {pair[0], pair[1], std::string(kDummyOption), std::string(kDummyOption)};
    } else {
      std::vector<std::string> attrs;
      for (const auto& [name, _] : obj->attributes)
        if (name != "state") attrs.push_back(name);
      const std::string attr = pick(attrs);
      const std::string truth = obj->attributes.at(attr);
      std::vector<std::string> wrong;
      for (auto v : attribute_domain(attr))
        if (v != truth) wrong.push_back(std::string(v));
      rng_.shuffle(wrong.begin(), wrong.end());
      std::array<std::string, 4> opts = {truth, wrong[0], wrong[1], wrong[2]};
      rng_.shuffle(opts.begin(), opts.end());
      q.query = {cat, obj->category, room_id, attr};
      q.text = (attr == "material" ? "What is the " + obj->category + " in the " +
                                         label_of(room_id) + " made of?"
                                   : "What color is the " + obj->category + " in the " +
                                         label_of(room_id) + "?");
      q.options = opts;
    }
    return q;
  }

  std::optional<Question> location() {
    std::vector<std::string> unique;
    for (const auto& [cat, n] : scene_count_)
      if (n == 1) unique.push_back(cat);
    if (unique.empty()) return std::nullopt;
    const std::string category = pick(unique);
    const ObjectInstance* obj = nullptr;
    for (const auto& o : scene_.objects())
      if (o.category == category) obj = &o;
    const std::string truth = scene_.room_at(obj->cell)->label;
    std::vector<std::string> others;
    for (const Room& r : scene_.rooms())
      if (r.label != truth) others.push_back(r.label);
    for (auto l : kRoomLabels)
      if (others.size() < 3 && l != truth &&
          std::find(others.begin(), others.end(), std::string(l)) == others.end())
        others.push_back(std::string(l));
    rng_.shuffle(others.begin(), others.end());
    std::array<std::string, 4> opts = {truth, others[0], others[1], others[2]};
    rng_.shuffle(opts.begin(), opts.end());
    Question q;
    q.query = {QueryCategory::location, category, std::nullopt, std::nullopt};
    q.text = "Where can you find the " + category + "?";
    q.options = opts;
    return q;
  }

  Rng& rng_;
  const GridScene& scene_;
  std::map<std::string, std::map<std::string, std::vector<const ObjectInstance*>>> per_room_;
  std::map<std::string, int> scene_count_;
};

std::string urgency_suffix(UrgencyBand band) {
  switch (band) {
    case UrgencyBand::high: return " This matters for safety.";
    case UrgencyBand::medium: return " I need it for a chore.";
    case UrgencyBand::low: return "";
  }
  return "";
}

std::optional<Scenario> try_generate(Rng& rng, const std::string& scenario_id,
                                     const GeneratorParams& p) {
  Layout layout = build_layout(rng, p);
  auto objects = place_objects(rng, p, layout.rooms);
  if (static_cast<int>(objects.size()) < p.min_objects) return std::nullopt;
  auto scene = std::make_shared<const GridScene>(scenario_id + "_scene", p.width, p.height,
                                                 layout.walls, layout.rooms, objects);

  Scenario sc;
  sc.scenario_id = scenario_id;
  sc.scene = scene;
  sc.max_time = p.max_time;
  const Room& start_room = scene->rooms()[rng.below(scene->rooms().size())];
  sc.initial_pose.cell = start_room.cells[rng.below(start_room.cells.size())];
  sc.initial_pose.heading = static_cast<Heading>(rng.below(4));

  QuestionBuilder builder(rng, *scene);
  const int total = p.initial_questions + p.followup_questions;
  std::vector<Question> questions;
  std::set<std::string> used_rooms;
  for (int i = 0; i < total; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    UrgencyBand band = idx < p.band_plan.size()
                           ? p.band_plan[idx]
                           : static_cast<UrgencyBand>(sample_weighted(rng, kBandShares));
    QueryCategory cat = idx < p.category_plan.size() ? p.category_plan[idx]
                                                     : kCategories[sample_weighted(rng, kCategoryShares)];
    std::set<std::string> preferred;
    if (!used_rooms.empty() && rng.bernoulli(p.colocate_probability)) preferred = used_rooms;
    auto built = builder.build(cat, preferred);
    if (!built) return std::nullopt;
    Question q = std::move(*built);
    q.question_id = scenario_id + "_q" + std::to_string(i);
    switch (band) {
      case UrgencyBand::low: q.urgency_true = rng.uniform(0.05, 0.30); break;
      case UrgencyBand::medium: q.urgency_true = rng.uniform(0.30, 0.70); break;
      case UrgencyBand::high: q.urgency_true = rng.uniform(0.70, 0.95); break;
    }
    q.safety_flag = band == UrgencyBand::high;
    q.functional_flag = band == UrgencyBand::medium;
    q.text += urgency_suffix(band);
    q.arrival_time = i < p.initial_questions ? 0.0 : p.followup_spacing * (i - p.initial_questions + 1);
    q.ground_truth = ground_truth_answer(*scene, q.query, q.options);
    if (q.query.room_id) used_rooms.insert(*q.query.room_id);

    if (i > 0 && rng.bernoulli(p.dependency_probability)) {
      std::vector<QuestionId> related;
      for (const Question& prev : questions)
        if (prev.query.target_category == q.query.target_category ||
            (prev.query.room_id && prev.query.room_id == q.query.room_id))
          related.push_back(prev.question_id);
      if (!related.empty()) q.declared_deps.push_back(related[rng.below(related.size())]);
    }
    questions.push_back(std::move(q));
  }
  for (int i = 0; i < total; ++i) {
    auto& q = questions[static_cast<std::size_t>(i)];
    (i < p.initial_questions ? sc.initial_questions : sc.followup_questions).push_back(std::move(q));
  }
  return sc;
}

void check_params(const GeneratorParams& p) {
  if (p.width < 8 || p.height < 8) throw Error(ErrorCode::generation, "grid must be at least 8x8");
  if (p.min_objects < 5) throw Error(ErrorCode::generation, "need at least 5 objects");
  if (p.room_rows < 1 || p.room_cols < 1) throw Error(ErrorCode::generation, "need at least one room");
  if (p.objects_per_room_min < 1 || p.objects_per_room_max < p.objects_per_room_min) {
    throw Error(ErrorCode::generation, "bad objects-per-room range");
  }
  if (p.initial_questions < 1 || p.followup_questions < 0) {
    throw Error(ErrorCode::generation, "bad question counts");
  }
  if (!(p.followup_spacing > 0.0) || !(p.max_time > 0.0) ||
      p.followup_spacing * p.followup_questions > p.max_time) {
    throw Error(ErrorCode::generation, "follow-up schedule does not fit in max_time");
  }
}

Scenario generate_with_id(std::uint64_t seed, const std::string& id, const GeneratorParams& p) {
  check_params(p);
  for (int attempt = 0; attempt < 200; ++attempt) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(attempt)));
    if (auto sc = try_generate(rng, id, p)) return std::move(*sc);
  }
  throw Error(ErrorCode::generation, "could not satisfy generator parameters for '" + id + "'");
}

}  // namespace

Scenario generate_scenario(std::uint64_t seed, const GeneratorParams& params) {
  return generate_with_id(seed, "scenario_" + std::to_string(seed), params);
}

std::vector<Scenario> generate_dataset(std::uint64_t seed, int count, const GeneratorParams& params) {
  if (count < 1) throw Error(ErrorCode::generation, "dataset needs at least one scenario");
  const int per = params.initial_questions + params.followup_questions;
  const int total = per * count;

  Rng rng(derive_seed(seed, 0xDA7A5E7ULL));
  std::vector<UrgencyBand> bands;
  auto band_counts = apportion(total, kBandShares);
  for (std::size_t b = 0; b < band_counts.size(); ++b)
    bands.insert(bands.end(), static_cast<std::size_t>(band_counts[b]), static_cast<UrgencyBand>(b));
  std::vector<QueryCategory> cats;
  auto cat_counts = apportion(total, kCategoryShares);
  for (std::size_t c = 0; c < cat_counts.size(); ++c)
    cats.insert(cats.end(), static_cast<std::size_t>(cat_counts[c]), kCategories[c]);
  rng.shuffle(bands.begin(), bands.end());
  rng.shuffle(cats.begin(), cats.end());

  std::vector<Scenario> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    GeneratorParams p = params;
    auto first = static_cast<std::ptrdiff_t>(k * per);
    p.band_plan.assign(bands.begin() + first, bands.begin() + first + per);
    p.category_plan.assign(cats.begin() + first, cats.begin() + first + per);
    char id[64];
    std::snprintf(id, sizeof id, "paeqs_%llu_%03d", static_cast<unsigned long long>(seed), k);
    out.push_back(generate_with_id(derive_seed(seed, static_cast<std::uint64_t>(k) + 1), id, p));
  }
  return out;
}

}  // namespace eqsa
