#include "kitchen/grid.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace kitchen {

std::string_view to_string(StationKind k) {
  switch (k) {
    case StationKind::MeatBin: return "MEAT_BIN";
    case StationKind::OnionBin: return "ONION_BIN";
    case StationKind::ChopBoard: return "CHOP_BOARD";
    case StationKind::Grill: return "GRILL";
    case StationKind::Pot: return "POT";
    case StationKind::PlateStack: return "PLATE_STACK";
    case StationKind::ServeWindow: return "SERVE_WINDOW";
    case StationKind::Counter: return "COUNTER";
  }
  return "?";
}

std::string_view to_string(Item i) {
  switch (i) {
    case Item::MeatRaw: return "MEAT_RAW";
    case Item::MeatCooked: return "MEAT_COOKED";
    case Item::OnionWhole: return "ONION_WHOLE";
    case Item::OnionChopped: return "ONION_CHOPPED";
    case Item::PlateEmpty: return "PLATE_EMPTY";
    case Item::PlatedSteak: return "PLATED_STEAK";
    case Item::PlatedSoup: return "PLATED_SOUP";
  }
  return "?";
}

int item_units(Item i) {
  switch (i) {
    case Item::PlatedSteak: return 2;
    case Item::PlatedSoup: return 4;
    default: return 1;
  }
}

namespace {

int station_capacity(StationKind k) {
  switch (k) {
    case StationKind::Grill: return 1;
    case StationKind::Pot: return 3;
    case StationKind::ChopBoard: return 1;
    case StationKind::Counter: return 1;
    default: return 0;  // dispensers and the serve window hold nothing
  }
}

const std::map<char, StationKind>& station_chars() {
  static const std::map<char, StationKind> m = {
      {'G', StationKind::Grill},      {'P', StationKind::Pot},        {'C', StationKind::ChopBoard},
      {'M', StationKind::MeatBin},    {'O', StationKind::OnionBin},   {'D', StationKind::PlateStack},
      {'S', StationKind::ServeWindow}};
  return m;
}

std::vector<std::string_view> split_rows(std::string_view text) {
  std::vector<std::string_view> rows;
  while (!text.empty()) {
    auto nl = text.find('\n');
    auto row = text.substr(0, nl);
    if (!row.empty() && row.back() == '\r') row.remove_suffix(1);
    rows.push_back(row);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  while (!rows.empty() && rows.back().empty()) rows.pop_back();
  return rows;
}

// Multi-source BFS over floor cells. Sources get distance 0.
std::vector<int> bfs_field(const WorldState& w, const std::vector<Position>& sources) {
  std::vector<int> dist(w.tiles.size(), -1);
  std::deque<Position> q;
  for (auto s : sources) {
    auto& d = dist[static_cast<std::size_t>(w.index(s))];
    if (d != 0) {
      d = 0;
      q.push_back(s);
    }
  }
  while (!q.empty()) {
    auto p = q.front();
    q.pop_front();
    const int dp = dist[static_cast<std::size_t>(w.index(p))];
    for (auto off : kNeighbourOffsets) {
      Position n{p.x + off.x, p.y + off.y};
      if (!w.is_floor(n)) continue;
      auto& dn = dist[static_cast<std::size_t>(w.index(n))];
      if (dn >= 0) continue;
      dn = dp + 1;
      q.push_back(n);
    }
  }
  return dist;
}

std::vector<Position> floor_neighbours(const WorldState& w, Position p) {
  std::vector<Position> out;
  for (auto off : kNeighbourOffsets) {
    Position n{p.x + off.x, p.y + off.y};
    if (w.is_floor(n)) out.push_back(n);
  }
  return out;
}

}  // namespace

std::optional<int> WorldState::distance_to(int s, Position from) const {
  if (!in_bounds(from)) return std::nullopt;
  const int d = approach[static_cast<std::size_t>(s)][static_cast<std::size_t>(index(from))];
  if (d < 0) return std::nullopt;
  return d;
}

bool WorldState::adjacent_to(int s, Position p) const {
  return distance_to(s, p) == 0;
}

Position WorldState::step_towards(int s, Position from) const {
  const auto& field = approach[static_cast<std::size_t>(s)];
  const int d = field[static_cast<std::size_t>(index(from))];
  if (d <= 0) return from;
  for (auto off : kNeighbourOffsets) {
    Position n{from.x + off.x, from.y + off.y};
    if (is_floor(n) && field[static_cast<std::size_t>(index(n))] == d - 1) return n;
  }
  return from;
}

int WorldState::floor_distance(Position a, Position b) const {
  if (!is_floor(a) || !is_floor(b)) return -1;
  return pair_distance[static_cast<std::size_t>(index(a)) * tiles.size() + static_cast<std::size_t>(index(b))];
}

int WorldState::nearest(StationKind k, Position from) const {
  int best = -1;
  int best_d = -1;
  for (std::size_t s = 0; s < stations.size(); ++s) {
    if (stations[s].kind != k) continue;
    auto d = distance_to(static_cast<int>(s), from);
    if (d && (best < 0 || *d < best_d)) {
      best_d = *d;
      best = static_cast<int>(s);
    }
  }
  return best;
}

int WorldState::bound(StationKind k, MealId meal, int chain) const {
  for (std::size_t s = 0; s < stations.size(); ++s) {
    const auto& st = stations[s];
    if (st.kind == k && st.meal == meal && (chain < 0 || st.chain == chain)) return static_cast<int>(s);
  }
  return -1;
}

int WorldState::count(StationKind k) const {
  return static_cast<int>(std::count_if(stations.begin(), stations.end(),
                                        [k](const Station& s) { return s.kind == k; }));
}

std::vector<int> WorldState::stations_of(StationKind k) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < stations.size(); ++i)
    if (stations[i].kind == k) out.push_back(static_cast<int>(i));
  return out;
}

std::string_view default_layout() {
  static constexpr std::string_view kLayout =
      "#################################################\n"
      "G...............................................M\n"
      "#...............................................#\n"
      "#...............................................#\n"
      "#...............................................#\n"
      "#...............................................#\n"
      "G...............................................#\n"
      "#...............................................#\n"
      "#...............................................#\n"
      "#...............................................#\n"
      "#...............................................#\n"
      "C...............................................#\n"
      "#.....................AAAA......................#\n"
      "#.....................AAAA......................O\n"
      "#...............................................#\n"
      "C...............................................#\n"
      "#...............................................#\n"
      "#...............................................#\n"
      "#...............................................#\n"
      "#...............................................#\n"
      "P...............................................#\n"
      "#...............................................#\n"
      "#...............................................#\n"
      "#...............................................#\n"
      "#...............................................#\n"
      "P...............................................D\n"
      "########################S########################\n";
  return kLayout;
}

WorldState parse_layout(std::string_view text, RecipeNeeds needs) {
  const auto rows = split_rows(text);
  if (rows.empty()) throw LayoutError("layout is empty");
  const auto width = rows.front().size();
  if (width == 0) throw LayoutError("layout row 1 is empty");
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != width)
      throw LayoutError("ragged row " + std::to_string(r + 1) + ": expected " + std::to_string(width) +
                        " cells, found " + std::to_string(rows[r].size()));
  }

  WorldState w;
  w.width = static_cast<int>(width);
  w.height = static_cast<int>(rows.size());
  w.tiles.resize(width * rows.size());

  const auto& chars = station_chars();
  for (int y = 0; y < w.height; ++y) {
    for (int x = 0; x < w.width; ++x) {
      const char c = rows[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)];
      auto& t = w.tiles[static_cast<std::size_t>(w.index({x, y}))];
      if (c == '#') {
        t.kind = TileKind::Wall;
      } else if (c == '.') {
        t.kind = TileKind::Floor;
      } else if (c == 'A') {
        t.kind = TileKind::Floor;
        w.spawns.push_back({x, y});
      } else if (auto it = chars.find(c); it != chars.end()) {
        t.kind = TileKind::Station;
        t.station = static_cast<int>(w.stations.size());
        Station s;
        s.kind = it->second;
        s.pos = {x, y};
        s.capacity = station_capacity(s.kind);
        w.stations.push_back(std::move(s));
      } else {
        throw LayoutError("unknown character '" + std::string(1, c) + "' at row " + std::to_string(y + 1) +
                          ", column " + std::to_string(x + 1));
      }
    }
  }

  std::vector<StationKind> required = {StationKind::PlateStack, StationKind::ServeWindow};
  if (needs.steak) required.insert(required.end(), {StationKind::MeatBin, StationKind::Grill});
  if (needs.soup)
    required.insert(required.end(), {StationKind::OnionBin, StationKind::ChopBoard, StationKind::Pot});
  for (auto k : required) {
    if (w.count(k) == 0) throw LayoutError("missing required station " + std::string(to_string(k)));
  }
  if (w.spawns.empty()) throw LayoutError("layout has no agent spawn cell ('A')");

  w.approach.reserve(w.stations.size());
  for (const auto& s : w.stations) {
    auto ring = floor_neighbours(w, s.pos);
    if (ring.empty()) throw LayoutError("station " + std::string(to_string(s.kind)) + " at row " +
                                        std::to_string(s.pos.y + 1) + ", column " +
                                        std::to_string(s.pos.x + 1) + " has no floor access");
    w.approach.push_back(bfs_field(w, ring));
  }
  w.pair_distance.assign(w.tiles.size() * w.tiles.size(), -1);
  for (int y = 0; y < w.height; ++y) {
    for (int x = 0; x < w.width; ++x) {
      if (!w.is_floor({x, y})) continue;
      auto field = bfs_field(w, {{x, y}});
      std::copy(field.begin(), field.end(),
                w.pair_distance.begin() + static_cast<std::ptrdiff_t>(w.index({x, y})) *
                                              static_cast<std::ptrdiff_t>(w.tiles.size()));
    }
  }
  for (int s = 0; s < static_cast<int>(w.stations.size()); ++s) {
    if (!w.distance_to(s, w.spawns.front()))
      throw LayoutError("station " + std::string(to_string(w.stations[static_cast<std::size_t>(s)].kind)) +
                        " is unreachable from the spawn area");
  }
  return w;
}

std::vector<Position> shortest_path(const WorldState& world, Position from, Position target) {
  if (!world.is_floor(from)) throw NoPathError("path origin is not a floor cell");
  if (!world.in_bounds(target)) throw NoPathError("path target is out of bounds");

  std::vector<Position> goals;
  if (world.is_floor(target))
    goals.push_back(target);
  else
    goals = floor_neighbours(world, target);
  if (std::find(goals.begin(), goals.end(), from) != goals.end()) return {};
  if (goals.empty()) throw NoPathError("target has no floor access");

  // BFS from the goals, then walk downhill from the origin.
  const auto field = bfs_field(world, goals);
  int d = field[static_cast<std::size_t>(world.index(from))];
  if (d < 0) throw NoPathError("target unreachable");
  std::vector<Position> path;
  Position cur = from;
  while (d > 0) {
    for (auto off : kNeighbourOffsets) {
      Position n{cur.x + off.x, cur.y + off.y};
      if (world.is_floor(n) && field[static_cast<std::size_t>(world.index(n))] == d - 1) {
        cur = n;
        break;
      }
    }
    path.push_back(cur);
    --d;
  }
  return path;
}

}  // namespace kitchen
