#pragma once

#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "kitchen/rng.hpp"
#include "kitchen/types.hpp"

namespace kitchen {

struct Position {
  int x = 0;  // column
  int y = 0;  // row
  auto operator<=>(const Position&) const = default;
};

inline int manhattan(Position a, Position b) {
  return (a.x > b.x ? a.x - b.x : b.x - a.x) + (a.y > b.y ? a.y - b.y : b.y - a.y);
}

enum class StationKind { MeatBin, OnionBin, ChopBoard, Grill, Pot, PlateStack, ServeWindow, Counter };

enum class Item { MeatRaw, MeatCooked, OnionWhole, OnionChopped, PlateEmpty, PlatedSteak, PlatedSoup };

std::string_view to_string(StationKind k);
std::string_view to_string(Item i);

/// Ingredient units an item stands for. Plating merges items, so conservation
/// is tracked in units rather than object counts.
int item_units(Item i);

struct Station {
  StationKind kind = StationKind::Counter;
  Position pos;
  int timer_remaining = 0;
  std::vector<Item> contents;
  int capacity = 0;
  bool cooked = false;  // pot only: soup finished, waiting to be plated
  MealId meal = -1;     // meal currently bound to this station, -1 when free
  int chain = -1;       // chop board only: onion chain of `meal` resting here
};

enum class TileKind { Floor, Wall, Station };

struct Tile {
  TileKind kind = TileKind::Wall;
  int station = -1;
};

class LayoutError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NoPathError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Which recipes a layout must support. Drives the required-station check.
struct RecipeNeeds {
  bool steak = true;
  bool soup = true;
};

struct WorldState {
  int width = 0;
  int height = 0;
  std::vector<Tile> tiles;  // row-major
  std::vector<Station> stations;
  std::vector<Position> spawns;
  Tick tick = 0;
  SplitMix64 rng;

  /// approach[s][cell] = steps from a floor cell to any floor cell adjacent to
  /// station s; -1 where unreachable or not floor.
  std::vector<std::vector<int>> approach;
  std::vector<int> pair_distance;  // cells x cells, floor only

  bool in_bounds(Position p) const { return p.x >= 0 && p.y >= 0 && p.x < width && p.y < height; }
  int index(Position p) const { return p.y * width + p.x; }
  const Tile& tile(Position p) const { return tiles[static_cast<std::size_t>(index(p))]; }
  bool is_floor(Position p) const { return in_bounds(p) && tile(p).kind == TileKind::Floor; }

  /// Steps from `from` to the approach ring of station `s`; nullopt if unreachable.
  std::optional<int> distance_to(int s, Position from) const;
  bool adjacent_to(int s, Position p) const;
  /// Next cell on a shortest path towards station `s`, or `from` if already adjacent.
  Position step_towards(int s, Position from) const;

  /// Steps between two floor cells; -1 if disconnected or not floor.
  int floor_distance(Position a, Position b) const;

  /// Nearest station of a kind by walking distance (ties: lowest index), or -1.
  int nearest(StationKind k, Position from) const;
  /// Station of a kind bound to `meal` (and onion `chain` when >= 0), or -1.
  int bound(StationKind k, MealId meal, int chain = -1) const;

  int count(StationKind k) const;
  std::vector<int> stations_of(StationKind k) const;
};

inline constexpr Position kNeighbourOffsets[] = {{0, -1}, {1, 0}, {0, 1}, {-1, 0}};

/// Built-in 49x27 kitchen used when a config says `layout = default`: grills,
/// chop boards and pots on the west wall, bins and plate stack on the east
/// wall, serve window in the south wall, spawns in the middle.
std::string_view default_layout();

/// Parses the ASCII layout format ('#' wall, '.' floor, 'G' grill, 'P' pot,
/// 'C' chop board, 'M' meat bin, 'O' onion bin, 'D' plate stack, 'S' serve
/// window, 'A' spawn). Throws LayoutError naming the defect.
WorldState parse_layout(std::string_view text, RecipeNeeds needs = {});

/// Shortest 4-connected floor path from `from` to a cell adjacent to `target`
/// (or onto `target` when it is floor). Excludes `from`; empty when already
/// there. Agents never block. Throws NoPathError.
std::vector<Position> shortest_path(const WorldState& world, Position from, Position target);

}  // namespace kitchen
