#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace bm {

// ---------------------------------------------------------------------------
// Coordinates and instructions
// ---------------------------------------------------------------------------

struct Coord {
  std::int64_t x = 0;  // longitude
  std::int64_t y = 0;  // latitude

  friend bool operator==(const Coord&, const Coord&) = default;
  friend auto operator<=>(const Coord&, const Coord&) = default;
};

enum class Instruction : std::uint8_t { N, S, E, W };

constexpr Instruction inverse(Instruction i) {
  switch (i) {
    case Instruction::N: return Instruction::S;
    case Instruction::S: return Instruction::N;
    case Instruction::E: return Instruction::W;
    case Instruction::W: return Instruction::E;
  }
  return Instruction::N;  // unreachable
}

constexpr char to_char(Instruction i) {
  switch (i) {
    case Instruction::N: return 'N';
    case Instruction::S: return 'S';
    case Instruction::E: return 'E';
    case Instruction::W: return 'W';
  }
  return '?';
}

std::optional<Instruction> instruction_from_char(char c);

// Unit displacement of an instruction on the free lattice.
constexpr Coord delta(Instruction i) {
  switch (i) {
    case Instruction::N: return {0, 1};
    case Instruction::S: return {0, -1};
    case Instruction::E: return {1, 0};
    case Instruction::W: return {-1, 0};
  }
  return {0, 0};
}

// ---------------------------------------------------------------------------
// Edges
// ---------------------------------------------------------------------------

// Canonical id of one lattice edge. H spans base -> (x+1, y); V spans
// base -> (x, y+1). Every edge has exactly one EdgeId.
struct EdgeId {
  Coord base;
  enum class Orient : std::uint8_t { H, V } orient = Orient::H;

  friend bool operator==(const EdgeId&, const EdgeId&) = default;
  friend auto operator<=>(const EdgeId&, const EdgeId&) = default;
};

inline EdgeId h_edge(std::int64_t x, std::int64_t y) {
  return {{x, y}, EdgeId::Orient::H};
}
inline EdgeId v_edge(std::int64_t x, std::int64_t y) {
  return {{x, y}, EdgeId::Orient::V};
}

// The edge crossed when moving from `pos` in direction `i`.
EdgeId edge_for_move(Coord pos, Instruction i);

// ---------------------------------------------------------------------------
// Maze description
// ---------------------------------------------------------------------------

// Removes an infinite half-row of horizontal edges: WestRay removes every H
// edge on `row` with base.x <= bound; EastRay every H edge with base.x >= bound.
struct RayRemoval {
  std::int64_t row = 0;
  enum class Side : std::uint8_t { WestRay, EastRay } side = Side::WestRay;
  std::int64_t bound = 0;

  friend bool operator==(const RayRemoval&, const RayRemoval&) = default;
  friend auto operator<=>(const RayRemoval&, const RayRemoval&) = default;
};

// A finitely-described maze on the Z^2 lattice: the lattice is complete except
// for the listed removed edges and ray removals. Immutable after construction.
struct CardinalMazeSpec {
  std::set<EdgeId> removed_h;
  std::set<EdgeId> removed_v;
  std::vector<RayRemoval> h_rays;
  Coord origin{0, 0};
  Coord destination{0, 0};

  friend bool operator==(const CardinalMazeSpec&, const CardinalMazeSpec&) = default;
};

bool edge_present(const CardinalMazeSpec& maze, const EdgeId& e);

// Neighbour in direction i if the crossed edge is present, else pos unchanged.
Coord step(const CardinalMazeSpec& maze, Coord pos, Instruction i);

// Axis-aligned closed rectangle used as a BFS window.
struct Rect {
  std::int64_t x_min = 0, x_max = 0, y_min = 0, y_max = 0;

  bool contains(Coord c) const {
    return c.x >= x_min && c.x <= x_max && c.y >= y_min && c.y <= y_max;
  }
  friend bool operator==(const Rect&, const Rect&) = default;
};

// Bounding box of every coordinate mentioned in the description (removed edge
// endpoints, ray anchors, origin, destination), or nullopt if nothing at all
// is mentioned beyond origin/destination (those are always included).
Rect description_bounds(const CardinalMazeSpec& maze);

// A window such that every connectivity question about described vertices is
// decided inside it (outside, the lattice is complete).
Rect default_window(const CardinalMazeSpec& maze);

std::set<Coord> reachable_set(const CardinalMazeSpec& maze, Coord from,
                              const Rect& window);

// Which of `queries` lie in the connected component of `from` on the full
// infinite maze. Runs on a coordinate-compressed grid, so the cost depends on
// the description size, not on how far apart the described features are.
std::vector<bool> in_component(const CardinalMazeSpec& maze, Coord from,
                               const std::vector<Coord>& queries);

// ---------------------------------------------------------------------------
// Well orders on Z
// ---------------------------------------------------------------------------

// Standard: 0 < 1 < -1 < 2 < -2 < ...
// ShiftedBy(y): y < 1+y < -1+y < 2+y < ...
// NSpecial(n): 0 < n < 1 < -1 < 2 < -2 < ... (n promoted out of its slot).
struct WellOrder {
  enum class Kind : std::uint8_t { Standard, ShiftedBy, NSpecial } kind = Kind::Standard;
  std::int64_t param = 0;  // y for ShiftedBy, n for NSpecial

  static WellOrder standard() { return {Kind::Standard, 0}; }
  static WellOrder shifted_by(std::int64_t y) { return {Kind::ShiftedBy, y}; }
  static WellOrder n_special(std::int64_t n) { return {Kind::NSpecial, n}; }
};

// Negative if a precedes b in the order, 0 if equal, positive otherwise.
int well_order_cmp(const WellOrder& w, std::int64_t a, std::int64_t b);

// Least element of a nonempty range of candidates under the order.
std::int64_t well_order_min(const WellOrder& w,
                            const std::vector<std::int64_t>& candidates);

// ---------------------------------------------------------------------------
// General model: finite labeled digraph maze
// ---------------------------------------------------------------------------

// A finite directed graph with colours drawn from an arbitrary alphabet of
// naturals; the colouring must be proper (out-edges of a vertex have distinct
// colours). The robot follows colour sequences; a missing colour is a no-op.
struct LabeledDigraphMaze {
  struct Edge {
    std::size_t from = 0;
    std::size_t to = 0;
    std::uint64_t colour = 0;
  };
  std::size_t vertex_count = 0;
  std::vector<Edge> edges;
  std::size_t origin = 0;
  std::size_t destination = 0;

  bool properly_coloured() const;
  // Follow one colour from a vertex (identity if no such out-edge).
  std::size_t step(std::size_t v, std::uint64_t colour) const;
};

// ---------------------------------------------------------------------------
// Maze file format
// ---------------------------------------------------------------------------

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Structured text, one maze per document:
//   origin: [0, 0]
//   destination: [3, -2]
//   removed_h: [[0, 1], [2, -1]]
//   removed_v: [[0, -1]]
//   h_rays: [{row: 2, side: "west", bound: -3}]
// Unknown keys rejected; integers must round-trip exactly.
CardinalMazeSpec parse_maze(const std::string& text);
std::string print_maze(const CardinalMazeSpec& maze);
CardinalMazeSpec load_maze_file(const std::string& path);
void save_maze_file(const CardinalMazeSpec& maze, const std::string& path);

}  // namespace bm

template <>
struct std::hash<bm::Coord> {
  std::size_t operator()(const bm::Coord& c) const noexcept {
    std::uint64_t h = static_cast<std::uint64_t>(c.x) * 0x9e3779b97f4a7c15ULL;
    h ^= static_cast<std::uint64_t>(c.y) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};
