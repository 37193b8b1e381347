#include "blindmaze/core.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace bm {

std::optional<Instruction> instruction_from_char(char c) {
  switch (c) {
    case 'N': return Instruction::N;
    case 'S': return Instruction::S;
    case 'E': return Instruction::E;
    case 'W': return Instruction::W;
    default: return std::nullopt;
  }
}

EdgeId edge_for_move(Coord pos, Instruction i) {
  switch (i) {
    case Instruction::N: return v_edge(pos.x, pos.y);
    case Instruction::S: return v_edge(pos.x, pos.y - 1);
    case Instruction::E: return h_edge(pos.x, pos.y);
    case Instruction::W: return h_edge(pos.x - 1, pos.y);
  }
  return {};
}

bool edge_present(const CardinalMazeSpec& maze, const EdgeId& e) {
  if (e.orient == EdgeId::Orient::V) {
    return maze.removed_v.find(e) == maze.removed_v.end();
  }
  if (maze.removed_h.find(e) != maze.removed_h.end()) return false;
  for (const auto& ray : maze.h_rays) {
    if (ray.row != e.base.y) continue;
    if (ray.side == RayRemoval::Side::WestRay && e.base.x <= ray.bound) return false;
    if (ray.side == RayRemoval::Side::EastRay && e.base.x >= ray.bound) return false;
  }
  return true;
}

Coord step(const CardinalMazeSpec& maze, Coord pos, Instruction i) {
  if (!edge_present(maze, edge_for_move(pos, i))) return pos;
  Coord d = delta(i);
  return {pos.x + d.x, pos.y + d.y};
}

Rect description_bounds(const CardinalMazeSpec& maze) {
  Rect r{maze.origin.x, maze.origin.x, maze.origin.y, maze.origin.y};
  auto grow = [&r](std::int64_t x, std::int64_t y) {
    r.x_min = std::min(r.x_min, x);
    r.x_max = std::max(r.x_max, x);
    r.y_min = std::min(r.y_min, y);
    r.y_max = std::max(r.y_max, y);
  };
  grow(maze.destination.x, maze.destination.y);
  for (const auto& e : maze.removed_h) {
    grow(e.base.x, e.base.y);
    grow(e.base.x + 1, e.base.y);
  }
  for (const auto& e : maze.removed_v) {
    grow(e.base.x, e.base.y);
    grow(e.base.x, e.base.y + 1);
  }
  for (const auto& ray : maze.h_rays) grow(ray.bound, ray.row);
  return r;
}

Rect default_window(const CardinalMazeSpec& maze) {
  Rect r = description_bounds(maze);
  std::int64_t span = std::max(r.x_max - r.x_min, r.y_max - r.y_min);
  std::int64_t pad = 2 * span + 4;
  return {r.x_min - pad, r.x_max + pad, r.y_min - pad, r.y_max + pad};
}

std::set<Coord> reachable_set(const CardinalMazeSpec& maze, Coord from,
                              const Rect& window) {
  std::set<Coord> seen;
  if (!window.contains(from)) return seen;
  std::deque<Coord> queue{from};
  seen.insert(from);
  constexpr Instruction dirs[] = {Instruction::E, Instruction::N, Instruction::S,
                                  Instruction::W};
  while (!queue.empty()) {
    Coord v = queue.front();
    queue.pop_front();
    for (Instruction i : dirs) {
      if (!edge_present(maze, edge_for_move(v, i))) continue;
      Coord d = delta(i);
      Coord nxt{v.x + d.x, v.y + d.y};
      if (!window.contains(nxt) || seen.count(nxt)) continue;
      seen.insert(nxt);
      queue.push_back(nxt);
    }
  }
  return seen;
}

namespace {

// Inserts one representative value inside every gap between consecutive
// interesting values, plus one on each side of the whole range. A
// representative stands for the entire (possibly infinite) run of uninteresting
// values around it: nothing in the maze description distinguishes two values
// inside the same run.
std::vector<std::int64_t> with_representatives(std::set<std::int64_t> vals) {
  std::vector<std::int64_t> out;
  out.reserve(2 * vals.size() + 2);
  out.push_back(*vals.begin() - 1);
  std::int64_t prev = *vals.begin();
  for (std::int64_t v : vals) {
    if (v > prev + 1) out.push_back(prev + 1);
    out.push_back(v);
    prev = v;
  }
  out.push_back(prev + 1);
  return out;
}

}  // namespace

std::vector<bool> in_component(const CardinalMazeSpec& maze, Coord from,
                               const std::vector<Coord>& queries) {
  // Connectivity on the infinite lattice via coordinate compression. Only the
  // finitely many described coordinates matter: on an undescribed column every
  // V edge is present, on an undescribed row every H edge is present, and
  // edge presence cannot change strictly between two described coordinates.
  // Hence one representative per gap (and per infinite side) decides every
  // connectivity question about described vertices.
  std::set<std::int64_t> xs_set, ys_set;
  auto note = [&](std::int64_t x, std::int64_t y) {
    xs_set.insert(x);
    ys_set.insert(y);
  };
  note(maze.origin.x, maze.origin.y);
  note(maze.destination.x, maze.destination.y);
  note(from.x, from.y);
  for (const Coord& c : queries) note(c.x, c.y);
  for (const auto& e : maze.removed_h) {
    note(e.base.x, e.base.y);
    note(e.base.x + 1, e.base.y);
  }
  for (const auto& e : maze.removed_v) {
    note(e.base.x, e.base.y);
    note(e.base.x, e.base.y + 1);
  }
  for (const auto& ray : maze.h_rays) {
    note(ray.bound, ray.row);
    note(ray.bound + 1, ray.row);
  }
  std::vector<std::int64_t> xs = with_representatives(std::move(xs_set));
  std::vector<std::int64_t> ys = with_representatives(std::move(ys_set));
  const std::size_t nx = xs.size(), ny = ys.size();

  auto x_index = [&](std::int64_t x) {
    return static_cast<std::size_t>(
        std::lower_bound(xs.begin(), xs.end(), x) - xs.begin());
  };
  auto y_index = [&](std::int64_t y) {
    return static_cast<std::size_t>(
        std::lower_bound(ys.begin(), ys.end(), y) - ys.begin());
  };

  // A cell (i,j) covers the run of columns starting at xs[i] (up to xs[i+1]-1,
  // or unbounded at the ends) crossed with the analogous run of rows. Edge
  // presence is uniform across a run, so testing the run's first value decides
  // the whole compressed edge.
  std::vector<char> seen(nx * ny, 0);
  auto id = [&](std::size_t i, std::size_t j) { return j * nx + i; };
  std::deque<std::pair<std::size_t, std::size_t>> queue;
  auto push = [&](std::size_t i, std::size_t j) {
    if (!seen[id(i, j)]) {
      seen[id(i, j)] = 1;
      queue.emplace_back(i, j);
    }
  };
  push(x_index(from.x), y_index(from.y));
  while (!queue.empty()) {
    auto [i, j] = queue.front();
    queue.pop_front();
    if (i + 1 < nx && edge_present(maze, h_edge(xs[i], ys[j]))) push(i + 1, j);
    if (i > 0 && edge_present(maze, h_edge(xs[i - 1], ys[j]))) push(i - 1, j);
    if (j + 1 < ny && edge_present(maze, v_edge(xs[i], ys[j]))) push(i, j + 1);
    if (j > 0 && edge_present(maze, v_edge(xs[i], ys[j - 1]))) push(i, j - 1);
  }
  std::vector<bool> out(queries.size());
  for (std::size_t k = 0; k < queries.size(); ++k) {
    out[k] = seen[id(x_index(queries[k].x), y_index(queries[k].y))] != 0;
  }
  return out;
}

int well_order_cmp(const WellOrder& w, std::int64_t a, std::int64_t b) {
  if (a == b) return 0;
  // Rank in the standard order 0 < 1 < -1 < 2 < -2 < ...
  auto standard_rank = [](std::int64_t v) -> std::uint64_t {
    if (v > 0) return 2 * static_cast<std::uint64_t>(v) - 1;
    return 2 * static_cast<std::uint64_t>(-v);
  };
  auto rank = [&](std::int64_t v) -> std::uint64_t {
    switch (w.kind) {
      case WellOrder::Kind::Standard:
        return standard_rank(v);
      case WellOrder::Kind::ShiftedBy:
        return standard_rank(v - w.param);
      case WellOrder::Kind::NSpecial: {
        // 0 first, then n, then positives (skipping n) interleaved with
        // negatives (skipping n): 0, n, p1, m1, p2, m2, ...
        std::int64_t n = w.param;
        if (n == 0) return standard_rank(v);
        if (v == 0) return 0;
        if (v == n) return 1;
        if (v > 0) {
          std::uint64_t j = static_cast<std::uint64_t>(v) -
                            ((n > 0 && v > n) ? 1 : 0);
          return 2 * j;
        }
        std::uint64_t k = static_cast<std::uint64_t>(-v) -
                          ((n < 0 && v < n) ? 1 : 0);
        return 2 * k + 1;
      }
    }
    return 0;
  };
  std::uint64_t ra = rank(a), rb = rank(b);
  return ra < rb ? -1 : (ra > rb ? 1 : 0);
}

std::int64_t well_order_min(const WellOrder& w,
                            const std::vector<std::int64_t>& candidates) {
  if (candidates.empty()) throw std::invalid_argument("well_order_min: empty");
  std::int64_t best = candidates.front();
  for (std::int64_t c : candidates) {
    if (well_order_cmp(w, c, best) < 0) best = c;
  }
  return best;
}

bool LabeledDigraphMaze::properly_coloured() const {
  std::set<std::pair<std::size_t, std::uint64_t>> seen;
  for (const auto& e : edges) {
    if (e.from >= vertex_count || e.to >= vertex_count) return false;
    if (!seen.insert({e.from, e.colour}).second) return false;
  }
  return true;
}

std::size_t LabeledDigraphMaze::step(std::size_t v, std::uint64_t colour) const {
  for (const auto& e : edges) {
    if (e.from == v && e.colour == colour) return e.to;
  }
  return v;
}

// ---------------------------------------------------------------------------
// Maze file parsing: a tiny reader for the structured-text format. Values are
// integers, strings, lists, or {key: value} records; keys may be bare or
// quoted; whitespace and trailing commas are tolerated.
// ---------------------------------------------------------------------------

namespace {

struct Reader {
  const std::string& s;
  std::size_t i = 0;

  explicit Reader(const std::string& text) : s(text) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("maze parse error at offset " + std::to_string(i) + ": " + msg);
  }
  void skip_ws() {
    while (i < s.size() && (std::isspace(static_cast<unsigned char>(s[i])) || s[i] == ',')) ++i;
  }
  bool eof() {
    skip_ws();
    return i >= s.size();
  }
  char peek() {
    skip_ws();
    if (i >= s.size()) fail("unexpected end of input");
    return s[i];
  }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++i;
  }
  std::int64_t read_int() {
    skip_ws();
    std::size_t start = i;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == start || (i == start + 1 && !std::isdigit(static_cast<unsigned char>(s[start]))))
      fail("expected integer");
    return std::stoll(s.substr(start, i - start));
  }
  std::string read_key() {
    skip_ws();
    if (i < s.size() && s[i] == '"') return read_string();
    std::size_t start = i;
    while (i < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
    if (i == start) fail("expected key");
    return s.substr(start, i - start);
  }
  std::string read_string() {
    skip_ws();
    if (i >= s.size() || s[i] != '"') fail("expected string");
    ++i;
    std::size_t start = i;
    while (i < s.size() && s[i] != '"') ++i;
    if (i >= s.size()) fail("unterminated string");
    std::string out = s.substr(start, i - start);
    ++i;
    return out;
  }
  Coord read_pair() {
    expect('[');
    std::int64_t x = read_int();
    std::int64_t y = read_int();
    expect(']');
    return {x, y};
  }
};

}  // namespace

CardinalMazeSpec parse_maze(const std::string& text) {
  CardinalMazeSpec maze;
  Reader r(text);
  bool saw_origin = false, saw_destination = false;
  while (!r.eof()) {
    std::string key = r.read_key();
    r.expect(':');
    if (key == "origin") {
      maze.origin = r.read_pair();
      saw_origin = true;
    } else if (key == "destination") {
      maze.destination = r.read_pair();
      saw_destination = true;
    } else if (key == "removed_h" || key == "removed_v") {
      r.expect('[');
      auto& target = key == "removed_h" ? maze.removed_h : maze.removed_v;
      auto orient = key == "removed_h" ? EdgeId::Orient::H : EdgeId::Orient::V;
      while (r.peek() != ']') target.insert({r.read_pair(), orient});
      r.expect(']');
    } else if (key == "h_rays") {
      r.expect('[');
      while (r.peek() != ']') {
        r.expect('{');
        RayRemoval ray;
        bool saw_row = false, saw_side = false, saw_bound = false;
        while (r.peek() != '}') {
          std::string field = r.read_key();
          r.expect(':');
          if (field == "row") {
            ray.row = r.read_int();
            saw_row = true;
          } else if (field == "side") {
            std::string side = r.read_string();
            if (side == "west") ray.side = RayRemoval::Side::WestRay;
            else if (side == "east") ray.side = RayRemoval::Side::EastRay;
            else r.fail("side must be \"west\" or \"east\"");
            saw_side = true;
          } else if (field == "bound") {
            ray.bound = r.read_int();
            saw_bound = true;
          } else {
            r.fail("unknown ray field '" + field + "'");
          }
        }
        r.expect('}');
        if (!saw_row || !saw_side || !saw_bound) r.fail("incomplete ray record");
        maze.h_rays.push_back(ray);
      }
      r.expect(']');
    } else {
      r.fail("unknown key '" + key + "'");
    }
  }
  if (!saw_origin || !saw_destination)
    throw ParseError("maze parse error: origin and destination are required");
  return maze;
}

std::string print_maze(const CardinalMazeSpec& maze) {
  std::ostringstream out;
  out << "origin: [" << maze.origin.x << ", " << maze.origin.y << "]\n";
  out << "destination: [" << maze.destination.x << ", " << maze.destination.y << "]\n";
  auto edge_list = [&out](const char* name, const std::set<EdgeId>& edges) {
    out << name << ": [";
    bool first = true;
    for (const auto& e : edges) {
      if (!first) out << ", ";
      first = false;
      out << "[" << e.base.x << ", " << e.base.y << "]";
    }
    out << "]\n";
  };
  edge_list("removed_h", maze.removed_h);
  edge_list("removed_v", maze.removed_v);
  out << "h_rays: [";
  bool first = true;
  for (const auto& ray : maze.h_rays) {
    if (!first) out << ", ";
    first = false;
    out << "{row: " << ray.row << ", side: \""
        << (ray.side == RayRemoval::Side::WestRay ? "west" : "east")
        << "\", bound: " << ray.bound << "}";
  }
  out << "]\n";
  return out.str();
}

CardinalMazeSpec load_maze_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open maze file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_maze(buf.str());
}

void save_maze_file(const CardinalMazeSpec& maze, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write maze file: " + path);
  out << print_maze(maze);
}

}  // namespace bm
