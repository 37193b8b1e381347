#include "blindmaze/analyzer.hpp"

#include "blindmaze/generators.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace bm {
namespace {

constexpr std::int64_t kIntMin = std::numeric_limits<std::int64_t>::min();
constexpr std::int64_t kIntMax = std::numeric_limits<std::int64_t>::max();

bool hpres(const CardinalMazeSpec& m, std::int64_t x, std::int64_t y) {
  return edge_present(m, h_edge(x, y));
}

// Per-row view of the removed horizontal edges (finite set + at most one ray
// per side after consolidation).
struct RowData {
  std::vector<std::int64_t> removed;  // sorted H bases
  std::optional<std::int64_t> west_bound, east_bound;
};

std::map<std::int64_t, RowData> build_rows(const CardinalMazeSpec& m) {
  std::map<std::int64_t, RowData> rows;
  for (const auto& e : m.removed_h) rows[e.base.y].removed.push_back(e.base.x);
  for (auto& [y, r] : rows) std::sort(r.removed.begin(), r.removed.end());
  for (const auto& ray : m.h_rays) {
    auto& r = rows[ray.row];
    if (ray.side == RayRemoval::Side::WestRay) {
      r.west_bound = r.west_bound ? std::max(*r.west_bound, ray.bound) : ray.bound;
    } else {
      r.east_bound = r.east_bound ? std::min(*r.east_bound, ray.bound) : ray.bound;
    }
  }
  return rows;
}

bool row_hne(const RowData& r, std::int64_t x) {
  if (r.west_bound && x <= *r.west_bound) return true;
  if (r.east_bound && x >= *r.east_bound) return true;
  return std::binary_search(r.removed.begin(), r.removed.end(), x);
}

std::map<std::int64_t, std::vector<std::int64_t>> build_vcols(
    const CardinalMazeSpec& m) {
  std::map<std::int64_t, std::vector<std::int64_t>> cols;
  for (const auto& e : m.removed_v) cols[e.base.x].push_back(e.base.y);
  for (auto& [x, ys] : cols) std::sort(ys.begin(), ys.end());
  return cols;
}

std::vector<ColumnSegment> segments_from(
    const std::map<std::int64_t, std::vector<std::int64_t>>& vcols,
    std::int64_t x) {
  std::vector<ColumnSegment> out;
  auto it = vcols.find(x);
  if (it == vcols.end() || it->second.empty()) {
    out.push_back({std::nullopt, std::nullopt});
    return out;
  }
  const auto& ys = it->second;
  out.push_back({std::nullopt, ys.front()});
  for (std::size_t i = 0; i + 1 < ys.size(); ++i)
    out.push_back({ys[i] + 1, ys[i + 1]});
  out.push_back({ys.back() + 1, std::nullopt});
  return out;
}

// Scan caps: with finitely many removed edges and rays, a vertical scan for a
// present H edge at fixed longitude passes at most one blocked row per
// removed edge / ray before succeeding.
std::int64_t scan_cap(const CardinalMazeSpec& m) {
  return static_cast<std::int64_t>(m.removed_h.size() + m.h_rays.size()) + 2;
}

std::int64_t lowest_present_h(const CardinalMazeSpec& m, std::int64_t x,
                              std::int64_t y_from) {
  std::int64_t cap = scan_cap(m);
  for (std::int64_t y = y_from; y <= y_from + cap; ++y) {
    if (hpres(m, x, y)) return y;
  }
  throw std::logic_error("lowest_present_h: no present edge found");
}

std::int64_t highest_present_h(const CardinalMazeSpec& m, std::int64_t x,
                               std::int64_t y_from) {
  std::int64_t cap = scan_cap(m);
  for (std::int64_t y = y_from; y >= y_from - cap; --y) {
    if (hpres(m, x, y)) return y;
  }
  throw std::logic_error("highest_present_h: no present edge found");
}

std::int64_t well_smallest_present_h(const CardinalMazeSpec& m, std::int64_t x) {
  WellOrder w = WellOrder::standard();
  std::int64_t cap = 2 * scan_cap(m) + 2;
  std::vector<std::int64_t> order{0};
  for (std::int64_t k = 1; k <= cap; ++k) {
    order.push_back(k);
    order.push_back(-k);
  }
  (void)w;
  for (std::int64_t y : order) {
    if (hpres(m, x, y)) return y;
  }
  throw std::logic_error("well_smallest_present_h: no present edge found");
}

// ---------------------------------------------------------------------------
// BFS utilities on a finite window
// ---------------------------------------------------------------------------

std::unordered_map<Coord, std::int64_t> bfs_dist(const CardinalMazeSpec& m,
                                                 Coord from, const Rect& win) {
  std::unordered_map<Coord, std::int64_t> dist;
  if (!win.contains(from)) return dist;
  dist[from] = 0;
  std::deque<Coord> q{from};
  constexpr Instruction dirs[] = {Instruction::E, Instruction::N, Instruction::S,
                                  Instruction::W};
  while (!q.empty()) {
    Coord v = q.front();
    q.pop_front();
    for (Instruction i : dirs) {
      if (!edge_present(m, edge_for_move(v, i))) continue;
      Coord d = delta(i);
      Coord n{v.x + d.x, v.y + d.y};
      if (!win.contains(n) || dist.count(n)) continue;
      dist[n] = dist[v] + 1;
      q.push_back(n);
    }
  }
  return dist;
}

// Greedy shortest path toward the BFS source, breaking ties E < N < S < W.
std::string walk_to_source(const CardinalMazeSpec& m,
                           const std::unordered_map<Coord, std::int64_t>& dist,
                           Coord from) {
  std::string out;
  auto it = dist.find(from);
  if (it == dist.end()) throw std::logic_error("walk_to_source: unreachable start");
  Coord v = from;
  std::int64_t d = it->second;
  constexpr Instruction dirs[] = {Instruction::E, Instruction::N, Instruction::S,
                                  Instruction::W};
  while (d > 0) {
    bool moved = false;
    for (Instruction i : dirs) {
      if (!edge_present(m, edge_for_move(v, i))) continue;
      Coord dd = delta(i);
      Coord n{v.x + dd.x, v.y + dd.y};
      auto jt = dist.find(n);
      if (jt != dist.end() && jt->second == d - 1) {
        out += to_char(i);
        v = n;
        d = jt->second;
        moved = true;
        break;
      }
    }
    if (!moved) throw std::logic_error("walk_to_source: stuck");
  }
  return out;
}

// ---------------------------------------------------------------------------
// One-side (west-oriented) feature analysis
// ---------------------------------------------------------------------------

struct SideInputs {
  const CardinalMazeSpec& maze;
  std::int64_t a, b, p;
  const std::map<std::int64_t, RowData>& rows;
  const std::map<std::int64_t, std::vector<std::int64_t>>& vcols;
  const std::vector<std::int64_t>& obstacle_lats;  // latitudes of obstacle passes
};

// Easternmost removed H base <= limit on the row, rays included; nullopt when
// the row has none.
std::optional<std::int64_t> easternmost_hne_upto(const RowData& r,
                                                 std::int64_t limit) {
  std::optional<std::int64_t> best;
  auto it = std::upper_bound(r.removed.begin(), r.removed.end(), limit);
  if (it != r.removed.begin()) best = *std::prev(it);
  if (r.west_bound) {
    std::int64_t v = std::min(*r.west_bound, limit);
    if (!best || v > *best) best = v;
  }
  if (r.east_bound && *r.east_bound <= limit) {
    if (!best || limit > *best) best = limit;
  }
  return best;
}

// Westernmost HNE on the row anywhere; nullopt impossible for rows present in
// the map unless they only carry the other side's data.
std::optional<std::int64_t> westernmost_hne(const RowData& r) {
  if (r.west_bound) return std::nullopt;  // unbounded to the west
  std::optional<std::int64_t> best;
  if (!r.removed.empty()) best = r.removed.front();
  if (r.east_bound && (!best || *r.east_bound < *best)) best = *r.east_bound;
  return best;
}

// The west strip portion of the row (H bases x <= a-1) is a path.
bool west_path_row(const RowData& r, std::int64_t a) {
  if (r.west_bound) return false;
  if (r.east_bound && *r.east_bound <= a - 1) return false;
  return r.removed.empty() || r.removed.front() > a - 1;
}

// Easternmost west pipe on the row: present H at x, removed H at x+1 <= a.
std::optional<Pipe> pipe_on_row(const CardinalMazeSpec& m, const RowData& r,
                                std::int64_t y, std::int64_t a) {
  for (auto it = r.removed.rbegin(); it != r.removed.rend(); ++it) {
    std::int64_t u = *it;
    if (u > a) continue;
    if (hpres(m, u - 1, y)) return Pipe{u - 1, y};
  }
  return std::nullopt;
}

SideFeatures analyze_side(const SideInputs& in) {
  SideFeatures f;
  const auto& m = in.maze;
  const std::int64_t a = in.a, b = in.b, p = in.p;

  // --- upper/lower passes between c_a and c_{a+1}, and the two chains -------
  auto segs_a1 = segments_from(in.vcols, a + 1);
  std::int64_t up0 = segs_a1.back().low.value_or(0);
  std::int64_t lo0 = segs_a1.front().high.value_or(0);
  if (!in.obstacle_lats.empty()) {
    up0 = std::max(up0, *std::max_element(in.obstacle_lats.begin(),
                                          in.obstacle_lats.end()) + 1);
    lo0 = std::min(lo0, *std::min_element(in.obstacle_lats.begin(),
                                          in.obstacle_lats.end()) - 1);
  }
  std::int64_t upper_row = lowest_present_h(m, a, up0);
  f.upper_pass = h_edge(a, upper_row);
  std::int64_t t = upper_row;
  f.ascending_chain.push_back(h_edge(a, t));
  for (std::int64_t col = a + 1; col <= b; ++col) {
    t = lowest_present_h(m, col, t);
    f.ascending_chain.push_back(h_edge(col, t));
  }
  f.upper_constant = t + p;

  std::int64_t lower_row = highest_present_h(m, a, lo0);
  f.lower_pass = h_edge(a, lower_row);
  std::int64_t tl = lower_row;
  f.descending_chain.push_back(h_edge(a, tl));
  for (std::int64_t col = a + 1; col <= b; ++col) {
    tl = highest_present_h(m, col, tl);
    f.descending_chain.push_back(h_edge(col, tl));
  }
  f.lower_constant = -tl + p;

  // --- bumps: rows meeting a finite obstacle column ------------------------
  std::set<std::int64_t> finite_rows;
  for (std::int64_t col = a + 1; col <= b; ++col) {
    for (const auto& s : segments_from(in.vcols, col)) {
      if (s.kind() != ColumnKind::Finite) continue;
      for (std::int64_t y = *s.low; y <= *s.high; ++y) finite_rows.insert(y);
    }
  }
  for (std::int64_t y : finite_rows) {
    auto it = in.rows.find(y);
    if (it == in.rows.end()) continue;
    auto u = easternmost_hne_upto(it->second, a);
    if (u) f.bumps.push_back(h_edge(*u, y));
  }

  // --- row classifications ---------------------------------------------------
  WellOrder std_order = WellOrder::standard();
  std::vector<std::int64_t> magical_rows, pipe_rows, almost_rows, empty_rows,
      empty_rows_bounded;
  for (const auto& [y, r] : in.rows) {
    bool any_hne = !r.removed.empty() || r.west_bound || r.east_bound;
    if (!any_hne) continue;
    if (west_path_row(r, a)) magical_rows.push_back(y);
    if (pipe_on_row(m, r, y, a)) pipe_rows.push_back(y);
    if (r.west_bound) {
      // x0: end of the maximal removed prefix (..., x0-1, x0 all HNEs),
      // extending the ray by any explicitly removed bases.
      std::int64_t x0 = *r.west_bound;
      while (x0 < a - 1 && row_hne(r, x0 + 1)) ++x0;
      if (x0 >= a - 1) {
        empty_rows.push_back(y);
        if (y > -3 * p) empty_rows_bounded.push_back(y);
      } else {
        bool rest_present = true;  // a present path from (x0+1,y) to (a,y)
        for (std::int64_t x = x0 + 1; x <= a - 1; ++x) {
          if (row_hne(r, x)) {
            rest_present = false;
            break;
          }
        }
        if (rest_present) almost_rows.push_back(y);
      }
    }
  }
  if (!magical_rows.empty()) {
    std::int64_t y = well_order_min(std_order, magical_rows);
    f.magical_row = y;
    auto w = westernmost_hne(in.rows.at(y));
    if (w) f.magical_cutoff = h_edge(*w, y);
  }
  if (!pipe_rows.empty()) {
    std::int64_t y = well_order_min(std_order, pipe_rows);
    f.special_pipe = pipe_on_row(m, in.rows.at(y), y, a);
  }
  if (!almost_rows.empty()) {
    std::int64_t y = well_order_min(std_order, almost_rows);
    f.special_almost_empty_row = y;
    // cutoff: the easternmost HNE of the row's removed prefix
    const RowData& r = in.rows.at(y);
    std::int64_t x0 = *r.west_bound;
    while (x0 < a - 1 && row_hne(r, x0 + 1)) ++x0;
    f.almost_empty_cutoff = h_edge(x0, y);
  }
  if (!empty_rows_bounded.empty())
    f.special_empty_row = well_order_min(std_order, empty_rows_bounded);
  if (!empty_rows.empty())
    f.natural_special_empty_row = well_order_min(std_order, empty_rows);

  // --- features tied to the pass rows ---------------------------------------
  auto row_at = [&](std::int64_t y) -> const RowData* {
    auto it = in.rows.find(y);
    return it == in.rows.end() ? nullptr : &it->second;
  };
  if (const RowData* r = row_at(upper_row)) {
    f.upper_pipe = pipe_on_row(m, *r, upper_row, a);
    auto c = easternmost_hne_upto(*r, a - 1);
    if (c) f.upper_cutoff = h_edge(*c, upper_row);
  }
  if (const RowData* r = row_at(lower_row)) {
    f.lower_pipe = pipe_on_row(m, *r, lower_row, a);
    auto c = easternmost_hne_upto(*r, a - 1);
    if (c) f.lower_cutoff = h_edge(*c, lower_row);
  }

  // --- special upper paired HNEs --------------------------------------------
  // Upper HNE on the upper pass row, lower HNE at the same longitude at
  // latitude <= upper_row - c_uw, both inside the west strip; pick the
  // uppermost, then easternmost, lower HNE.
  if (const RowData* ri = row_at(upper_row)) {
    std::int64_t jmax = upper_row - *f.upper_constant;
    for (auto it = in.rows.rbegin(); it != in.rows.rend(); ++it) {
      std::int64_t j = it->first;
      if (j > jmax) continue;
      if (j == upper_row) continue;
      const RowData& rj = it->second;
      std::int64_t best = kIntMin;
      for (std::int64_t u : ri->removed) {
        if (u <= a - 1 && row_hne(rj, u)) best = std::max(best, u);
      }
      for (std::int64_t u : rj.removed) {
        if (u <= a - 1 && row_hne(*ri, u)) best = std::max(best, u);
      }
      if (ri->west_bound && rj.west_bound) {
        best = std::max(best, std::min({*ri->west_bound, *rj.west_bound,
                                        a - 1}));
      }
      if (best != kIntMin) {
        f.special_upper_paired =
            PairedHnes{h_edge(best, upper_row), h_edge(best, j)};
        break;
      }
    }
  }

  // --- upper west HNE ---------------------------------------------------------
  // Lowermost, then westernmost, HNE strictly north-east of the upper vertex
  // of the uppermost, then westernmost, VNE.
  if (!m.removed_v.empty()) {
    std::int64_t vy = kIntMin, vx = 0;
    for (const auto& e : m.removed_v) {
      if (e.base.y > vy || (e.base.y == vy && e.base.x < vx)) {
        vy = e.base.y;
        vx = e.base.x;
      }
    }
    std::int64_t ref_y = vy + 1;  // upper endpoint of the VNE
    for (const auto& [y, r] : in.rows) {
      if (y <= ref_y) continue;
      std::int64_t best = kIntMax;
      auto it = std::upper_bound(r.removed.begin(), r.removed.end(), vx);
      if (it != r.removed.end()) best = *it;
      if (r.west_bound && *r.west_bound >= vx + 1) best = std::min(best, vx + 1);
      if (r.east_bound) best = std::min(best, std::max(*r.east_bound, vx + 1));
      if (best != kIntMax) {
        f.upper_hne = h_edge(best, y);
        break;
      }
    }
  }

  return f;
}

// Map west-oriented features computed on the EW-mirrored maze back to the
// original coordinates.
EdgeId unmirror_h(const EdgeId& e) { return h_edge(-e.base.x - 1, e.base.y); }
Pipe unmirror_pipe(const Pipe& p) { return Pipe{-p.x - 2, p.row}; }

SideFeatures unmirror_side(const SideFeatures& s) {
  SideFeatures f;
  auto me = [](const std::optional<EdgeId>& e) -> std::optional<EdgeId> {
    return e ? std::optional<EdgeId>(unmirror_h(*e)) : std::nullopt;
  };
  auto mp = [](const std::optional<Pipe>& p) -> std::optional<Pipe> {
    return p ? std::optional<Pipe>(unmirror_pipe(*p)) : std::nullopt;
  };
  for (const auto& e : s.bumps) f.bumps.push_back(unmirror_h(e));
  std::sort(f.bumps.begin(), f.bumps.end());
  f.magical_row = s.magical_row;
  f.magical_cutoff = me(s.magical_cutoff);
  f.special_pipe = mp(s.special_pipe);
  f.special_almost_empty_row = s.special_almost_empty_row;
  f.almost_empty_cutoff = me(s.almost_empty_cutoff);
  f.special_empty_row = s.special_empty_row;
  f.natural_special_empty_row = s.natural_special_empty_row;
  f.upper_pass = me(s.upper_pass);
  f.lower_pass = me(s.lower_pass);
  for (const auto& e : s.ascending_chain) f.ascending_chain.push_back(unmirror_h(e));
  for (const auto& e : s.descending_chain)
    f.descending_chain.push_back(unmirror_h(e));
  f.upper_constant = s.upper_constant;
  f.lower_constant = s.lower_constant;
  f.upper_pipe = mp(s.upper_pipe);
  f.lower_pipe = mp(s.lower_pipe);
  f.upper_cutoff = me(s.upper_cutoff);
  f.lower_cutoff = me(s.lower_cutoff);
  if (s.special_upper_paired)
    f.special_upper_paired = PairedHnes{unmirror_h(s.special_upper_paired->upper),
                                        unmirror_h(s.special_upper_paired->lower)};
  if (s.special_lower_paired)
    f.special_lower_paired = PairedHnes{unmirror_h(s.special_lower_paired->upper),
                                        unmirror_h(s.special_lower_paired->lower)};
  f.upper_hne = me(s.upper_hne);
  f.lower_hne = me(s.lower_hne);
  return f;
}

// ---------------------------------------------------------------------------
// Segment routes
// ---------------------------------------------------------------------------

struct SegNode {
  std::int64_t x = 0;
  ColumnSegment seg;

  // Deterministic ordering for lexicographically-least route selection.
  friend bool operator<(const SegNode& a, const SegNode& b) {
    auto low = [](const ColumnSegment& s) {
      return s.low ? *s.low : kIntMin;
    };
    auto high = [](const ColumnSegment& s) {
      return s.high ? *s.high : kIntMax;
    };
    if (a.x != b.x) return a.x < b.x;
    if (low(a.seg) != low(b.seg)) return low(a.seg) < low(b.seg);
    return high(a.seg) < high(b.seg);
  }
  friend bool operator==(const SegNode& a, const SegNode& b) {
    return a.x == b.x && a.seg == b.seg;
  }
};

// Is some H edge present between segment s of column x and segment t of
// column x+1?
bool segments_adjacent(const CardinalMazeSpec& m, std::int64_t x,
                       const ColumnSegment& s, const ColumnSegment& t) {
  bool low_open = !s.low && !t.low;
  bool high_open = !s.high && !t.high;
  if (low_open || high_open) return true;  // infinitely many rows, finite removals
  std::int64_t lo = std::max(s.low ? *s.low : kIntMin, t.low ? *t.low : kIntMin);
  std::int64_t hi =
      std::min(s.high ? *s.high : kIntMax, t.high ? *t.high : kIntMax);
  for (std::int64_t y = lo; y <= hi; ++y) {
    if (hpres(m, x, y)) return true;
  }
  return false;
}

struct RouteFinder {
  const CardinalMazeSpec& maze;
  std::int64_t a, b;
  const std::map<std::int64_t, std::vector<std::int64_t>>& vcols;

  SegNode dest_node() const {
    for (const auto& s : segments_from(vcols, maze.destination.x)) {
      if (s.contains(maze.destination.y)) return {maze.destination.x, s};
    }
    throw std::logic_error("destination segment not found");
  }

  std::vector<SegNode> finite_segs(std::int64_t x) const {
    std::vector<SegNode> out;
    if (x < a + 1 || x > b) return out;
    for (const auto& s : segments_from(vcols, x)) {
      if (s.kind() == ColumnKind::Finite) out.push_back({x, s});
    }
    return out;
  }

  // Neighbours of `n` among finite segments plus (optionally) the target.
  std::vector<SegNode> neighbours(const SegNode& n, const SegNode& target) const {
    std::vector<SegNode> out;
    for (std::int64_t dx : {-1, +1}) {
      std::int64_t nx = n.x + dx;
      for (const auto& c : finite_segs(nx)) {
        std::int64_t lo = std::min(n.x, nx);
        const ColumnSegment& left = dx == 1 ? n.seg : c.seg;
        const ColumnSegment& right = dx == 1 ? c.seg : n.seg;
        if (segments_adjacent(maze, lo, left, right) && !(c == target))
          out.push_back(c);
      }
      if (target.x == nx) {
        std::int64_t lo = std::min(n.x, nx);
        const ColumnSegment& left = dx == 1 ? n.seg : target.seg;
        const ColumnSegment& right = dx == 1 ? target.seg : n.seg;
        if (segments_adjacent(maze, lo, left, right)) out.push_back(target);
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  // Lexicographically least shortest chain from any of `starts` to `target`
  // through finite segments (target itself may be any kind).
  std::optional<std::vector<SegNode>> chain(std::vector<SegNode> starts,
                                            const SegNode& target) const {
    std::sort(starts.begin(), starts.end());
    starts.erase(std::unique(starts.begin(), starts.end()), starts.end());
    for (const auto& s : starts) {
      if (s == target) return std::vector<SegNode>{target};
    }
    // Reverse BFS distances from the target over finite segments.
    std::map<SegNode, std::int64_t> dist;
    dist[target] = 0;
    std::deque<SegNode> q{target};
    while (!q.empty()) {
      SegNode v = q.front();
      q.pop_front();
      for (std::int64_t dx : {-1, +1}) {
        for (const auto& c : finite_segs(v.x + dx)) {
          std::int64_t lo = std::min(v.x, c.x);
          const ColumnSegment& left = dx == 1 ? v.seg : c.seg;
          const ColumnSegment& right = dx == 1 ? c.seg : v.seg;
          if (!segments_adjacent(maze, lo, left, right)) continue;
          if (dist.count(c)) continue;
          dist[c] = dist[v] + 1;
          q.push_back(c);
        }
      }
    }
    std::optional<SegNode> cur;
    std::int64_t best = kIntMax;
    for (const auto& s : starts) {
      auto it = dist.find(s);
      if (it != dist.end() && (it->second < best || (it->second == best && (!cur || s < *cur)))) {
        best = it->second;
        cur = s;
      }
    }
    if (!cur) return std::nullopt;
    std::vector<SegNode> path{*cur};
    while (!(path.back() == target)) {
      std::int64_t d = dist.at(path.back());
      std::optional<SegNode> next;
      for (const auto& c : neighbours(path.back(), target)) {
        auto it = dist.find(c);
        if (it != dist.end() && it->second == d - 1 && (!next || c < *next))
          next = c;
      }
      if (!next) throw std::logic_error("route chain reconstruction failed");
      path.push_back(*next);
      if (path.size() > 4096) throw std::logic_error("route chain too long");
    }
    return path;
  }
};

std::vector<ColumnRef> to_refs(const std::vector<SegNode>& ns) {
  std::vector<ColumnRef> out;
  for (const auto& n : ns) out.push_back({n.x, n.seg});
  return out;
}

}  // namespace

std::vector<ColumnSegment> column_segments(const CardinalMazeSpec& maze,
                                           std::int64_t x) {
  return segments_from(build_vcols(maze), x);
}

CardinalMazeSpec mirror_ew_maze(const CardinalMazeSpec& m) {
  CardinalMazeSpec o;
  o.origin = {-m.origin.x, m.origin.y};
  o.destination = {-m.destination.x, m.destination.y};
  for (const auto& e : m.removed_h) o.removed_h.insert(h_edge(-e.base.x - 1, e.base.y));
  for (const auto& e : m.removed_v) o.removed_v.insert(v_edge(-e.base.x, e.base.y));
  for (const auto& r : m.h_rays) {
    RayRemoval nr;
    nr.row = r.row;
    if (r.side == RayRemoval::Side::WestRay) {
      nr.side = RayRemoval::Side::EastRay;
      nr.bound = -r.bound - 1;
    } else {
      nr.side = RayRemoval::Side::WestRay;
      nr.bound = -r.bound - 1;
    }
    o.h_rays.push_back(nr);
  }
  return o;
}

CardinalMazeSpec mirror_ns_maze(const CardinalMazeSpec& m) {
  CardinalMazeSpec o;
  o.origin = {m.origin.x, -m.origin.y};
  o.destination = {m.destination.x, -m.destination.y};
  for (const auto& e : m.removed_h) o.removed_h.insert(h_edge(e.base.x, -e.base.y));
  for (const auto& e : m.removed_v) o.removed_v.insert(v_edge(e.base.x, -e.base.y - 1));
  for (const auto& r : m.h_rays) o.h_rays.push_back({-r.row, r.side, r.bound});
  return o;
}

std::optional<Pipe> west_pipe_on_row(const CardinalMazeSpec& maze,
                                     std::int64_t row, std::int64_t a) {
  auto rows = build_rows(maze);
  auto it = rows.find(row);
  if (it == rows.end()) return std::nullopt;
  return pipe_on_row(maze, it->second, row, a);
}

CardinalMazeSpec bar_closure(const CardinalMazeSpec& maze) {
  std::vector<Coord> queries{maze.destination};
  for (const auto& e : maze.removed_v) {
    queries.push_back(e.base);
    queries.push_back({e.base.x, e.base.y + 1});
  }
  std::vector<bool> reach = in_component(maze, maze.origin, queries);
  if (!reach[0]) {
    throw std::invalid_argument(
        "bar_closure: origin and destination are disconnected");
  }
  CardinalMazeSpec out = maze;
  out.removed_v.clear();
  std::size_t k = 1;
  for (const auto& e : maze.removed_v) {
    bool lo = reach[k++];
    bool hi = reach[k++];
    // Restoring an edge with both endpoints outside the origin's component
    // leaves that component (as a subgraph) untouched; any other restoration
    // would add an edge or a vertex to it.
    if (lo || hi) out.removed_v.insert(e);
  }
  return out;
}

StructuralReport analyze(const CardinalMazeSpec& maze) {
  if (maze.removed_v.empty()) {
    throw std::invalid_argument("analyze: maze has no removed vertical edge");
  }
  StructuralReport r;
  r.maze = maze;

  auto rows = build_rows(maze);
  auto vcols = build_vcols(maze);

  std::int64_t x_min_v = vcols.begin()->first;
  std::int64_t x_max_v = vcols.rbegin()->first;
  r.a_border = x_min_v - 1;
  r.b_border = x_max_v;
  r.strip_min = std::min({x_min_v, maze.origin.x, maze.destination.x});
  r.strip_max = std::max({x_max_v, maze.origin.x, maze.destination.x});

  for (std::int64_t x = r.a_border + 1; x <= r.b_border; ++x) {
    r.column_classes[x] = segments_from(vcols, x);
  }

  // --- passes -----------------------------------------------------------------
  std::set<EdgeId> passes;
  for (std::int64_t x = r.strip_min - 1; x <= r.strip_max; ++x) {
    auto L = segments_from(vcols, x);
    auto R = segments_from(vcols, x + 1);
    bool l_inf = L.size() == 1 && L.front().kind() == ColumnKind::Infinite;
    bool r_inf = R.size() == 1 && R.front().kind() == ColumnKind::Infinite;
    if (l_inf && r_inf) {
      passes.insert(h_edge(x, well_smallest_present_h(maze, x)));
      continue;
    }
    // upper pair: both top segments are unbounded above
    std::int64_t up0 = std::max(L.back().low.value_or(kIntMin),
                                R.back().low.value_or(kIntMin));
    passes.insert(h_edge(x, lowest_present_h(maze, x, up0)));
    // lower pair
    std::int64_t lo0 = std::min(L.front().high.value_or(kIntMax),
                                R.front().high.value_or(kIntMax));
    passes.insert(h_edge(x, highest_present_h(maze, x, lo0)));
  }
  r.passes.assign(passes.begin(), passes.end());
  // The west/east pass latitude constraints compare against the obstacle
  // passes beyond the near border pair: a pass between c_{a+1} and c_{a+2}
  // does not constrain the west-side passes (and mirrored for the east).
  std::vector<std::int64_t> west_lats, east_lats;
  for (const auto& e : r.passes) {
    if (e.base.x >= r.a_border + 1 && e.base.x <= r.b_border - 1) {
      r.obstacle_passes.push_back(e);
      if (e.base.x >= r.a_border + 2) west_lats.push_back(e.base.y);
      if (e.base.x <= r.b_border - 2) east_lats.push_back(e.base.y);
    }
  }

  // --- primary rectangle and p -------------------------------------------------
  Rect prim{maze.origin.x, maze.origin.x, maze.origin.y, maze.origin.y};
  auto grow = [&prim](std::int64_t x, std::int64_t y) {
    prim.x_min = std::min(prim.x_min, x);
    prim.x_max = std::max(prim.x_max, x);
    prim.y_min = std::min(prim.y_min, y);
    prim.y_max = std::max(prim.y_max, y);
  };
  grow(maze.destination.x, maze.destination.y);
  for (const auto& e : r.passes) {
    grow(e.base.x, e.base.y);
    grow(e.base.x + 1, e.base.y);
  }
  for (const auto& e : maze.removed_v) {
    grow(e.base.x, e.base.y);
    grow(e.base.x, e.base.y + 1);
  }
  r.primary = prim;
  r.p = std::max({std::llabs(prim.x_min), std::llabs(prim.x_max),
                  std::llabs(prim.y_min), std::llabs(prim.y_max)}) + 1;

  // --- special vertices, shortest paths, L', l' --------------------------------
  std::set<std::int64_t> vne_lats;
  for (const auto& e : maze.removed_v) {
    vne_lats.insert(e.base.y);
    vne_lats.insert(e.base.y + 1);
  }
  std::vector<Coord> candidates;
  for (std::int64_t y : vne_lats) {
    if (hpres(maze, r.strip_min - 1, y)) candidates.push_back({r.strip_min - 1, y});
    for (std::int64_t x = r.strip_min; x <= r.strip_max; ++x)
      candidates.push_back({x, y});
    if (hpres(maze, r.strip_max, y)) candidates.push_back({r.strip_max + 1, y});
  }
  Rect win = prim;
  for (const auto& c : candidates) {
    win.x_min = std::min(win.x_min, c.x);
    win.x_max = std::max(win.x_max, c.x);
    win.y_min = std::min(win.y_min, c.y);
    win.y_max = std::max(win.y_max, c.y);
  }
  auto dist = bfs_dist(maze, maze.destination, win);
  for (const auto& c : candidates) {
    if (dist.count(c)) r.special_vertices.push_back(c);
  }
  std::sort(r.special_vertices.begin(), r.special_vertices.end(),
            [](const Coord& u, const Coord& v) {
              return u.y != v.y ? u.y < v.y : u.x < v.x;
            });

  std::vector<Alg> Ls;
  std::string prefix;
  constexpr std::size_t kPieceBudget = 1u << 20;
  for (const Coord& v : r.special_vertices) {
    r.shortest_lengths.push_back(dist.at(v));
    // Drift of the already-written pieces when started from v...
    Coord z = v;
    for (char c : prefix) z = step(maze, z, *instruction_from_char(c));
    // ...then a shortest path back to v followed by a shortest path to the
    // destination. The return path exists because the prefix trajectory
    // connects v and z; widen the search window until it is found.
    std::string piece;
    if (z != v) {
      Rect w2 = win;
      w2.x_min = std::min(w2.x_min, z.x);
      w2.x_max = std::max(w2.x_max, z.x);
      w2.y_min = std::min(w2.y_min, z.y);
      w2.y_max = std::max(w2.y_max, z.y);
      std::int64_t pad = 2;
      while (true) {
        Rect w3{w2.x_min - pad, w2.x_max + pad, w2.y_min - pad, w2.y_max + pad};
        auto dv = bfs_dist(maze, v, w3);
        if (dv.count(z)) {
          piece = walk_to_source(maze, dv, z);
          break;
        }
        if (pad > static_cast<std::int64_t>(prefix.size()) + 4) {
          throw std::logic_error("analyze: return path to special vertex not found");
        }
        pad *= 4;
      }
    }
    piece += walk_to_source(maze, dist, v);
    Ls.push_back(lit(piece));
    prefix += piece;
    if (prefix.size() > kPieceBudget) {
      throw ResourceError("analyze: special-vertex closing block too large");
    }
  }
  r.L_prime = Ls.empty() ? empty_alg() : seq(Ls);
  if (r.shortest_lengths.empty()) {
    r.l_prime = 1;
  } else {
    Big acc = r.shortest_lengths.front();
    for (std::size_t i = 1; i < r.shortest_lengths.size(); ++i) {
      acc = 2 * acc + r.shortest_lengths[i];
    }
    r.l_prime = acc + 1;
  }

  // --- side features -------------------------------------------------------------
  SideInputs west_in{maze, r.a_border, r.b_border, r.p, rows, vcols, west_lats};
  r.west = analyze_side(west_in);

  CardinalMazeSpec mm = mirror_ew_maze(maze);
  auto mrows = build_rows(mm);
  auto mvcols = build_vcols(mm);
  SideInputs east_in{mm, -r.b_border - 1, -r.a_border - 1, r.p, mrows, mvcols,
                     east_lats};
  r.east = unmirror_side(analyze_side(east_in));

  // --- h/l parameters --------------------------------------------------------------
  // Every column's top (bottom) segment is unbounded, so the uppermost
  // (lowermost) connecting H edge never exists on a finitely-described maze.
  for (std::int64_t mcol = r.a_border; mcol <= r.b_border; ++mcol) {
    r.h_params[mcol] = std::nullopt;
    r.l_params[mcol] = std::nullopt;
  }

  // --- routes ---------------------------------------------------------------------
  if (maze.destination.x >= r.a_border + 1 && maze.destination.x <= r.b_border) {
    RouteFinder rf{maze, r.a_border, r.b_border, vcols};
    SegNode dest_seg = rf.dest_node();
    if (dest_seg.seg.kind() != ColumnKind::UpperInfinite) {
      std::vector<SegNode> starts;
      ColumnSegment full{std::nullopt, std::nullopt};
      for (const auto& s : rf.finite_segs(r.a_border + 1)) {
        if (segments_adjacent(maze, r.a_border, full, s.seg)) starts.push_back(s);
      }
      if (dest_seg.x == r.a_border + 1 &&
          segments_adjacent(maze, r.a_border, full, dest_seg.seg)) {
        starts.push_back(dest_seg);
      }
      if (auto c = rf.chain(starts, dest_seg)) r.route_finite = to_refs(*c);
    }
    // Upper route: consecutive upper-infinite columns from a+1, then an
    // optional finite chain descending into column n+1.
    auto top_of = [&](std::int64_t x) {
      auto segs = segments_from(vcols, x);
      return SegNode{x, segs.back()};
    };
    for (std::int64_t n = r.a_border + 1; n <= r.b_border && !r.route_upper; ++n) {
      SegNode un = top_of(n);
      if (maze.destination.x == n && un.seg.contains(maze.destination.y)) {
        std::vector<ColumnRef> route;
        for (std::int64_t mcol = r.a_border + 1; mcol <= n; ++mcol) {
          route.push_back({mcol, segments_from(vcols, mcol).back()});
        }
        r.route_upper = route;
        r.route_upper_n = route.size();
        break;
      }
      if (n + 1 > r.b_border) break;
      RouteFinder rf2{maze, r.a_border, r.b_border, vcols};
      SegNode dest_seg2 = rf2.dest_node();
      if (dest_seg2.seg.kind() == ColumnKind::UpperInfinite) continue;
      std::vector<SegNode> tail;
      if (dest_seg2.x == n + 1 &&
          segments_adjacent(maze, n, un.seg, dest_seg2.seg)) {
        tail = {dest_seg2};
      } else {
        std::vector<SegNode> starts;
        for (const auto& s : rf2.finite_segs(n + 1)) {
          if (segments_adjacent(maze, n, un.seg, s.seg)) starts.push_back(s);
        }
        if (auto c = rf2.chain(starts, dest_seg2)) tail = *c;
      }
      if (!tail.empty()) {
        std::vector<ColumnRef> route;
        for (std::int64_t mcol = r.a_border + 1; mcol <= n; ++mcol) {
          route.push_back({mcol, segments_from(vcols, mcol).back()});
        }
        r.route_upper_n = route.size();
        for (const auto& sn : tail) route.push_back({sn.x, sn.seg});
        r.route_upper = route;
      }
    }
  }

  // --- q from the tertiary rectangle ------------------------------------------------
  Big feat_max = 0;
  auto grow_feat = [&feat_max](std::int64_t x, std::int64_t y) {
    Big ax = x < 0 ? Big(-x) : Big(x);
    Big ay = y < 0 ? Big(-y) : Big(y);
    if (ax > feat_max) feat_max = ax;
    if (ay > feat_max) feat_max = ay;
  };
  auto grow_edge = [&](const std::optional<EdgeId>& e) {
    if (!e) return;
    grow_feat(e->base.x, e->base.y);
    grow_feat(e->base.x + 1, e->base.y);
  };
  auto grow_pipe = [&](const std::optional<Pipe>& pp) {
    if (!pp) return;
    grow_feat(pp->x, pp->row);
    grow_feat(pp->x + 2, pp->row);
  };
  for (const SideFeatures* s : {&r.west, &r.east}) {
    for (const auto& e : s->bumps) grow_edge(e);
    grow_edge(s->magical_cutoff);
    grow_pipe(s->special_pipe);
    grow_edge(s->almost_empty_cutoff);
    grow_edge(s->upper_pass);
    grow_edge(s->lower_pass);
    for (const auto& e : s->ascending_chain) grow_edge(e);
    for (const auto& e : s->descending_chain) grow_edge(e);
    grow_pipe(s->upper_pipe);
    grow_pipe(s->lower_pipe);
    grow_edge(s->upper_cutoff);
    grow_edge(s->lower_cutoff);
    if (s->special_upper_paired) {
      grow_edge(s->special_upper_paired->upper);
      grow_edge(s->special_upper_paired->lower);
    }
    if (s->special_lower_paired) {
      grow_edge(s->special_lower_paired->upper);
      grow_edge(s->special_lower_paired->lower);
    }
    grow_edge(s->upper_hne);
    grow_edge(s->lower_hne);
    if (s->magical_row) grow_feat(0, *s->magical_row);
    if (s->special_almost_empty_row) grow_feat(0, *s->special_almost_empty_row);
    if (s->special_empty_row) grow_feat(0, *s->special_empty_row);
    if (s->natural_special_empty_row) grow_feat(0, *s->natural_special_empty_row);
  }
  for (const auto& e : r.passes) grow_edge(e);
  for (const auto& c : r.special_vertices) grow_feat(c.x, c.y);
  Big prim_max = std::max({std::llabs(prim.x_min), std::llabs(prim.x_max),
                           std::llabs(prim.y_min), std::llabs(prim.y_max)});
  Big secondary_max = prim_max + r.l_prime;
  Big tertiary_max = std::max(secondary_max, feat_max);
  r.q = 3 * tertiary_max + 1;

  return r;
}

// ---------------------------------------------------------------------------
// Class keys
// ---------------------------------------------------------------------------

namespace {

std::string opt_str(const OptLat& v) {
  return v ? std::to_string(*v) : std::string("inf");
}

}  // namespace

ClassKey class_key(const StructuralReport& report, const CardinalMazeSpec& maze) {
  ClassKey key;
  key.destination = maze.destination;
  const Big& q = report.q;
  auto inside = [&q](std::int64_t x, std::int64_t y) {
    Big ax = x < 0 ? Big(-x) : Big(x);
    Big ay = y < 0 ? Big(-y) : Big(y);
    return ax <= q && ay <= q;
  };
  // The encoding must depend only on which edges inside the window are
  // removed, not on how the description expresses that (explicit edge versus
  // ray coverage, or ray bounds clamped at the window edge). Removed H edges
  // are therefore merged into maximal per-row intervals of base longitudes,
  // clamped to the window.
  auto in_row = [&q](std::int64_t y) {
    Big ay = y < 0 ? Big(-y) : Big(y);
    return ay <= q;
  };
  std::map<std::int64_t, std::vector<std::pair<Big, Big>>> h_rows;
  for (const auto& e : maze.removed_h) {
    if (in_row(e.base.y) && Big(e.base.x) >= -q && Big(e.base.x) <= q - 1)
      h_rows[e.base.y].emplace_back(e.base.x, e.base.x);
  }
  for (const auto& ray : maze.h_rays) {
    if (!in_row(ray.row)) continue;
    const Big bound(ray.bound), lo = -q, hi = q - 1;
    if (ray.side == RayRemoval::Side::WestRay) {
      if (bound >= lo) h_rows[ray.row].emplace_back(lo, bound < hi ? bound : hi);
    } else {
      if (bound <= hi) h_rows[ray.row].emplace_back(bound > lo ? bound : lo, hi);
    }
  }
  std::ostringstream win;
  win << "H:";
  for (auto& [row, ivs] : h_rows) {
    std::sort(ivs.begin(), ivs.end());
    std::vector<std::pair<Big, Big>> merged;
    for (const auto& iv : ivs) {
      if (!merged.empty() && iv.first <= merged.back().second + 1) {
        merged.back().second = std::max(merged.back().second, iv.second);
      } else {
        merged.push_back(iv);
      }
    }
    win << row << ":";
    for (const auto& iv : merged) win << iv.first << ".." << iv.second << ",";
    win << ";";
  }
  win << "|V:";
  for (const auto& e : maze.removed_v) {
    if (inside(e.base.x, e.base.y) && inside(e.base.x, e.base.y + 1))
      win << e.base.x << "," << e.base.y << ";";
  }
  key.window_subgraph = win.str();

  std::ostringstream ps;
  ps << "q=" << report.q << ";p=" << report.p << ";lp=" << report.l_prime
     << ";cuw=" << opt_str(report.west.upper_constant)
     << ";clw=" << opt_str(report.west.lower_constant)
     << ";cue=" << opt_str(report.east.upper_constant)
     << ";cle=" << opt_str(report.east.lower_constant) << ";h=";
  for (const auto& [mcol, v] : report.h_params) ps << mcol << ":" << opt_str(v) << ",";
  ps << ";l=";
  for (const auto& [mcol, v] : report.l_params) ps << mcol << ":" << opt_str(v) << ",";
  ps << ";w1=" << opt_str(report.west.magical_row)
     << ";w2=" << opt_str(report.west.special_almost_empty_row)
     << ";w3=" << opt_str(report.west.special_empty_row)
     << ";w4=" << opt_str(report.west.natural_special_empty_row)
     << ";e1=" << opt_str(report.east.magical_row)
     << ";e2=" << opt_str(report.east.special_almost_empty_row)
     << ";e3=" << opt_str(report.east.special_empty_row)
     << ";e4=" << opt_str(report.east.natural_special_empty_row);
  key.params = ps.str();
  return key;
}

std::string serialize_key(const ClassKey& key) {
  std::ostringstream out;
  out << "dest: " << key.destination.x << " " << key.destination.y << "\n"
      << "window: " << key.window_subgraph << "\n"
      << "params: " << key.params << "\n";
  return out.str();
}

ClassKey deserialize_key(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  ClassKey key;
  int seen = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("dest: ", 0) == 0) {
      std::istringstream d(line.substr(6));
      if (!(d >> key.destination.x >> key.destination.y))
        throw ParseError("class key: bad dest line");
      ++seen;
    } else if (line.rfind("window: ", 0) == 0) {
      key.window_subgraph = line.substr(8);
      ++seen;
    } else if (line.rfind("params: ", 0) == 0) {
      key.params = line.substr(8);
      ++seen;
    } else {
      throw ParseError("class key: unknown line: " + line);
    }
  }
  if (seen != 3) throw ParseError("class key: missing fields");
  return key;
}

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

const char* case_tag_name(CaseTag tag) {
  switch (tag) {
    case CaseTag::NoPassEastBorder: return "part2-no-east-pass";
    case CaseTag::PassLowerInfiniteEast: return "part2-lower-east-pass";
    case CaseTag::P3_Case1_InfiniteColumnWest: return "case1-west";
    case CaseTag::P3_Case1_InfiniteColumnEast: return "case1-east";
    case CaseTag::P3_Case2_i: return "case2-i";
    case CaseTag::P3_Case2_ii: return "case2-ii";
    case CaseTag::P3_Case2_iii: return "case2-iii";
    case CaseTag::P3_Case2_iv: return "case2-iv";
    case CaseTag::P3_Case2_v: return "case2-v";
    case CaseTag::P3_Case2_vi: return "case2-vi";
    case CaseTag::P3_Case3_i: return "case3-i";
    case CaseTag::P3_Case3_ii: return "case3-ii";
    case CaseTag::P3_Case4_i: return "case4-i";
    case CaseTag::P3_Case4_ii: return "case4-ii";
    case CaseTag::P3_Case4_iii: return "case4-iii";
    case CaseTag::P3_Case4_iv: return "case4-iv";
    case CaseTag::P3_Case4_v: return "case4-v";
    case CaseTag::P3_Case4_vi: return "case4-vi";
    case CaseTag::P3_Case4_vii: return "case4-vii";
    case CaseTag::P3_Case4_viii: return "case4-viii";
    case CaseTag::P3_Case4_ix: return "case4-ix";
  }
  return "?";
}

CaseTag dispatch_part2(const StructuralReport& report) {
  for (const auto& e : report.passes) {
    if (e.base.x == report.b_border) return CaseTag::PassLowerInfiniteEast;
  }
  return CaseTag::NoPassEastBorder;
}

namespace {

CaseTag case2_sub(const StructuralReport& r) {
  const ColumnRef& r1 = r.route_finite->front();
  for (const auto& bump : r.west.bumps) {
    if (r1.seg.contains(bump.base.y)) return CaseTag::P3_Case2_i;
  }
  if (r.west.special_pipe) return CaseTag::P3_Case2_ii;
  if (r.west.magical_row) return CaseTag::P3_Case2_iii;
  if (r.west.special_almost_empty_row) return CaseTag::P3_Case2_iv;
  if (r.west.special_empty_row) return CaseTag::P3_Case2_v;
  return CaseTag::P3_Case2_vi;
}

CaseTag case4_sub(const StructuralReport& r) {
  if (r.west.magical_row || r.east.magical_row) return CaseTag::P3_Case4_i;
  if (r.west.special_almost_empty_row) return CaseTag::P3_Case4_ii;
  if (r.west.special_upper_paired) return CaseTag::P3_Case4_iii;
  if (r.west.upper_pipe) return CaseTag::P3_Case4_iv;
  if (r.west.upper_cutoff) return CaseTag::P3_Case4_v;
  if (r.west.upper_hne) return CaseTag::P3_Case4_vi;
  if (r.west.special_pipe) return CaseTag::P3_Case4_vii;
  if (r.west.natural_special_empty_row) return CaseTag::P3_Case4_viii;
  return CaseTag::P3_Case4_ix;
}

std::optional<std::int64_t> finite_h_param(const StructuralReport& r) {
  for (const auto& [mcol, v] : r.h_params) {
    if (v) return mcol;
  }
  return std::nullopt;
}

bool any_hl_finite(const StructuralReport& r) {
  for (const auto& [mcol, v] : r.h_params) {
    if (v) return true;
  }
  for (const auto& [mcol, v] : r.l_params) {
    if (v) return true;
  }
  return false;
}

}  // namespace

CaseResolution resolve_case(const StructuralReport& report) {
  // Case 1: the destination lies in the west or east strip (every strip
  // column is an infinite path).
  if (report.maze.destination.x <= report.a_border) {
    return {CaseTag::P3_Case1_InfiniteColumnWest, false, false, report};
  }
  if (report.maze.destination.x >= report.b_border + 1) {
    return {CaseTag::P3_Case1_InfiniteColumnEast, false, false, report};
  }

  // Identity orientation first: Case 2 (finite-column route from the west
  // strip), Case 3 (some h or l parameter finite; impossible for
  // finitely-described mazes, kept for completeness of the decision tree),
  // Case 4 (upper-infinite route). Only then the mirrored orientations.
  if (report.route_finite) {
    return {case2_sub(report), false, false, report};
  }
  if (any_hl_finite(report)) {
    return {finite_h_param(report) ? CaseTag::P3_Case3_i : CaseTag::P3_Case3_ii,
            false, false, report};
  }
  if (report.route_upper) {
    return {case4_sub(report), false, false, report};
  }
  StructuralReport ew = analyze(mirror_ew_maze(report.maze));
  if (ew.route_finite) {
    return {case2_sub(ew), true, false, std::move(ew)};
  }
  if (ew.route_upper) {
    return {case4_sub(ew), true, false, std::move(ew)};
  }
  StructuralReport ns = analyze(mirror_ns_maze(report.maze));
  if (ns.route_upper) {
    return {case4_sub(ns), false, true, std::move(ns)};
  }
  StructuralReport both = analyze(mirror_ns_maze(mirror_ew_maze(report.maze)));
  if (both.route_upper) {
    return {case4_sub(both), true, true, std::move(both)};
  }
  throw std::logic_error("resolve_case: no orientation admits a route");
}

CaseTag dispatch_case(const StructuralReport& report) {
  return resolve_case(report).tag;
}

// ---------------------------------------------------------------------------
// Report printing
// ---------------------------------------------------------------------------

namespace {

std::string edge_str(const EdgeId& e) {
  std::ostringstream o;
  o << "(" << e.base.x << "," << e.base.y << ")";
  return o.str();
}

std::string opt_edge_str(const std::optional<EdgeId>& e) {
  return e ? edge_str(*e) : std::string("-");
}

std::string pipe_str(const std::optional<Pipe>& p) {
  if (!p) return "-";
  std::ostringstream o;
  o << "(" << p->x << ".." << p->x + 2 << "," << p->row << ")";
  return o.str();
}

void print_side(std::ostringstream& out, const char* name, const SideFeatures& s) {
  out << name << ":\n";
  out << "  bumps:";
  for (const auto& e : s.bumps) out << " " << edge_str(e);
  out << "\n";
  out << "  magical_row: " << opt_str(s.magical_row)
      << "  cutoff: " << opt_edge_str(s.magical_cutoff) << "\n";
  out << "  special_pipe: " << pipe_str(s.special_pipe) << "\n";
  out << "  almost_empty_row: " << opt_str(s.special_almost_empty_row)
      << "  cutoff: " << opt_edge_str(s.almost_empty_cutoff) << "\n";
  out << "  empty_row: " << opt_str(s.special_empty_row)
      << "  natural_empty_row: " << opt_str(s.natural_special_empty_row) << "\n";
  out << "  upper_pass: " << opt_edge_str(s.upper_pass)
      << "  lower_pass: " << opt_edge_str(s.lower_pass) << "\n";
  out << "  upper_constant: " << opt_str(s.upper_constant)
      << "  lower_constant: " << opt_str(s.lower_constant) << "\n";
  out << "  ascending_chain:";
  for (const auto& e : s.ascending_chain) out << " " << edge_str(e);
  out << "\n  descending_chain:";
  for (const auto& e : s.descending_chain) out << " " << edge_str(e);
  out << "\n";
  out << "  upper_pipe: " << pipe_str(s.upper_pipe)
      << "  upper_cutoff: " << opt_edge_str(s.upper_cutoff) << "\n";
  out << "  lower_pipe: " << pipe_str(s.lower_pipe)
      << "  lower_cutoff: " << opt_edge_str(s.lower_cutoff) << "\n";
  if (s.special_upper_paired) {
    out << "  paired_hnes: upper " << edge_str(s.special_upper_paired->upper)
        << " lower " << edge_str(s.special_upper_paired->lower) << "\n";
  }
  out << "  upper_hne: " << opt_edge_str(s.upper_hne) << "\n";
}

}  // namespace

std::string print_report(const StructuralReport& r) {
  std::ostringstream out;
  out << "origin: (" << r.maze.origin.x << "," << r.maze.origin.y
      << ")  destination: (" << r.maze.destination.x << ","
      << r.maze.destination.y << ")\n";
  out << "strip: [" << r.strip_min << "," << r.strip_max << "]  a=" << r.a_border
      << "  b=" << r.b_border << "\n";
  out << "primary: x[" << r.primary.x_min << "," << r.primary.x_max << "] y["
      << r.primary.y_min << "," << r.primary.y_max << "]  p=" << r.p << "\n";
  out << "l_prime=" << r.l_prime << "  q=" << r.q << "\n";
  out << "passes:";
  for (const auto& e : r.passes) out << " " << edge_str(e);
  out << "\nobstacle_passes:";
  for (const auto& e : r.obstacle_passes) out << " " << edge_str(e);
  out << "\nspecial_vertices (" << r.special_vertices.size() << "):";
  for (const auto& c : r.special_vertices) out << " (" << c.x << "," << c.y << ")";
  out << "\n";
  print_side(out, "west", r.west);
  print_side(out, "east", r.east);
  auto route_str = [&out](const char* name,
                          const std::optional<std::vector<ColumnRef>>& route) {
    out << name << ":";
    if (!route) {
      out << " -\n";
      return;
    }
    for (const auto& cr : *route) {
      out << " c" << cr.x << "[";
      out << (cr.seg.low ? std::to_string(*cr.seg.low) : "-inf") << ",";
      out << (cr.seg.high ? std::to_string(*cr.seg.high) : "+inf") << "]";
    }
    out << "\n";
  };
  route_str("route_finite", r.route_finite);
  route_str("route_upper", r.route_upper);
  out << "part2: " << case_tag_name(dispatch_part2(r)) << "\n";
  try {
    out << "case: " << case_tag_name(dispatch_case(r)) << "\n";
  } catch (const std::logic_error& err) {
    out << "case: unresolved (" << err.what() << ")\n";
  }
  return out.str();
}

}  // namespace bm
