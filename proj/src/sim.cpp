#include "blindmaze/sim.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <unordered_map>

namespace bm {

namespace {

constexpr std::int64_t kCoordGuard = std::int64_t(1) << 60;

// Inclusive box of visited positions.
struct BBox {
  std::int64_t x_min, x_max, y_min, y_max;

  static BBox point(Coord c) { return {c.x, c.x, c.y, c.y}; }
  void include(Coord c) {
    x_min = std::min(x_min, c.x);
    x_max = std::max(x_max, c.x);
    y_min = std::min(y_min, c.y);
    y_max = std::max(y_max, c.y);
  }
  void include(const BBox& o) {
    x_min = std::min(x_min, o.x_min);
    x_max = std::max(x_max, o.x_max);
    y_min = std::min(y_min, o.y_min);
    y_max = std::max(y_max, o.y_max);
  }
  BBox translated(std::int64_t dx, std::int64_t dy) const {
    return {x_min + dx, x_max + dx, y_min + dy, y_max + dy};
  }
  bool contains(Coord c) const {
    return c.x >= x_min && c.x <= x_max && c.y >= y_min && c.y <= y_max;
  }
};

// Geometry the maze description can influence: queried edges have an endpoint
// in the trajectory box, so tests use the box expanded by one cell.
struct Influence {
  std::optional<BBox> obstacle;  // hull of all removed-edge endpoints
  std::vector<RayRemoval> rays;
  Coord dest;
  // East of east_inv_x (resp. west of west_inv_x) the maze is invariant under
  // x-translation at fixed y: every finite removal and every ray bound lies
  // strictly on the other side, so a ray row is either fully removed or fully
  // present throughout the region.
  std::optional<std::int64_t> east_inv_x, west_inv_x;

  static Influence of(const CardinalMazeSpec& maze) {
    Influence inf;
    inf.rays = maze.h_rays;
    inf.dest = maze.destination;
    auto grow = [&inf](Coord c) {
      if (!inf.obstacle) {
        inf.obstacle = BBox::point(c);
      } else {
        inf.obstacle->include(c);
      }
    };
    for (const auto& e : maze.removed_h) {
      grow(e.base);
      grow({e.base.x + 1, e.base.y});
    }
    for (const auto& e : maze.removed_v) {
      grow(e.base);
      grow({e.base.x, e.base.y + 1});
    }
    if (inf.obstacle || !inf.rays.empty()) {
      std::int64_t e = std::numeric_limits<std::int64_t>::min();
      std::int64_t w = std::numeric_limits<std::int64_t>::max();
      if (inf.obstacle) {
        e = inf.obstacle->x_max + 2;
        w = inf.obstacle->x_min - 2;
      }
      for (const auto& ray : inf.rays) {
        if (ray.side == RayRemoval::Side::EastRay) {
          e = std::max(e, ray.bound + 1);
          w = std::min(w, ray.bound - 2);
        } else {
          e = std::max(e, ray.bound + 2);
          w = std::min(w, ray.bound - 1);
        }
      }
      inf.east_inv_x = e;
      inf.west_inv_x = w;
    }
    return inf;
  }

  // A box (with the implicit 1-cell query margin) whose x_min is at least
  // east_inv_x sees the same edges after any eastward x-translation; same
  // westward with x_max <= west_inv_x.
  bool east_invariant(const BBox& box) const {
    return east_inv_x && box.x_min >= *east_inv_x;
  }
  bool west_invariant(const BBox& box) const {
    return west_inv_x && box.x_max <= *west_inv_x;
  }

  // True when no removed edge can be adjacent to any position in `box`.
  bool clear_of(const BBox& box) const {
    BBox ex{box.x_min - 1, box.x_max + 1, box.y_min - 1, box.y_max + 1};
    if (obstacle && ex.x_min <= obstacle->x_max && ex.x_max >= obstacle->x_min &&
        ex.y_min <= obstacle->y_max && ex.y_max >= obstacle->y_min)
      return false;
    for (const auto& ray : rays) {
      if (ray.row < ex.y_min || ray.row > ex.y_max) continue;
      if (ray.side == RayRemoval::Side::WestRay && ex.x_min <= ray.bound + 1) return false;
      if (ray.side == RayRemoval::Side::EastRay && ex.x_max >= ray.bound - 1) return false;
    }
    return true;
  }
};

struct EvalResult {
  Coord end{0, 0};
  bool dest_visited = false;
  Big dest_offset = 0;  // steps into the node at first visit (>= 1)
  BBox box{0, 0, 0, 0};
  bool clean = false;  // influence-free and destination-free run
};

struct FreeResult {
  Coord delta{0, 0};  // end - entry
  BBox rel_box{0, 0, 0, 0};
};

// Minimal integer t in [0, horizon) at which the moving box (box translated
// by t*delta) meets an axis-aligned region; nullopt if never. Region bounds
// may be open (nullopt = unbounded on that side).
std::optional<Big> first_hit(const BBox& box, Coord delta,
                             std::optional<std::int64_t> rx_min,
                             std::optional<std::int64_t> rx_max,
                             std::optional<std::int64_t> ry_min,
                             std::optional<std::int64_t> ry_max,
                             const Big& horizon) {
  Big lo = 0;
  Big hi = horizon - 1;
  auto tighten = [&lo, &hi](std::int64_t b_lo, std::int64_t b_hi, std::int64_t d,
                            std::optional<std::int64_t> r_lo,
                            std::optional<std::int64_t> r_hi) {
    // Need overlap: b_lo + t*d <= r_hi and b_hi + t*d >= r_lo.
    auto ceil_div = [](const Big& num, const Big& den) {
      Big q = num / den;
      if ((num % den) != 0 && ((num > 0) == (den > 0))) ++q;
      return q;
    };
    auto floor_div = [](const Big& num, const Big& den) {
      Big q = num / den;
      if ((num % den) != 0 && ((num > 0) != (den > 0))) --q;
      return q;
    };
    if (d == 0) {
      if ((r_hi && Big(b_lo) > *r_hi) || (r_lo && Big(b_hi) < *r_lo)) hi = -1;
      return;
    }
    if (r_hi) {
      Big bound = Big(*r_hi) - b_lo;  // t*d <= bound
      if (d > 0) hi = std::min(hi, floor_div(bound, d));
      else lo = std::max(lo, ceil_div(bound, d));
    }
    if (r_lo) {
      Big bound = Big(*r_lo) - b_hi;  // t*d >= bound
      if (d > 0) lo = std::max(lo, ceil_div(bound, d));
      else hi = std::min(hi, floor_div(bound, d));
    }
  };
  tighten(box.x_min, box.x_max, delta.x, rx_min, rx_max);
  tighten(box.y_min, box.y_max, delta.y, ry_min, ry_max);
  if (lo > hi) return std::nullopt;
  return lo;
}

class Engine {
 public:
  Engine(const CardinalMazeSpec& maze, const SimLimits& limits)
      : maze_(maze), limits_(limits), influence_(Influence::of(maze)) {}

  EvalResult evaluate(const Algorithm* node, Coord pos) {
    spend(1);
    auto& memo = memo_[node];
    if (auto it = memo.by_pos.find(pos); it != memo.by_pos.end()) return it->second;
    if (memo.free) {
      BBox box = memo.free->rel_box.translated(pos.x, pos.y);
      if (influence_.clear_of(box) && !box.contains(influence_.dest)) {
        EvalResult r;
        r.end = {pos.x + memo.free->delta.x, pos.y + memo.free->delta.y};
        r.box = box;
        r.clean = true;
        return r;
      }
    }
    auto try_inv = [&](const std::optional<InvResult>& inv,
                       bool east) -> std::optional<EvalResult> {
      if (!inv || pos.y != inv->anchor_y) return std::nullopt;
      BBox box = inv->fr.rel_box.translated(pos.x, pos.y);
      bool ok = east ? influence_.east_invariant(box) : influence_.west_invariant(box);
      if (!ok || box.contains(influence_.dest)) return std::nullopt;
      EvalResult r;
      r.end = {pos.x + inv->fr.delta.x, pos.y + inv->fr.delta.y};
      r.box = box;
      return r;
    };
    if (auto r = try_inv(memo.east_inv, true)) return *r;
    if (auto r = try_inv(memo.west_inv, false)) return *r;
    EvalResult r = compute(node, pos);
    // Re-fetch: recursive evaluation may have rehashed the outer map.
    auto& memo_after = memo_[node];
    if (r.clean && !memo_after.free) {
      memo_after.free = FreeResult{{r.end.x - pos.x, r.end.y - pos.y},
                                   r.box.translated(-pos.x, -pos.y)};
    }
    if (!r.dest_visited) {
      FreeResult fr{{r.end.x - pos.x, r.end.y - pos.y},
                    r.box.translated(-pos.x, -pos.y)};
      if (!memo_after.east_inv && influence_.east_invariant(r.box))
        memo_after.east_inv = InvResult{fr, pos.y};
      if (!memo_after.west_inv && influence_.west_invariant(r.box))
        memo_after.west_inv = InvResult{fr, pos.y};
    }
    if (memo_entries_ >= limits_.memo_capacity)
      throw ResourceError("run_compressed: memo capacity exceeded");
    memo_after.by_pos.emplace(pos, r);
    ++memo_entries_;
    return r;
  }

 private:
  // A result valid for any x-translation inside one invariant region, at the
  // anchor latitude only (ray rows break y-translation symmetry).
  struct InvResult {
    FreeResult fr;
    std::int64_t anchor_y = 0;
  };
  struct NodeMemo {
    std::unordered_map<Coord, EvalResult> by_pos;
    std::optional<FreeResult> free;
    std::optional<InvResult> east_inv, west_inv;
  };

  void spend(std::uint64_t units) {
    if ((work_ += units) > limits_.work_budget)
      throw ResourceError("run_compressed: work budget exceeded");
  }

  static void guard(Coord c) {
    if (c.x > kCoordGuard || c.x < -kCoordGuard || c.y > kCoordGuard ||
        c.y < -kCoordGuard)
      throw ResourceError("run_compressed: coordinate range exceeded");
  }

  EvalResult compute(const Algorithm* node, Coord pos) {
    switch (node->kind) {
      case Algorithm::Kind::Prim: {
        EvalResult r;
        EdgeId edge = edge_for_move(pos, node->prim);
        Coord d = delta(node->prim);
        Coord target{pos.x + d.x, pos.y + d.y};
        guard(target);
        r.end = edge_present(maze_, edge) ? target : pos;
        r.box = BBox::point(pos);
        r.box.include(r.end);
        r.dest_visited = r.end == influence_.dest;
        r.dest_offset = 1;
        // The blocked-move query also touches `target`, covered by the
        // 1-cell expansion inside clear_of.
        r.clean = influence_.clear_of(r.box) && !r.dest_visited;
        return r;
      }
      case Algorithm::Kind::Labeled:
        return evaluate(node->body.get(), pos);
      case Algorithm::Kind::Seq: {
        EvalResult r;
        r.end = pos;
        r.box = BBox::point(pos);
        r.clean = true;
        Big steps = 0;
        for (const auto& child : node->children) {
          EvalResult c = evaluate(child.get(), r.end);
          if (!r.dest_visited && c.dest_visited) {
            r.dest_visited = true;
            r.dest_offset = steps + c.dest_offset;
          }
          steps += child->length;
          r.end = c.end;
          r.box.include(c.box);
          r.clean = r.clean && c.clean;
        }
        return r;
      }
      case Algorithm::Kind::Pow:
        return compute_pow(node, pos);
    }
    throw std::logic_error("unreachable algorithm kind");
  }

  EvalResult compute_pow(const Algorithm* node, Coord pos) {
    const Algorithm* body = node->body.get();
    const Big& e = node->exp;
    const Big& blen = body->length;
    EvalResult r;
    r.end = pos;
    r.box = BBox::point(pos);
    r.clean = true;
    std::unordered_map<Coord, Big> seen;
    bool skipped_cycle = false;
    Big k = 0;
    while (k < e) {
      spend(1);
      if (!skipped_cycle) {
        auto [it, inserted] = seen.try_emplace(r.end, k);
        if (!inserted) {
          // Periodic from here on: the same trajectory repeats, so skipping
          // whole cycles changes nothing observable.
          Big cycle = k - it->second;
          Big skip = ((e - k) / cycle) * cycle;
          k += skip;
          skipped_cycle = true;
          continue;
        }
      }
      const auto& memo = memo_[body];
      if (memo.free) {
        BBox box0 = memo.free->rel_box.translated(r.end.x, r.end.y);
        if (influence_.clear_of(box0) && !box0.contains(influence_.dest)) {
          Coord d = memo.free->delta;
          Big j;
          if (d.x == 0 && d.y == 0) {
            j = e - k;  // fixed point in free space
          } else {
            j = e - k;
            auto consider = [&](std::optional<Big> hit) {
              if (hit && *hit < j) j = *hit;
            };
            if (influence_.obstacle) {
              // clear_of expands the box by 1; mirror that margin here.
              consider(first_hit(box0, d, influence_.obstacle->x_min - 1,
                                 influence_.obstacle->x_max + 1,
                                 influence_.obstacle->y_min - 1,
                                 influence_.obstacle->y_max + 1, e - k));
            }
            for (const auto& ray : influence_.rays) {
              if (ray.side == RayRemoval::Side::WestRay) {
                consider(first_hit(box0, d, std::nullopt, ray.bound + 2,
                                   ray.row - 1, ray.row + 1, e - k));
              } else {
                consider(first_hit(box0, d, ray.bound - 2, std::nullopt,
                                   ray.row - 1, ray.row + 1, e - k));
              }
            }
            consider(first_hit(box0, d, influence_.dest.x, influence_.dest.x,
                               influence_.dest.y, influence_.dest.y, e - k));
          }
          if (j > 0) {
            // Jump j translation-identical iterations in one stroke.
            Big last = j - 1;
            Big ex = r.end.x + last * d.x;
            Big ey = r.end.y + last * d.y;
            if (ex > kCoordGuard || ex < -kCoordGuard || ey > kCoordGuard ||
                ey < -kCoordGuard)
              throw ResourceError("run_compressed: coordinate range exceeded");
            BBox box_last = memo.free->rel_box.translated(
                static_cast<std::int64_t>(ex), static_cast<std::int64_t>(ey));
            r.box.include(box0);
            r.box.include(box_last);
            r.end = {static_cast<std::int64_t>(ex + d.x),
                     static_cast<std::int64_t>(ey + d.y)};
            guard(r.end);
            k += j;
            if (j > 1) skipped_cycle = false, seen.clear();
            continue;
          }
        }
      }
      // Same jump inside an x-translation-invariant region: valid only at the
      // anchor latitude and for pure horizontal drift.
      auto inv_jump = [&](const std::optional<InvResult>& inv, bool east) -> bool {
        if (!inv || r.end.y != inv->anchor_y) return false;
        Coord d = inv->fr.delta;
        if (d.y != 0) return false;
        BBox box0 = inv->fr.rel_box.translated(r.end.x, r.end.y);
        bool ok = east ? influence_.east_invariant(box0)
                       : influence_.west_invariant(box0);
        if (!ok || box0.contains(influence_.dest)) return false;
        Big j = e - k;
        if (east && d.x < 0) {
          Big t_max = (Big(box0.x_min) - *influence_.east_inv_x) / Big(-d.x);
          Big cap = t_max + 1;
          if (cap < j) j = cap;
        }
        if (!east && d.x > 0) {
          Big t_max = (Big(*influence_.west_inv_x) - box0.x_max) / Big(d.x);
          Big cap = t_max + 1;
          if (cap < j) j = cap;
        }
        if (d.x != 0) {
          if (auto hit = first_hit(box0, d, influence_.dest.x, influence_.dest.x,
                                   influence_.dest.y, influence_.dest.y, j)) {
            if (*hit < j) j = *hit;
          }
        }
        if (j <= 0) return false;
        Big last = j - 1;
        Big ex = r.end.x + last * d.x;
        if (ex > kCoordGuard || ex < -kCoordGuard)
          throw ResourceError("run_compressed: coordinate range exceeded");
        r.box.include(box0);
        r.box.include(inv->fr.rel_box.translated(static_cast<std::int64_t>(ex),
                                                 r.end.y));
        r.end = {static_cast<std::int64_t>(ex + d.x), r.end.y};
        guard(r.end);
        r.clean = false;
        k += j;
        if (j > 1) skipped_cycle = false, seen.clear();
        return true;
      };
      if (inv_jump(memo.east_inv, true) || inv_jump(memo.west_inv, false)) continue;
      EvalResult c = evaluate(body, r.end);
      if (!r.dest_visited && c.dest_visited) {
        r.dest_visited = true;
        r.dest_offset = k * blen + c.dest_offset;
      }
      r.end = c.end;
      r.box.include(c.box);
      r.clean = r.clean && c.clean;
      ++k;
    }
    return r;
  }

  const CardinalMazeSpec& maze_;
  SimLimits limits_;
  Influence influence_;
  std::unordered_map<const Algorithm*, NodeMemo> memo_;
  std::uint64_t work_ = 0;
  std::size_t memo_entries_ = 0;
};

}  // namespace

std::string format_event(const CrossingEvent& e) {
  std::ostringstream out;
  out << "step=" << e.at_step << " from=" << e.from_col << " to=" << e.to_col
      << " ctx=" << e.context;
  return out.str();
}

RunOutcome run(const CardinalMazeSpec& maze, Coord start, const Alg& a,
               const std::optional<Big>& step_budget) {
  RunOutcome out;
  out.final_pos = start;
  if (start == maze.destination) {
    out.dest_visited = true;
    out.dest_first_step = 0;
  }
  StreamCursor cursor(a);
  while (true) {
    if (step_budget && out.steps_executed >= *step_budget) {
      out.truncated = cursor.next().has_value();
      return out;
    }
    auto i = cursor.next();
    if (!i) return out;
    out.final_pos = step(maze, out.final_pos, *i);
    ++out.steps_executed;
    if (!out.dest_visited && out.final_pos == maze.destination) {
      out.dest_visited = true;
      out.dest_first_step = out.steps_executed;
    }
  }
}

RunOutcome run_compressed(const CardinalMazeSpec& maze, Coord start, const Alg& a,
                          const SimLimits& limits) {
  Engine engine(maze, limits);
  EvalResult r = engine.evaluate(a.get(), start);
  RunOutcome out;
  out.final_pos = r.end;
  out.steps_executed = a->length;
  if (start == maze.destination) {
    out.dest_visited = true;
    out.dest_first_step = 0;
  } else if (r.dest_visited) {
    out.dest_visited = true;
    out.dest_first_step = r.dest_offset;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Traced execution
// ---------------------------------------------------------------------------

namespace {

class TracedRunner {
 public:
  TracedRunner(const CardinalMazeSpec& maze, const std::set<std::int64_t>& watch,
               const SimLimits& limits)
      : maze_(maze), watch_(watch), limits_(limits), engine_(maze, limits) {}

  std::pair<RunOutcome, std::vector<CrossingEvent>> run_alg(Coord start, const Alg& a) {
    outcome_.final_pos = start;
    if (start == maze_.destination) {
      outcome_.dest_visited = true;
      outcome_.dest_first_step = 0;
    }
    Coord end = walk(a, start);
    outcome_.final_pos = end;
    outcome_.steps_executed = steps_;
    return {outcome_, events_};
  }

 private:
  // A boundary x is pending at a position range when some direction of the
  // crossing x <-> x+1 is unrecorded and both columns are reachable inside
  // the subtree's longitude extent.
  bool compressible(const Alg& node, Coord pos) const {
    if (watch_.empty()) return true;
    const Big lo = Big(pos.x) - count(node, Instruction::W);
    const Big hi = Big(pos.x) + count(node, Instruction::E);
    for (std::int64_t b : watch_) {
      if (Big(b) < lo || Big(b) + 1 > hi) continue;
      if (!recorded_.count({b, +1}) || !recorded_.count({b, -1})) return false;
    }
    return true;
  }

  Coord compress(const Alg& node, Coord pos) {
    EvalResult r = engine_.evaluate(node.get(), pos);
    if (!outcome_.dest_visited && r.dest_visited) {
      outcome_.dest_visited = true;
      outcome_.dest_first_step = steps_ + r.dest_offset;
    }
    steps_ += node->length;
    return r.end;
  }

  Coord walk(const Alg& node, Coord pos) {
    if (compressible(node, pos)) return compress(node, pos);
    switch (node->kind) {
      case Algorithm::Kind::Prim: {
        Coord next = step(maze_, pos, node->prim);
        ++steps_;
        if (next.x != pos.x) note_crossing(pos.x, next.x);
        if (!outcome_.dest_visited && next == maze_.destination) {
          outcome_.dest_visited = true;
          outcome_.dest_first_step = steps_;
        }
        return next;
      }
      case Algorithm::Kind::Labeled: {
        labels_.push_back(node->tag);
        Coord out = walk(node->body, pos);
        labels_.pop_back();
        return out;
      }
      case Algorithm::Kind::Seq: {
        for (const auto& child : node->children) pos = walk(child, pos);
        return pos;
      }
      case Algorithm::Kind::Pow: {
        Big k = 0;
        while (k < node->exp) {
          if (compressible(node, pos)) {
            // Remaining iterations cannot produce a new first crossing.
            Alg rest = pow_of(node->body, node->exp - k);
            return compress(rest, pos);
          }
          pos = walk(node->body, pos);
          ++k;
        }
        return pos;
      }
    }
    throw std::logic_error("unreachable algorithm kind");
  }

  void note_crossing(std::int64_t from_x, std::int64_t to_x) {
    std::int64_t boundary = std::min(from_x, to_x);
    if (!watch_.count(boundary)) return;
    int dir = to_x > from_x ? +1 : -1;
    if (!recorded_.insert({boundary, dir}).second) return;
    CrossingEvent e;
    e.from_col = from_x;
    e.to_col = to_x;
    e.at_step = steps_;
    std::string ctx;
    for (const auto& tag : labels_) {
      if (!ctx.empty()) ctx += '/';
      ctx += tag;
    }
    e.context = ctx;
    events_.push_back(e);
  }

  const CardinalMazeSpec& maze_;
  std::set<std::int64_t> watch_;
  SimLimits limits_;
  Engine engine_;
  std::set<std::pair<std::int64_t, int>> recorded_;
  std::vector<std::string> labels_;
  std::vector<CrossingEvent> events_;
  RunOutcome outcome_;
  Big steps_ = 0;
};

}  // namespace

std::pair<RunOutcome, std::vector<CrossingEvent>> run_traced(
    const CardinalMazeSpec& maze, Coord start, const Alg& a,
    const std::set<std::int64_t>& watch_cols, const SimLimits& limits) {
  TracedRunner runner(maze, watch_cols, limits);
  return runner.run_alg(start, a);
}

}  // namespace bm
