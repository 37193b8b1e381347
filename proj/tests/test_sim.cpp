#include <random>

#include "blindmaze/sim.hpp"
#include "doctest.h"

using namespace bm;

namespace {

// Second, straight-line interpreter used as an oracle: expands the stream to
// a string and applies moves with its own edge-presence logic.
RunOutcome oracle_run(const CardinalMazeSpec& maze, Coord start, const Alg& a) {
  auto present = [&maze](Coord from, char dir) {
    std::int64_t bx = from.x, by = from.y;
    bool horizontal = dir == 'E' || dir == 'W';
    if (dir == 'W') bx -= 1;
    if (dir == 'S') by -= 1;
    if (horizontal) {
      if (maze.removed_h.count(h_edge(bx, by))) return false;
      for (const auto& ray : maze.h_rays) {
        if (ray.row != by) continue;
        if (ray.side == RayRemoval::Side::WestRay && bx <= ray.bound) return false;
        if (ray.side == RayRemoval::Side::EastRay && bx >= ray.bound) return false;
      }
      return true;
    }
    return maze.removed_v.count(v_edge(bx, by)) == 0;
  };
  RunOutcome out;
  out.final_pos = start;
  if (start == maze.destination) {
    out.dest_visited = true;
    out.dest_first_step = 0;
  }
  std::string s = expand_to_string(a, 8u << 20);
  for (char c : s) {
    if (present(out.final_pos, c)) {
      switch (c) {
        case 'N': out.final_pos.y += 1; break;
        case 'S': out.final_pos.y -= 1; break;
        case 'E': out.final_pos.x += 1; break;
        case 'W': out.final_pos.x -= 1; break;
      }
    }
    ++out.steps_executed;
    if (!out.dest_visited && out.final_pos == maze.destination) {
      out.dest_visited = true;
      out.dest_first_step = out.steps_executed;
    }
  }
  return out;
}

CardinalMazeSpec random_maze(std::mt19937_64& rng, std::int64_t radius,
                             double prob, bool remove_v = true) {
  CardinalMazeSpec m;
  std::bernoulli_distribution remove(prob);
  for (std::int64_t x = -radius; x <= radius; ++x) {
    for (std::int64_t y = -radius; y <= radius; ++y) {
      if (remove(rng)) m.removed_h.insert(h_edge(x, y));
      if (remove_v && remove(rng)) m.removed_v.insert(v_edge(x, y));
    }
  }
  m.destination = {radius / 2, -radius / 2};
  return m;
}

Alg random_alg(std::mt19937_64& rng, int depth = 0) {
  int pick = static_cast<int>(rng() % (depth >= 3 ? 2 : 4));
  switch (pick) {
    case 0: {
      const char* letters = "NSEW";
      return prim(*instruction_from_char(letters[rng() % 4]));
    }
    case 1: {
      std::string text;
      std::size_t len = 1 + rng() % 6;
      const char* letters = "NSEW";
      for (std::size_t i = 0; i < len; ++i) text += letters[rng() % 4];
      return lit(text);
    }
    case 2: {
      std::vector<Alg> kids;
      std::size_t n = 1 + rng() % 3;
      for (std::size_t i = 0; i < n; ++i) kids.push_back(random_alg(rng, depth + 1));
      return seq(std::move(kids));
    }
    default:
      return pow_of(random_alg(rng, depth + 1), Big(1 + rng() % 9));
  }
}

const std::string kFig0 = std::string(FIXTURES_DIR) + "/fig0.maze";

}  // namespace

TEST_CASE("step: fixture examples") {
  CardinalMazeSpec m = load_maze_file(kFig0);
  CHECK(step(m, {0, 0}, Instruction::S) == Coord{0, 0});
  CHECK(step(m, {0, 1}, Instruction::W) == Coord{-1, 1});
  CardinalMazeSpec empty;
  CHECK(step(empty, {0, 0}, Instruction::N) == Coord{0, 1});
}

TEST_CASE("run: fixture walk replays the exact position sequence") {
  CardinalMazeSpec m = load_maze_file(kFig0);
  Alg a = parse_algorithm("SNWWN");
  const std::vector<Coord> expected{{0, 0}, {0, 1}, {-1, 1}, {-1, 1}, {-1, 2}};
  Coord pos = m.origin;
  CHECK(pos == Coord{0, 0});
  StreamCursor c(a);
  std::size_t idx = 0;
  while (auto i = c.next()) {
    pos = step(m, pos, *i);
    REQUIRE(idx < expected.size());
    CHECK(pos == expected[idx]);
    ++idx;
  }
  CHECK(idx == expected.size());
  CHECK(run(m, m.origin, a).final_pos == Coord{-1, 2});
}

TEST_CASE("run: empty algorithm") {
  CardinalMazeSpec m;
  m.destination = {0, 0};
  RunOutcome at_dest = run(m, {0, 0}, empty_alg());
  CHECK(at_dest.dest_visited);
  CHECK(at_dest.dest_first_step == Big(0));
  RunOutcome away = run(m, {1, 0}, empty_alg());
  CHECK_FALSE(away.dest_visited);
  CHECK(away.final_pos == Coord{1, 0});
}

TEST_CASE("run: budget truncation") {
  CardinalMazeSpec m;
  m.destination = {100, 100};
  Alg a = pow_of(lit("EN"), Big(100));
  RunOutcome out = run(m, {0, 0}, a, Big(5));
  CHECK(out.truncated);
  CHECK(out.steps_executed == 5);
  CHECK(out.final_pos == Coord{3, 2});
  RunOutcome full = run(m, {0, 0}, a, Big(200));
  CHECK_FALSE(full.truncated);
}

TEST_CASE("run agrees with the straight-line oracle on random pairs") {
  std::mt19937_64 rng(20260823);
  for (int trial = 0; trial < 200; ++trial) {
    CardinalMazeSpec m = random_maze(rng, 5, 0.3);
    if (trial % 3 == 0) m.h_rays.push_back({static_cast<std::int64_t>(rng() % 7) - 3,
                                            RayRemoval::Side::WestRay,
                                            static_cast<std::int64_t>(rng() % 5) - 4});
    Alg a = random_alg(rng);
    if (length(a) > 10000) continue;
    Coord start{static_cast<std::int64_t>(rng() % 5) - 2,
                static_cast<std::int64_t>(rng() % 5) - 2};
    RunOutcome got = run(m, start, a, std::nullopt);
    RunOutcome want = oracle_run(m, start, a);
    CHECK(got.final_pos == want.final_pos);
    CHECK(got.dest_visited == want.dest_visited);
    CHECK(got.dest_first_step == want.dest_first_step);
    CHECK(got.steps_executed == want.steps_executed);
  }
}

TEST_CASE("run_compressed: period-1 cycle collapses a 10^100 power") {
  CardinalMazeSpec m;
  m.destination = {50, 50};
  Big huge(1);
  for (int i = 0; i < 100; ++i) huge *= 10;
  Alg a = pow_of(lit("NS"), huge);
  SimLimits tight;
  tight.work_budget = 100000;  // succeeds only because of cycle collapse
  RunOutcome out = run_compressed(m, {0, 0}, a, tight);
  CHECK(out.final_pos == Coord{0, 0});
  CHECK(out.steps_executed == 2 * huge);
  CHECK_FALSE(out.dest_visited);
}

TEST_CASE("run_compressed: eastward drift stopped by a wall") {
  CardinalMazeSpec m;
  for (std::int64_t y = -2; y <= 2; ++y) m.removed_h.insert(h_edge(5, y));
  m.destination = {5, 0};
  Alg a = pow_of(prim(Instruction::E), Big(1'000'000'000));
  RunOutcome out = run_compressed(m, {0, 0}, a);
  CHECK(out.final_pos == Coord{5, 0});
  CHECK(out.dest_visited);
  CHECK(out.dest_first_step == Big(5));
}

TEST_CASE("run_compressed: free drift lands exactly, destination seen mid-flight") {
  CardinalMazeSpec m;
  m.destination = {123456, 0};
  Alg a = pow_of(prim(Instruction::E), Big(1'000'000));
  RunOutcome out = run_compressed(m, {0, 0}, a);
  CHECK(out.final_pos == Coord{1'000'000, 0});
  CHECK(out.dest_visited);
  CHECK(out.dest_first_step == Big(123456));
}

TEST_CASE("run_compressed equals run on random instances") {
  std::mt19937_64 rng(424242);
  for (int trial = 0; trial < 120; ++trial) {
    CardinalMazeSpec m = random_maze(rng, 5, 0.3);
    Alg a = random_alg(rng);
    if (length(a) > 20000) continue;
    Coord start{0, 0};
    RunOutcome naive = run(m, start, a, std::nullopt);
    RunOutcome comp = run_compressed(m, start, a);
    CHECK(naive.final_pos == comp.final_pos);
    CHECK(naive.dest_visited == comp.dest_visited);
    CHECK(naive.dest_first_step == comp.dest_first_step);
  }
}

TEST_CASE("run_compressed equals run on oscillating-march mazes") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    CardinalMazeSpec m = random_maze(rng, 4, 0.25, /*remove_v=*/false);
    Alg a = gen_me(2, 3);
    RunOutcome naive = run(m, {0, 0}, a, std::nullopt);
    RunOutcome comp = run_compressed(m, {0, 0}, a);
    CHECK(naive.final_pos == comp.final_pos);
    CHECK(naive.dest_visited == comp.dest_visited);
    CHECK(naive.dest_first_step == comp.dest_first_step);
  }
}

TEST_CASE("run_compressed: nested powers with nominal length beyond 10^30") {
  CardinalMazeSpec m;
  // A 3x3 box around the start: every run cycles inside it.
  for (std::int64_t x = -2; x <= 2; ++x) {
    m.removed_v.insert(v_edge(x, 1));
    m.removed_v.insert(v_edge(x, -2));
  }
  for (std::int64_t y = -2; y <= 2; ++y) {
    m.removed_h.insert(h_edge(1, y));
    m.removed_h.insert(h_edge(-2, y));
  }
  m.destination = {1, 1};
  Alg inner = pow_of(lit("ENWS"), Big("100000000007"));
  Alg mid = pow_of(seq({inner, lit("NE")}), Big("100000000009"));
  Alg outer = pow_of(seq({mid, lit("SW")}), Big("100000000021"));
  CHECK(length(outer) > Big("1000000000000000000000000000000"));
  RunOutcome out = run_compressed(m, {0, 0}, outer);
  RunOutcome probe = run_compressed(m, {0, 0}, seq({inner, lit("NE")}));
  CHECK(probe.dest_visited);  // sanity: the box keeps the robot local
  CHECK(out.dest_visited);
  CHECK(out.final_pos.x <= 1);
  CHECK(out.final_pos.y <= 1);
}

TEST_CASE("run_compressed reports resource errors instead of wrong answers") {
  CardinalMazeSpec m;
  m.destination = {0, 1};
  // Unbounded drift east with an unreachable destination exhausts the
  // coordinate guard rather than looping forever.
  Big huge(1);
  for (int i = 0; i < 30; ++i) huge *= 10;
  m.removed_v.insert(v_edge(0, 0));  // make destination column non-trivial
  Alg a = pow_of(prim(Instruction::E), huge);
  CHECK_THROWS_AS(run_compressed(m, {0, 0}, a), ResourceError);
}

TEST_CASE("run_traced: empty watch set equals run_compressed") {
  CardinalMazeSpec m = load_maze_file(kFig0);
  Alg a = parse_algorithm("ME(2,2)");
  auto [out, events] = run_traced(m, m.origin, a, {});
  RunOutcome comp = run_compressed(m, m.origin, a);
  CHECK(events.empty());
  CHECK(out.final_pos == comp.final_pos);
  CHECK(out.dest_visited == comp.dest_visited);
  CHECK(out.dest_first_step == comp.dest_first_step);
}

TEST_CASE("run_traced: first crossings carry their label context") {
  CardinalMazeSpec m;  // free lattice
  m.destination = {100, 100};
  Alg a = seq({labeled("special:K", lit("NS")),
               labeled("locomotory:E", lit("E")),
               labeled("locomotory:SEN", lit("SEN"))});
  auto [out, events] = run_traced(m, {0, 0}, a, {0, 1});
  REQUIRE(events.size() == 2);
  CHECK(events[0].from_col == 0);
  CHECK(events[0].to_col == 1);
  CHECK(events[0].context == "locomotory:E");
  CHECK(events[0].at_step == Big(3));
  CHECK(events[1].from_col == 1);
  CHECK(events[1].to_col == 2);
  CHECK(events[1].context == "locomotory:SEN");
  CHECK(format_event(events[0]) == "step=3 from=0 to=1 ctx=locomotory:E");
  CHECK(out.final_pos == Coord{2, 0});
}

TEST_CASE("run_traced: records only the first crossing per direction") {
  CardinalMazeSpec m;
  m.destination = {100, 100};
  Alg a = pow_of(lit("EW"), Big(50));
  auto [out, events] = run_traced(m, {0, 0}, a, {0});
  CHECK(out.final_pos == Coord{0, 0});
  REQUIRE(events.size() == 2);
  CHECK(events[0].from_col == 0);
  CHECK(events[0].to_col == 1);
  CHECK(events[1].from_col == 1);
  CHECK(events[1].to_col == 0);
}

TEST_CASE("run_traced: compresses once crossings are exhausted") {
  CardinalMazeSpec m;
  m.destination = {100, 100};
  Big big_exp(40'000'000'000LL);
  Alg a = pow_of(lit("EWNS"), big_exp);  // naive would be 1.6e11 steps
  auto [out, events] = run_traced(m, {0, 0}, a, {0});
  CHECK(events.size() == 2);
  CHECK(out.final_pos == Coord{0, 0});
  CHECK(out.steps_executed == 4 * big_exp);
}

TEST_CASE("trace agrees with a naive labeled replay") {
  std::mt19937_64 rng(31337);
  for (int trial = 0; trial < 40; ++trial) {
    CardinalMazeSpec m = random_maze(rng, 4, 0.3);
    Alg a = labeled("t", random_alg(rng));
    if (length(a) > 5000) continue;
    std::set<std::int64_t> watch{-1, 0, 1};
    auto [out, events] = run_traced(m, {0, 0}, a, watch);
    // Naive replay with a cursor.
    StreamCursor c(a);
    Coord pos{0, 0};
    std::set<std::pair<std::int64_t, int>> seen;
    std::vector<CrossingEvent> expect;
    Big steps = 0;
    while (true) {
      std::string ctx = c.context_path();
      auto i = c.next();
      if (!i) break;
      Coord nxt = step(m, pos, *i);
      ++steps;
      if (nxt.x != pos.x) {
        std::int64_t b = std::min(pos.x, nxt.x);
        int dir = nxt.x > pos.x ? 1 : -1;
        if (watch.count(b) && seen.insert({b, dir}).second) {
          expect.push_back({pos.x, nxt.x, steps, ctx});
        }
      }
      pos = nxt;
    }
    REQUIRE(events.size() == expect.size());
    for (std::size_t k = 0; k < events.size(); ++k) {
      CHECK(events[k].from_col == expect[k].from_col);
      CHECK(events[k].to_col == expect[k].to_col);
      CHECK(events[k].at_step == expect[k].at_step);
      CHECK(events[k].context == expect[k].context);
    }
    CHECK(out.final_pos == pos);
  }
}

TEST_CASE("confinement: every visited cell is reachable from the start") {
  std::mt19937_64 rng(11);
  CardinalMazeSpec m = random_maze(rng, 4, 0.35);
  Alg a = gen_me(2, 2);
  auto reach = reachable_set(m, {0, 0}, Rect{-100, 100, -100, 100});
  Coord pos{0, 0};
  StreamCursor c(a);
  while (auto i = c.next()) {
    pos = step(m, pos, *i);
    CHECK(reach.count(pos) == 1);
  }
}
