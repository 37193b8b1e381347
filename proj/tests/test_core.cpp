#include <random>

#include "blindmaze/core.hpp"
#include "doctest.h"

using namespace bm;

namespace {

// Independent flood-fill used as a reachability oracle: iterates over the
// window marking neighbours until a fixed point, no queue involved.
std::set<Coord> flood_fill_oracle(const CardinalMazeSpec& maze, Coord from,
                                  const Rect& w) {
  std::set<Coord> seen;
  if (!w.contains(from)) return seen;
  seen.insert(from);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::int64_t x = w.x_min; x <= w.x_max; ++x) {
      for (std::int64_t y = w.y_min; y <= w.y_max; ++y) {
        Coord c{x, y};
        if (seen.count(c)) continue;
        for (Instruction i : {Instruction::N, Instruction::S, Instruction::E,
                              Instruction::W}) {
          Coord d = delta(i);
          Coord nb{x + d.x, y + d.y};
          if (!w.contains(nb) || !seen.count(nb)) continue;
          // The edge between nb and c is the edge for moving i from c... use
          // the reverse move from the neighbour for symmetry.
          if (edge_present(maze, edge_for_move(nb, inverse(i)))) {
            seen.insert(c);
            changed = true;
            break;
          }
        }
      }
    }
  }
  return seen;
}

CardinalMazeSpec random_spec(std::mt19937_64& rng, std::int64_t radius,
                             double removal_prob) {
  CardinalMazeSpec m;
  std::bernoulli_distribution remove(removal_prob);
  for (std::int64_t x = -radius; x <= radius; ++x) {
    for (std::int64_t y = -radius; y <= radius; ++y) {
      if (remove(rng)) m.removed_h.insert(h_edge(x, y));
      if (remove(rng)) m.removed_v.insert(v_edge(x, y));
    }
  }
  return m;
}

}  // namespace

TEST_CASE("edge_present: empty spec has every edge") {
  CardinalMazeSpec m;
  CHECK(edge_present(m, h_edge(0, 0)));
  CHECK(edge_present(m, v_edge(-100, 55)));
}

TEST_CASE("edge_present: fixture blocks the move south from the origin") {
  CardinalMazeSpec m = load_maze_file(std::string(FIXTURES_DIR) + "/fig0.maze");
  CHECK_FALSE(edge_present(m, edge_for_move({0, 0}, Instruction::S)));
  CHECK(step(m, {0, 0}, Instruction::S) == Coord{0, 0});
  CHECK(step(m, {0, 1}, Instruction::W) == Coord{-1, 1});
}

TEST_CASE("edge_present: west ray removes the half-row") {
  CardinalMazeSpec m;
  m.h_rays.push_back({2, RayRemoval::Side::WestRay, -3});
  CHECK_FALSE(edge_present(m, h_edge(-5, 2)));
  CHECK_FALSE(edge_present(m, h_edge(-3, 2)));
  CHECK(edge_present(m, h_edge(-2, 2)));
  CHECK(edge_present(m, h_edge(-5, 3)));

  CardinalMazeSpec e;
  e.h_rays.push_back({-1, RayRemoval::Side::EastRay, 4});
  CHECK_FALSE(edge_present(e, h_edge(4, -1)));
  CHECK_FALSE(edge_present(e, h_edge(9, -1)));
  CHECK(edge_present(e, h_edge(3, -1)));
}

TEST_CASE("edge_present is pure") {
  CardinalMazeSpec m;
  m.removed_h.insert(h_edge(1, 1));
  for (int i = 0; i < 5; ++i) CHECK_FALSE(edge_present(m, h_edge(1, 1)));
}

TEST_CASE("edge ids are canonical: the same edge from both endpoints") {
  // Moving E from (0,0) and W from (1,0) cross the same edge.
  CHECK(edge_for_move({0, 0}, Instruction::E) == edge_for_move({1, 0}, Instruction::W));
  CHECK(edge_for_move({0, 0}, Instruction::N) == edge_for_move({0, 1}, Instruction::S));
}

TEST_CASE("well order: standard prefix") {
  WellOrder w = WellOrder::standard();
  std::vector<std::int64_t> vals{-2, 2, -1, 1, 0};
  std::sort(vals.begin(), vals.end(),
            [&](auto a, auto b) { return well_order_cmp(w, a, b) < 0; });
  CHECK(vals == std::vector<std::int64_t>{0, 1, -1, 2, -2});
}

TEST_CASE("well order: n-special prefix") {
  WellOrder w = WellOrder::n_special(3);
  std::vector<std::int64_t> vals{-3, 4, -2, 2, -1, 1, 3, 0};
  std::sort(vals.begin(), vals.end(),
            [&](auto a, auto b) { return well_order_cmp(w, a, b) < 0; });
  CHECK(vals == std::vector<std::int64_t>{0, 3, 1, -1, 2, -2, 4, -3});
}

TEST_CASE("well order: shifted minimum") {
  WellOrder w = WellOrder::shifted_by(5);
  CHECK(well_order_min(w, {3, 4, 5, 6, 7}) == 5);
  CHECK(well_order_min(w, {3, 4, 6, 7}) == 6);  // 1+y comes before -1+y
}

TEST_CASE("well order: negative n-special behaves") {
  WellOrder w = WellOrder::n_special(-2);
  CHECK(well_order_min(w, {-2, 1, 2}) == -2);
  CHECK(well_order_cmp(w, -2, 1) < 0);
  CHECK(well_order_cmp(w, 1, -1) < 0);
  CHECK(well_order_cmp(w, -1, 2) < 0);
  // -2 was promoted, so 2 now directly precedes 3.
  CHECK(well_order_cmp(w, 2, -3) < 0);
}

TEST_CASE("reachable_set: empty spec fills the window") {
  CardinalMazeSpec m;
  Rect w{-1, 1, -1, 1};
  CHECK(reachable_set(m, {0, 0}, w).size() == 9);
}

TEST_CASE("reachable_set: fixture origin reaches the destination") {
  CardinalMazeSpec m = load_maze_file(std::string(FIXTURES_DIR) + "/fig0.maze");
  auto r = reachable_set(m, m.origin, default_window(m));
  CHECK(r.count(m.destination) == 1);
}

TEST_CASE("reachable_set agrees with an independent flood fill") {
  std::mt19937_64 rng(20260823);
  for (int trial = 0; trial < 30; ++trial) {
    CardinalMazeSpec m = random_spec(rng, 4, 0.3);
    Rect w{-5, 5, -5, 5};
    CHECK(reachable_set(m, {0, 0}, w) == flood_fill_oracle(m, {0, 0}, w));
  }
}

TEST_CASE("reachable_set stabilizes beyond the description box") {
  std::mt19937_64 rng(7);
  CardinalMazeSpec m = random_spec(rng, 3, 0.4);
  // Membership of described cells should not change once the window clears
  // the description's bounding box by 2.
  auto r1 = reachable_set(m, {0, 0}, Rect{-5, 5, -5, 5});
  auto r2 = reachable_set(m, {0, 0}, Rect{-8, 8, -8, 8});
  for (std::int64_t x = -3; x <= 3; ++x) {
    for (std::int64_t y = -3; y <= 3; ++y) {
      CHECK(r1.count({x, y}) == r2.count({x, y}));
    }
  }
}

TEST_CASE("maze file round-trip") {
  CardinalMazeSpec m;
  m.origin = {0, 0};
  m.destination = {3, -2};
  m.removed_h.insert(h_edge(-7, 2));
  m.removed_v.insert(v_edge(0, -1));
  m.h_rays.push_back({2, RayRemoval::Side::WestRay, -3});
  m.h_rays.push_back({-4, RayRemoval::Side::EastRay, 9});
  CHECK(parse_maze(print_maze(m)) == m);
}

TEST_CASE("maze file parser rejects malformed input") {
  CHECK_THROWS_AS(parse_maze("origin: [0, 0]"), ParseError);  // no destination
  CHECK_THROWS_AS(parse_maze("origin: [0,0]\ndestination: [1\n"), ParseError);
  CHECK_THROWS_AS(
      parse_maze("origin: [0,0]\ndestination: [1,1]\nbogus_key: []"), ParseError);
  CHECK_THROWS_AS(
      parse_maze("origin: [0,0]\ndestination: [1,1]\n"
                 "h_rays: [{row: 1, side: \"north\", bound: 0}]"),
      ParseError);
}

TEST_CASE("labeled digraph: proper colouring and stepping") {
  LabeledDigraphMaze m;
  m.vertex_count = 3;
  m.edges = {{0, 1, 0}, {1, 2, 0}, {1, 0, 1}};
  m.origin = 1;
  m.destination = 0;
  CHECK(m.properly_coloured());
  CHECK(m.step(0, 0) == 1);
  CHECK(m.step(0, 1) == 0);  // missing colour: stay put
  m.edges.push_back({1, 2, 1});
  CHECK_FALSE(m.properly_coloured());  // duplicate (1, colour 1)
}
