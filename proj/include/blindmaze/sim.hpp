#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "blindmaze/algebra.hpp"
#include "blindmaze/bigint.hpp"
#include "blindmaze/core.hpp"
#include "blindmaze/generators.hpp"  // ResourceError

namespace bm {

struct RunOutcome {
  Coord final_pos{0, 0};
  bool dest_visited = false;
  std::optional<Big> dest_first_step;  // steps executed at first visit (0 = start)
  Big steps_executed = 0;
  bool truncated = false;
};

// A first crossing between two watched adjacent columns, with the label
// context active when it happened.
struct CrossingEvent {
  std::int64_t from_col = 0;
  std::int64_t to_col = 0;  // |from_col - to_col| == 1
  Big at_step = 0;          // 1-based index of the instruction that moved
  std::string context;      // '/'-joined label path
};

std::string format_event(const CrossingEvent& e);

struct SimLimits {
  // Bound on compressed-engine work units (body evaluations + jumps).
  std::uint64_t work_budget = 50'000'000;
  // Bound on memo-table entries across all nodes.
  std::size_t memo_capacity = 4'000'000;
};

inline const Big kDefaultStepBudget = Big(10'000'000);

// Naive streaming interpreter; stops early with truncated=true when the
// budget is exhausted.
RunOutcome run(const CardinalMazeSpec& maze, Coord start, const Alg& a,
               const std::optional<Big>& step_budget = kDefaultStepBudget);

// Semantically identical to run with unlimited budget. Powers execute via
// per-node memoized position maps with cycle detection, plus exact
// translation jumps through regions the maze description cannot influence.
// Raises ResourceError (never a wrong answer) on memo/work/coordinate limits.
RunOutcome run_compressed(const CardinalMazeSpec& maze, Coord start, const Alg& a,
                          const SimLimits& limits = {});

// Watching longitude x means the boundary between columns x and x+1. Emits
// the first crossing in each direction per watched boundary with its full
// label context; subtrees that provably cannot produce an unrecorded first
// crossing run through the compressed engine.
std::pair<RunOutcome, std::vector<CrossingEvent>> run_traced(
    const CardinalMazeSpec& maze, Coord start, const Alg& a,
    const std::set<std::int64_t>& watch_cols, const SimLimits& limits = {});

}  // namespace bm
