#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "blindmaze/algebra.hpp"
#include "blindmaze/analyzer.hpp"
#include "blindmaze/bigint.hpp"
#include "blindmaze/core.hpp"
#include "blindmaze/generators.hpp"

namespace bm {

// Literal: every parameter is the worst-case value from the construction
// (lengths of the prefix, the class bound q, ...). These algorithms can be
// astronomically long; builders raise ResourceError instead of materializing
// unreasonable structure.
// Reduced: parameters are replaced by the smallest values that still satisfy
// each stage's preconditions for the concrete maze at hand (the robot's actual
// displacement instead of the prefix length, a window-sized bound instead of
// q). The resulting algorithms are desk-scale and simulation-checkable.
enum class SynthMode : std::uint8_t { Literal, Reduced };

// Everything one synthesis stage needs: the prefix already executed, the
// structural report of the (bar-closed, orientation-normalized) maze, and the
// derived quantities shared by all stage formulas.
struct SynthContext {
  Alg X = empty_alg();  // prefix already executed
  Big lambda = 0;       // Literal: length(X); Reduced: displacement bound after X
  StructuralReport report;
  SynthMode mode = SynthMode::Reduced;
  std::int64_t p = 1;
  Big q = 1;           // Literal: report.q; Reduced: window-sized substitute
  Alg L = empty_alg();     // eastern closing algorithm
  Alg L_W = empty_alg();   // western closing algorithm
  Big l = 0;               // length(L)
  std::int64_t k_low = 0;  // lowermost special vertex latitude
};

SynthContext make_context(const Alg& X, const StructuralReport& report,
                          SynthMode mode);

// Toy model (no vertical walls): A = A1 A2 A3 with A1 = S^{|X|_N - |X|_S},
// A2 = ME(a, e), A3 = OMW(a, w, b), where a = max{|XA1|_S, |XA1|_N, n},
// e = |XA1|_W + |x|, w = |XA1A2|_E + |x| + 1 and b = |y| for dest = (x, y).
// X.A solves every maze of the class C_{n,dest} after the prefix X.
Alg synth_toy(const Alg& X, std::int64_t n, Coord dest);

// Part I (rough positioning east): ME(λ+p, λ+p) N^{l+λ+4p} L S^{2(l+λ+4p)} L.
// Afterwards the robot is in the east strip or has visited the destination.
Alg synth_rpe(const SynthContext& ctx);
// Part I for vertical walls in non-consecutive columns: S_1 ... S_r with
// S_i = N^{λ_i+p+2l} L S^{μ_i+p+2l} ME(γ_i, 1), every running-length
// parameter at least the number of instructions written before it occurs.
Alg synth_rpe_general(const SynthContext& ctx);

// Part II (reset latitude west). Splits on whether a pass joins the obstacle
// strip to the east strip; afterwards the robot is in the west strip on the
// x-axis or has visited the destination.
Alg synth_rlw(const SynthContext& ctx);
// Part II for non-consecutive columns:
// S^{λ+p} OMW(2λ+2p, λ+p, 2λ+4p) N^{2λ+4p} L.
Alg synth_rlw_general(const SynthContext& ctx);

// Destination inside an infinite obstacle column, general setting: the brick
// tower V(X) followed by the closing runs,
// F = V(X) N^{|V(X)|+l+p} L S^{2|V(X)|+l+2p} L.
Alg synth_case1_bricks(const SynthContext& ctx);

// Part III: the per-case finishing algorithm F. ctx.X must be the full prefix
// (original X plus Parts I and II); tag must come from dispatch/resolution of
// ctx.report. Helper blocks (H', K, K1..K5) are constructed from the report
// and checked by simulation from their known starting points; a failed check
// throws std::logic_error rather than returning an unverified algorithm.
Alg synth_finish(const SynthContext& ctx, CaseTag tag);

// The full pipeline A = RPE . RLW . F (orientation-normalizing the maze
// first, and mirroring the result back). Mazes with no vertical wall fall
// back to the toy construction.
Alg synth_full(const Alg& X, const CardinalMazeSpec& maze,
               SynthMode mode = SynthMode::Reduced);

// Cover concatenation: B_1 B_2 ... with B_i synthesized against the prefix
// B_1...B_{i-1}; the result solves every listed representative. Throws
// ResourceError when the accumulated length exceeds length_budget.
Alg solve_cover(const std::vector<std::pair<ClassKey, CardinalMazeSpec>>& classes,
                SynthMode mode, const Big& length_budget);

// A finite maze: the spec restricted to a window; moves leaving the window
// are blocked.
struct WindowMaze {
  CardinalMazeSpec maze;
  Rect window;
};

// Sequential universal solver: per maze, append the BFS-shortest instruction
// path (tie-break E < N < S < W) from the tracked position to that maze's
// destination. Throws std::invalid_argument naming the first maze whose
// destination is unreachable.
Alg universal_solve(const std::vector<WindowMaze>& mazes);
// Same over finite labeled digraphs; colours must lie in {0,1,2,3} which are
// read as N,S,E,W (the Instruction encoding).
Alg universal_solve(const std::vector<LabeledDigraphMaze>& mazes);

// A path maze defeating the first n instructions of A: vertices v_0..v_{n+1},
// origin v_1, destination v_0, forward edge v_i -> v_{i+1} coloured by A's
// i-th instruction. Running A from v_1 walks away from v_0 forever.
LabeledDigraphMaze adversarial_path(const Alg& A, std::size_t n);

// Shortest prefix of A that still solves every listed maze (the maximum over
// the mazes of the first-visit step). Throws std::invalid_argument if A does
// not solve some maze.
Alg prefix_minimize(const Alg& A, const std::vector<CardinalMazeSpec>& mazes);
Alg prefix_minimize(const Alg& A, const std::vector<WindowMaze>& mazes);

}  // namespace bm
