#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "blindmaze/algebra.hpp"
#include "blindmaze/bigint.hpp"
#include "blindmaze/core.hpp"

namespace bm {

// Latitude that may be absent; nullopt is the "infinity" sentinel for
// structural parameters (never encoded as a large number).
using OptLat = std::optional<std::int64_t>;

enum class ColumnKind : std::uint8_t { Finite, UpperInfinite, LowerInfinite, Infinite };

// One maximal vertical component of a column, delimited by the removed V
// edges of that column. Bounds are inclusive vertex latitudes.
struct ColumnSegment {
  OptLat low;   // nullopt: unbounded below
  OptLat high;  // nullopt: unbounded above

  ColumnKind kind() const {
    if (low && high) return ColumnKind::Finite;
    if (low) return ColumnKind::UpperInfinite;
    if (high) return ColumnKind::LowerInfinite;
    return ColumnKind::Infinite;
  }
  bool contains(std::int64_t y) const {
    return (!low || y >= *low) && (!high || y <= *high);
  }
  bool operator==(const ColumnSegment&) const = default;
};

// A column together with one of its segments.
struct ColumnRef {
  std::int64_t x = 0;
  ColumnSegment seg;
  bool operator==(const ColumnRef&) const = default;
};

// Three consecutive vertices (x,row),(x+1,row),(x+2,row): on the west side an
// HE at base (x,row) followed by an HNE at base (x+1,row); mirrored on the
// east side (HNE at base (x,row) followed by an HE at base (x+1,row)).
struct Pipe {
  std::int64_t x = 0;
  std::int64_t row = 0;
  bool operator==(const Pipe&) const = default;
};

struct PairedHnes {
  EdgeId upper, lower;  // same longitude; upper on the pass row
  bool operator==(const PairedHnes&) const = default;
};

// Per-side (west/east) structural features. Field names describe the west
// instance; the east instance holds the mirrored feature.
struct SideFeatures {
  std::vector<EdgeId> bumps;
  OptLat magical_row;  // w1 / e1
  std::optional<EdgeId> magical_cutoff;
  std::optional<Pipe> special_pipe;
  OptLat special_almost_empty_row;  // w2 / e2
  std::optional<EdgeId> almost_empty_cutoff;
  OptLat special_empty_row;          // w3 / e3
  OptLat natural_special_empty_row;  // w4 / e4
  std::optional<EdgeId> upper_pass, lower_pass;
  std::vector<EdgeId> ascending_chain, descending_chain;
  OptLat upper_constant, lower_constant;  // c_uw, c_lw / c_ue, c_le
  std::optional<Pipe> upper_pipe, lower_pipe;
  std::optional<EdgeId> upper_cutoff, lower_cutoff;
  std::optional<PairedHnes> special_upper_paired, special_lower_paired;
  std::optional<EdgeId> upper_hne, lower_hne;
};

struct StructuralReport {
  CardinalMazeSpec maze;  // the analyzed (bar-closed) maze

  std::int64_t a_border = 0;  // a: easternmost west-strip column
  std::int64_t b_border = 0;  // b: easternmost obstacle-strip column
  std::int64_t strip_min = 0, strip_max = 0;  // column range of the strip S

  // Segments per column for the obstacle strip (a+1..b), south to north.
  std::map<std::int64_t, std::vector<ColumnSegment>> column_classes;

  std::vector<EdgeId> passes;           // sorted, deduplicated
  std::vector<EdgeId> obstacle_passes;  // passes with both columns inside a+1..b

  Rect primary{0, 0, 0, 0};
  std::int64_t p = 1;

  std::vector<Coord> special_vertices;         // labels 1..s in listed order
  std::vector<std::int64_t> shortest_lengths;  // l_i
  Big l_prime = 1;
  Alg L_prime;
  Big q = 1;

  SideFeatures west, east;
  std::map<std::int64_t, OptLat> h_params, l_params;  // m -> h/l_(m,m+1)

  // Column route from the west strip to the destination's component through
  // finite columns only (R_1..R_k then R); absent when no such route exists.
  std::optional<std::vector<ColumnRef>> route_finite;
  // Column route R_{a+1}..R_n (upper infinite, consecutive from a+1) then
  // R_{n+1}..R_k (finite) then R; route_upper_n = number of upper-infinite
  // entries. Absent when no such route exists.
  std::optional<std::vector<ColumnRef>> route_upper;
  std::size_t route_upper_n = 0;
};

std::string print_report(const StructuralReport& r);

struct ClassKey {
  Coord destination{0, 0};
  std::string window_subgraph;  // canonical encoding of the +-q square subgraph
  std::string params;           // canonical encoding of the structural parameters

  bool operator==(const ClassKey&) const = default;
  bool operator<(const ClassKey& o) const {
    if (destination.x != o.destination.x) return destination.x < o.destination.x;
    if (destination.y != o.destination.y) return destination.y < o.destination.y;
    if (window_subgraph != o.window_subgraph) return window_subgraph < o.window_subgraph;
    return params < o.params;
  }
};

std::string serialize_key(const ClassKey& key);
ClassKey deserialize_key(const std::string& text);

enum class CaseTag {
  NoPassEastBorder,
  PassLowerInfiniteEast,
  P3_Case1_InfiniteColumnWest,
  P3_Case1_InfiniteColumnEast,
  P3_Case2_i,
  P3_Case2_ii,
  P3_Case2_iii,
  P3_Case2_iv,
  P3_Case2_v,
  P3_Case2_vi,
  P3_Case3_i,
  P3_Case3_ii,
  P3_Case4_i,
  P3_Case4_ii,
  P3_Case4_iii,
  P3_Case4_iv,
  P3_Case4_v,
  P3_Case4_vi,
  P3_Case4_vii,
  P3_Case4_viii,
  P3_Case4_ix,
};

const char* case_tag_name(CaseTag tag);

// Maximal vertical components of column x, south to north.
std::vector<ColumnSegment> column_segments(const CardinalMazeSpec& maze,
                                           std::int64_t x);

// Reflections of the maze (x -> -x, resp. y -> -y), origin and destination
// included.
CardinalMazeSpec mirror_ew_maze(const CardinalMazeSpec& maze);
CardinalMazeSpec mirror_ns_maze(const CardinalMazeSpec& maze);

// A case decision together with the reflections that normalize the maze into
// the orientation the decision was made in. `report` analyzes the transformed
// maze (apply flip_ew then flip_ns to the original).
struct CaseResolution {
  CaseTag tag = CaseTag::P3_Case4_ix;
  bool flip_ew = false;
  bool flip_ns = false;
  StructuralReport report;
};

CaseResolution resolve_case(const StructuralReport& report);

// Restores every removed V edge whose restoration leaves the origin's
// connected component unchanged. Throws std::invalid_argument when the origin
// and destination are disconnected.
CardinalMazeSpec bar_closure(const CardinalMazeSpec& maze);

// Full structural analysis. Precondition: bar-closed maze with at least one
// removed V edge.
StructuralReport analyze(const CardinalMazeSpec& maze);

// The easternmost west pipe on `row`, given the west border column a; the
// east-side query mirrors the maze first.
std::optional<Pipe> west_pipe_on_row(const CardinalMazeSpec& maze,
                                     std::int64_t row, std::int64_t a);

ClassKey class_key(const StructuralReport& report, const CardinalMazeSpec& maze);

// The reset-latitude split: is there a pass between the obstacle strip and
// the east strip?
CaseTag dispatch_part2(const StructuralReport& report);

// The finish-stage decision tree; total (P3_Case4_ix is the catch-all).
CaseTag dispatch_case(const StructuralReport& report);

}  // namespace bm
