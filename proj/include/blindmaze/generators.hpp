#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "blindmaze/algebra.hpp"
#include "blindmaze/bigint.hpp"

namespace bm {

// Thrown when a literal construction would require materializing an
// unreasonable amount of structure (e.g. a step with 10^20 bricks). Never a
// wrong answer; callers fall back to reduced parameters.
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parameters of the special-block oscillating-advance family.
//   a: oscillation amplitude (>= 1)
//   e: repetition exponent (>= 1)
//   K: special block executed first in every round
//   n: optional promoted latitude — inserts the extra block N^n E S^n right
//      after K, matching the n-special well order.
struct SmeParams {
  std::int64_t a = 1;
  std::int64_t e = 1;
  Alg K = empty_alg();
  std::optional<std::int64_t> n;
};

// Oscillating eastward march: blocks E, NES, SEN, N^2ES^2, S^2EN^2, ...,
// S^aEN^a (one per latitude in the order 0,1,-1,2,-2,...), nested as
// (((E)^e NES)^e SEN)^e ... with outer exponent e. Each block carries a
// "locomotory:<block>" label.
Alg gen_me(std::int64_t a, std::int64_t e);
Alg gen_mw(std::int64_t a, std::int64_t e);  // E/W mirrored

// gen_me with the oscillation N^b S^{2b} N^b prefixed as the innermost block
// (labeled "special:osc").
Alg gen_ome(std::int64_t a, std::int64_t e, std::int64_t b);
Alg gen_omw(std::int64_t a, std::int64_t e, std::int64_t b);

// Special-block variant: (((((K)^e E)^e NES)^e ...)^e, K labeled "special:K".
// With p.n set, the block N^n E S^n follows K before E.
Alg gen_sme(const SmeParams& p);
Alg gen_smw(const SmeParams& p);  // skeleton mirrored, K kept as given
Alg gen_sme_n(std::int64_t a, std::int64_t e, Alg K, std::int64_t n);

// Probe loop (E^e W S^a E N^a)^e; a may be negative (S/N swapped as usual).
Alg gen_wpf(std::int64_t a, std::int64_t e);

// All-direction oscillation ((NESW)(SENW)(N^2ES^2W)(S^2EN^2W)...(S^aEN^aW))^e.
Alg gen_ame(std::int64_t a, std::int64_t e);

// One brick N^{A+2p} S^{2A+4p} N^{A+2p} N^k E S^k where A = prefix_len is the
// number of instructions written before this brick.
Alg gen_brick(const Big& k, const Big& prefix_len, std::int64_t p);

// The four concatenated steps U1 U2 U3 U4 built from bricks, every brick's
// prefix length threaded through a running accumulator starting at
// prefix_len. U1 spans k = -A-p .. A+p (A = prefix length at U1's start), so
// this raises ResourceError when prefix_len is too large to materialize.
Alg gen_steps_U(const Big& prefix_len, std::int64_t p);

// U repeated `rounds` times with running prefix lengths.
Alg gen_V(const Big& prefix_len, std::int64_t p, const Big& rounds);

// From a finite block L', build the eastern and western closing algorithms
//   L_E = L' N^eps ME(g, g),   L_W = L' N^eps MW(g, g)
// with eps chosen so L' N^eps has balanced N/S counts and g = |L' N^eps|
// (clamped to >= 1 for the degenerate empty L').
std::pair<Alg, Alg> assemble_L(const Alg& L_prime);

}  // namespace bm
