#include "blindmaze/generators.hpp"

#include <limits>
#include <stdexcept>
#include <vector>

namespace bm {

namespace {

using I = Instruction;

// N^m E S^m for m >= 0, S^{-m} E N^{-m} for m < 0; m = 0 gives plain E.
Alg loco_block(std::int64_t m) {
  return seq({prim_pow(I::N, m), prim(I::E), prim_pow(I::S, m)});
}

Alg labeled_loco(std::int64_t m) {
  Alg block = loco_block(m);
  return labeled("locomotory:" + print_algorithm(block), block);
}

// Latitudes in the standard well order: 0, 1, -1, 2, -2, ..., a, -a.
std::vector<std::int64_t> standard_latitudes(std::int64_t a) {
  std::vector<std::int64_t> out{0};
  for (std::int64_t m = 1; m <= a; ++m) {
    out.push_back(m);
    out.push_back(-m);
  }
  return out;
}

void require_params(std::int64_t a, std::int64_t e, std::int64_t min_a = 1) {
  if (a < min_a || e < 1)
    throw std::invalid_argument("generator parameters out of range");
}

// Common nesting: blocks b0 b1 ... bk combined as ((((b0)^e b1)^e b2)^e ...)^e.
Alg nest_blocks(const std::vector<Alg>& blocks, std::int64_t e) {
  Alg acc = empty_alg();
  bool first = true;
  for (const auto& b : blocks) {
    if (first) {
      acc = b;
      first = false;
    } else {
      acc = seq({pow_of(acc, e), b});
    }
  }
  return pow_of(acc, e);
}

}  // namespace

Alg gen_me(std::int64_t a, std::int64_t e) {
  require_params(a, e);
  std::vector<Alg> blocks;
  for (std::int64_t m : standard_latitudes(a)) blocks.push_back(labeled_loco(m));
  return nest_blocks(blocks, e);
}

Alg gen_mw(std::int64_t a, std::int64_t e) { return mirror_ew(gen_me(a, e)); }

Alg gen_sme(const SmeParams& p) {
  require_params(p.a, p.e);
  std::vector<Alg> blocks;
  blocks.push_back(labeled("special:K", p.K ? p.K : empty_alg()));
  if (p.n) blocks.push_back(labeled_loco(*p.n));
  for (std::int64_t m : standard_latitudes(p.a)) blocks.push_back(labeled_loco(m));
  return nest_blocks(blocks, p.e);
}

Alg gen_smw(const SmeParams& p) {
  // Mirror the marching skeleton but execute the special block K verbatim.
  SmeParams flipped = p;
  flipped.K = mirror_ew(p.K ? p.K : empty_alg());
  return mirror_ew(gen_sme(flipped));
}

Alg gen_sme_n(std::int64_t a, std::int64_t e, Alg K, std::int64_t n) {
  SmeParams p;
  p.a = a;
  p.e = e;
  p.K = std::move(K);
  p.n = n;
  return gen_sme(p);
}

Alg gen_ome(std::int64_t a, std::int64_t e, std::int64_t b) {
  require_params(a, e);
  if (b < 0) throw std::invalid_argument("gen_ome: b must be >= 0");
  SmeParams p;
  p.a = a;
  p.e = e;
  Alg osc = seq({prim_pow(I::N, b), prim_pow(I::S, 2 * Big(b)), prim_pow(I::N, b)});
  p.K = b == 0 ? empty_alg() : labeled("special:osc", osc);
  return gen_sme(p);
}

Alg gen_omw(std::int64_t a, std::int64_t e, std::int64_t b) {
  return mirror_ew(gen_ome(a, e, b));
}

Alg gen_wpf(std::int64_t a, std::int64_t e) {
  // Signed amplitude: a < 0 swaps the probe's S/N pair (the usual shorthand).
  require_params(a, e, /*min_a=*/std::numeric_limits<std::int64_t>::min());
  Alg body = seq({pow_of(prim(I::E), e), prim(I::W), prim_pow(I::S, a),
                  prim(I::E), prim_pow(I::N, a)});
  return pow_of(body, e);
}

Alg gen_ame(std::int64_t a, std::int64_t e) {
  require_params(a, e);
  std::vector<Alg> blocks;
  for (std::int64_t m = 1; m <= a; ++m) {
    for (std::int64_t s : {m, -m}) {
      Alg block = seq({loco_block(s), prim(I::W)});
      blocks.push_back(labeled("locomotory:" + print_algorithm(block), block));
    }
  }
  return pow_of(seq(std::move(blocks)), e);
}

Alg gen_brick(const Big& k, const Big& prefix_len, std::int64_t p) {
  if (p < 1) throw std::invalid_argument("gen_brick: p must be >= 1");
  Big up = prefix_len + 2 * p;
  return seq({prim_pow(I::N, up), prim_pow(I::S, 2 * up), prim_pow(I::N, up),
              prim_pow(I::N, k), prim(I::E), prim_pow(I::S, k)});
}

namespace {

constexpr std::int64_t kMaxBricks = 200000;

// Appends a brick with the given k, advancing the running prefix length.
void push_brick(std::vector<Alg>& out, Big& running, const Big& k, std::int64_t p) {
  Alg b = gen_brick(k, running, p);
  running += length(b);
  out.push_back(b);
}

}  // namespace

Alg gen_steps_U(const Big& prefix_len, std::int64_t p) {
  if (p < 1) throw std::invalid_argument("gen_steps_U: p must be >= 1");
  Big a0 = prefix_len;
  if (2 * a0 + 2 * p + 1 > kMaxBricks)
    throw ResourceError("gen_steps_U: step U1 would need too many bricks");
  std::vector<Alg> bricks;
  Big running = prefix_len;
  // U1: k sweeps -A-p .. A+p with A fixed at entry to U1.
  for (Big k = -a0 - p; k <= a0 + p; ++k) push_brick(bricks, running, k, p);
  // U2: k = 0 .. 2p.
  for (std::int64_t k = 0; k <= 2 * p; ++k) push_brick(bricks, running, Big(k), p);
  // U3: 2p bricks, k = -(running A) - 2p + m for m = 0 .. 2p-1.
  for (std::int64_t m = 0; m < 2 * p; ++m)
    push_brick(bricks, running, -running - 2 * p + m, p);
  // U4: 2p bricks, k = (running A) + 2p - m for m = 0 .. 2p-1.
  for (std::int64_t m = 0; m < 2 * p; ++m)
    push_brick(bricks, running, running + 2 * p - m, p);
  return seq(std::move(bricks));
}

Alg gen_V(const Big& prefix_len, std::int64_t p, const Big& rounds) {
  if (rounds < 0) throw std::invalid_argument("gen_V: negative round count");
  if (rounds > 10000) throw ResourceError("gen_V: too many rounds to materialize");
  std::vector<Alg> parts;
  Big running = prefix_len;
  for (Big r = 0; r < rounds; ++r) {
    Alg u = gen_steps_U(running, p);
    running += length(u);
    parts.push_back(u);
  }
  return seq(std::move(parts));
}

std::pair<Alg, Alg> assemble_L(const Alg& L_prime) {
  Big eps = count(L_prime, I::S) - count(L_prime, I::N);
  Alg corrected = seq({L_prime, prim_pow(I::N, eps)});
  Big g = length(corrected);
  if (g > std::numeric_limits<std::int64_t>::max() / 4)
    throw ResourceError("assemble_L: correction block too long");
  std::int64_t a = g < 1 ? 1 : static_cast<std::int64_t>(g);
  Alg L_E = seq({corrected, gen_me(a, a)});
  Alg L_W = seq({corrected, gen_mw(a, a)});
  return {L_E, L_W};
}

}  // namespace bm
