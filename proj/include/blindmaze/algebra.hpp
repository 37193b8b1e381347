#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "blindmaze/bigint.hpp"
#include "blindmaze/core.hpp"

namespace bm {

// ---------------------------------------------------------------------------
// Algorithm AST
// ---------------------------------------------------------------------------

struct Algorithm;
using Alg = std::shared_ptr<const Algorithm>;

// Immutable instruction-sequence AST. Powers are kept symbolic with
// arbitrary-precision exponents; nothing here ever materializes the stream.
// Labels are execution-context annotations with no run-time semantics.
struct Algorithm {
  enum class Kind : std::uint8_t { Prim, Seq, Pow, Labeled };

  Kind kind = Kind::Seq;
  Instruction prim = Instruction::N;  // Prim
  std::vector<Alg> children;          // Seq
  Alg body;                           // Pow, Labeled
  Big exp;                            // Pow, >= 0
  std::string tag;                    // Labeled

  // Cached aggregates, filled at construction (cheap: children are done).
  Big length;
  std::array<Big, 4> counts;  // indexed by Instruction
};

// Builders. pow_of simplifies exp==0 to the empty sequence and exp==1 to the
// body; prim_pow accepts negative k as the inverse instruction repeated -k
// times (the usual sign-dependent shorthand).
Alg prim(Instruction i);
Alg seq(std::vector<Alg> children);
Alg empty_alg();
Alg pow_of(Alg body, Big exp);
Alg prim_pow(Instruction i, const Big& k);
Alg labeled(std::string tag, Alg body);
// Convenience: literal like "NES" (primitives only, no parsing machinery).
Alg lit(const std::string& letters);
Alg concat(std::initializer_list<Alg> parts);

const Big& length(const Alg& a);
const Big& count(const Alg& a, Instruction i);

Alg mirror_ew(const Alg& a);
Alg mirror_ns(const Alg& a);

// The first n instructions of a, kept symbolic (powers are split, not
// expanded). Requires 0 <= n <= length(a).
Alg take_prefix(const Alg& a, const Big& n);

// Deep structural equality (labels and exponents included).
bool structurally_equal(const Alg& a, const Alg& b);

// ---------------------------------------------------------------------------
// Streaming
// ---------------------------------------------------------------------------

// Lazy left-to-right cursor over an Algorithm's instruction stream. Advancing
// length(A) times exhausts A exactly. context_tags() lists the Labeled tags
// enclosing the instruction most recently produced, outermost first.
class StreamCursor {
 public:
  explicit StreamCursor(Alg a);

  // Produces the next instruction, or nullopt when exhausted.
  std::optional<Instruction> next();

  const Big& position() const { return position_; }  // instructions produced
  std::vector<std::string> context_tags() const;
  // Tags joined with '/' (empty string when unlabeled).
  std::string context_path() const;

 private:
  struct Frame {
    const Algorithm* node;
    std::size_t child = 0;  // Seq
    Big iter = 0;           // Pow
  };
  void descend(const Algorithm* node);
  void advance_after_emit();

  Alg root_;
  std::vector<Frame> stack_;
  Big position_ = 0;
  bool exhausted_ = false;
};

// Materializes the first `limit` instructions (throws if length exceeds it
// and require_complete is set).
std::string expand_to_string(const Alg& a, std::size_t limit,
                             bool require_complete = true);

// ---------------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------------

// Grammar: juxtaposition is concatenation; `X^k` binds to the preceding atom
// or parenthesized group (k may be negative only on a primitive, meaning the
// inverse instruction); exponents may be brace-wrapped (`N^{12}`); whitespace
// insignificant. Macro calls ME/MW/OME/OMW/SME/SMW/WPF/AME with integer
// arguments are accepted; SME/SMW take their special block as a parenthesized
// algorithm third argument and an optional integer fourth argument.
Alg parse_algorithm(const std::string& text);

// Canonical printer: minimal parentheses, positive exponents, labels dropped.
std::string print_algorithm(const Alg& a);

}  // namespace bm
