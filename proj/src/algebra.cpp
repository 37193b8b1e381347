#include "blindmaze/algebra.hpp"

#include <cctype>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "blindmaze/generators.hpp"

namespace bm {

namespace {

std::size_t idx(Instruction i) { return static_cast<std::size_t>(i); }

std::shared_ptr<Algorithm> make_node(Algorithm::Kind kind) {
  auto node = std::make_shared<Algorithm>();
  node->kind = kind;
  node->length = 0;
  node->counts = {Big(0), Big(0), Big(0), Big(0)};
  return node;
}

}  // namespace

Alg prim(Instruction i) {
  auto node = make_node(Algorithm::Kind::Prim);
  node->prim = i;
  node->length = 1;
  node->counts[idx(i)] = 1;
  return node;
}

Alg seq(std::vector<Alg> children) {
  auto node = make_node(Algorithm::Kind::Seq);
  for (const auto& c : children) {
    if (!c) throw std::invalid_argument("seq: null child");
    if (c->length == 0) continue;  // drop empties
    node->length += c->length;
    for (std::size_t k = 0; k < 4; ++k) node->counts[k] += c->counts[k];
    node->children.push_back(c);
  }
  if (node->children.size() == 1) return node->children.front();
  return node;
}

Alg empty_alg() { return make_node(Algorithm::Kind::Seq); }

Alg pow_of(Alg body, Big exp) {
  if (!body) throw std::invalid_argument("pow_of: null body");
  if (exp < 0) throw std::invalid_argument("pow_of: negative exponent");
  if (exp == 0 || body->length == 0) return empty_alg();
  if (exp == 1) return body;
  auto node = make_node(Algorithm::Kind::Pow);
  node->body = body;
  node->exp = exp;
  node->length = body->length * exp;
  for (std::size_t k = 0; k < 4; ++k) node->counts[k] = body->counts[k] * exp;
  return node;
}

Alg prim_pow(Instruction i, const Big& k) {
  if (k < 0) return pow_of(prim(inverse(i)), -k);
  return pow_of(prim(i), k);
}

Alg labeled(std::string tag, Alg body) {
  if (!body) throw std::invalid_argument("labeled: null body");
  auto node = make_node(Algorithm::Kind::Labeled);
  node->tag = std::move(tag);
  node->body = body;
  node->length = body->length;
  node->counts = body->counts;
  return node;
}

Alg lit(const std::string& letters) {
  std::vector<Alg> parts;
  parts.reserve(letters.size());
  for (char c : letters) {
    auto i = instruction_from_char(c);
    if (!i) throw std::invalid_argument(std::string("lit: bad instruction '") + c + "'");
    parts.push_back(prim(*i));
  }
  return seq(std::move(parts));
}

Alg concat(std::initializer_list<Alg> parts) {
  return seq(std::vector<Alg>(parts));
}

const Big& length(const Alg& a) { return a->length; }

const Big& count(const Alg& a, Instruction i) { return a->counts[idx(i)]; }

Alg mirror_ew(const Alg& a) {
  switch (a->kind) {
    case Algorithm::Kind::Prim:
      if (a->prim == Instruction::E) return prim(Instruction::W);
      if (a->prim == Instruction::W) return prim(Instruction::E);
      return a;
    case Algorithm::Kind::Seq: {
      std::vector<Alg> kids;
      kids.reserve(a->children.size());
      for (const auto& c : a->children) kids.push_back(mirror_ew(c));
      return seq(std::move(kids));
    }
    case Algorithm::Kind::Pow:
      return pow_of(mirror_ew(a->body), a->exp);
    case Algorithm::Kind::Labeled:
      return labeled(a->tag, mirror_ew(a->body));
  }
  return a;
}

Alg mirror_ns(const Alg& a) {
  switch (a->kind) {
    case Algorithm::Kind::Prim:
      if (a->prim == Instruction::N) return prim(Instruction::S);
      if (a->prim == Instruction::S) return prim(Instruction::N);
      return a;
    case Algorithm::Kind::Seq: {
      std::vector<Alg> kids;
      kids.reserve(a->children.size());
      for (const auto& c : a->children) kids.push_back(mirror_ns(c));
      return seq(std::move(kids));
    }
    case Algorithm::Kind::Pow:
      return pow_of(mirror_ns(a->body), a->exp);
    case Algorithm::Kind::Labeled:
      return labeled(a->tag, mirror_ns(a->body));
  }
  return a;
}

Alg take_prefix(const Alg& a, const Big& n) {
  if (n < 0 || n > a->length) throw std::invalid_argument("take_prefix: n out of range");
  if (n == a->length) return a;
  if (n == 0) return empty_alg();
  switch (a->kind) {
    case Algorithm::Kind::Prim:
      return a;  // unreachable: length 1 handled by the == / == 0 cases
    case Algorithm::Kind::Seq: {
      std::vector<Alg> kids;
      Big left = n;
      for (const auto& c : a->children) {
        if (left == 0) break;
        if (c->length <= left) {
          kids.push_back(c);
          left -= c->length;
        } else {
          kids.push_back(take_prefix(c, left));
          left = 0;
        }
      }
      return seq(std::move(kids));
    }
    case Algorithm::Kind::Pow: {
      Big whole = n / a->body->length;
      Big rest = n % a->body->length;
      std::vector<Alg> kids;
      if (whole > 0) kids.push_back(pow_of(a->body, whole));
      if (rest > 0) kids.push_back(take_prefix(a->body, rest));
      return seq(std::move(kids));
    }
    case Algorithm::Kind::Labeled:
      return labeled(a->tag, take_prefix(a->body, n));
  }
  return a;
}

bool structurally_equal(const Alg& a, const Alg& b) {
  if (a.get() == b.get()) return true;
  if (a->kind != b->kind || a->length != b->length) return false;
  switch (a->kind) {
    case Algorithm::Kind::Prim:
      return a->prim == b->prim;
    case Algorithm::Kind::Seq: {
      if (a->children.size() != b->children.size()) return false;
      for (std::size_t i = 0; i < a->children.size(); ++i) {
        if (!structurally_equal(a->children[i], b->children[i])) return false;
      }
      return true;
    }
    case Algorithm::Kind::Pow:
      return a->exp == b->exp && structurally_equal(a->body, b->body);
    case Algorithm::Kind::Labeled:
      return a->tag == b->tag && structurally_equal(a->body, b->body);
  }
  return false;
}

// ---------------------------------------------------------------------------
// StreamCursor
// ---------------------------------------------------------------------------

StreamCursor::StreamCursor(Alg a) : root_(std::move(a)) {
  descend(root_.get());
}

void StreamCursor::descend(const Algorithm* node) {
  // Push frames until a primitive sits on top, skipping empty structure.
  while (true) {
    stack_.push_back(Frame{node});
    switch (node->kind) {
      case Algorithm::Kind::Prim:
        return;
      case Algorithm::Kind::Seq:
        if (node->children.empty()) {
          stack_.pop_back();
          advance_after_emit();
          return;
        }
        node = node->children.front().get();
        break;
      case Algorithm::Kind::Pow:
        if (node->exp == 0) {
          stack_.pop_back();
          advance_after_emit();
          return;
        }
        node = node->body.get();
        break;
      case Algorithm::Kind::Labeled:
        node = node->body.get();
        break;
    }
  }
}

void StreamCursor::advance_after_emit() {
  while (!stack_.empty()) {
    Frame& top = stack_.back();
    switch (top.node->kind) {
      case Algorithm::Kind::Prim:
      case Algorithm::Kind::Labeled:
        stack_.pop_back();
        continue;
      case Algorithm::Kind::Seq:
        if (++top.child < top.node->children.size()) {
          descend(top.node->children[top.child].get());
          return;
        }
        stack_.pop_back();
        continue;
      case Algorithm::Kind::Pow:
        if (++top.iter < top.node->exp) {
          descend(top.node->body.get());
          return;
        }
        stack_.pop_back();
        continue;
    }
  }
  exhausted_ = true;
}

std::optional<Instruction> StreamCursor::next() {
  if (exhausted_ || stack_.empty()) {
    exhausted_ = true;
    return std::nullopt;
  }
  const Algorithm* top = stack_.back().node;
  if (top->kind != Algorithm::Kind::Prim) {
    // Construction/advance always leaves a primitive (or exhaustion) on top.
    exhausted_ = true;
    return std::nullopt;
  }
  Instruction out = top->prim;
  ++position_;
  stack_.pop_back();
  advance_after_emit();
  return out;
}

std::vector<std::string> StreamCursor::context_tags() const {
  std::vector<std::string> tags;
  for (const auto& f : stack_) {
    if (f.node->kind == Algorithm::Kind::Labeled) tags.push_back(f.node->tag);
  }
  return tags;
}

std::string StreamCursor::context_path() const {
  std::string out;
  for (const auto& f : stack_) {
    if (f.node->kind != Algorithm::Kind::Labeled) continue;
    if (!out.empty()) out += '/';
    out += f.node->tag;
  }
  return out;
}

std::string expand_to_string(const Alg& a, std::size_t limit, bool require_complete) {
  if (require_complete && a->length > limit) {
    throw std::length_error("expand_to_string: algorithm longer than limit");
  }
  std::string out;
  StreamCursor cur(a);
  while (out.size() < limit) {
    auto i = cur.next();
    if (!i) return out;
    out.push_back(to_char(*i));
  }
  if (require_complete && cur.next()) {
    throw std::length_error("expand_to_string: algorithm longer than limit");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

struct AlgParser {
  const std::string& s;
  std::size_t i = 0;

  explicit AlgParser(const std::string& text) : s(text) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("algorithm parse error at offset " + std::to_string(i) +
                     ": " + msg);
  }
  void skip_ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool at_end() {
    skip_ws();
    return i >= s.size();
  }
  char peek() {
    skip_ws();
    return i < s.size() ? s[i] : '\0';
  }

  Big read_big() {
    skip_ws();
    bool brace = false;
    if (i < s.size() && s[i] == '{') {
      brace = true;
      ++i;
      skip_ws();
    }
    std::size_t start = i;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
    std::size_t digits_start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == digits_start) fail("expected integer");
    Big value(s.substr(start, i - start));
    if (brace) {
      skip_ws();
      if (i >= s.size() || s[i] != '}') fail("expected '}'");
      ++i;
    }
    return value;
  }

  std::int64_t read_i64() {
    Big v = read_big();
    if (v < std::numeric_limits<std::int64_t>::min() ||
        v > std::numeric_limits<std::int64_t>::max())
      fail("macro argument out of range");
    return static_cast<std::int64_t>(v);
  }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++i;
  }

  // Returns the macro name if the letter run ending here is a macro call
  // (longest suffix of the run that names a macro, followed by '(').
  static std::optional<std::size_t> macro_suffix(const std::string& run) {
    static const char* names3[] = {"OME", "OMW", "SME", "SMW", "WPF", "AME"};
    for (const char* n : names3) {
      if (run.size() >= 3 && run.compare(run.size() - 3, 3, n) == 0) return 3;
    }
    if (run.size() >= 2 && (run.compare(run.size() - 2, 2, "ME") == 0 ||
                            run.compare(run.size() - 2, 2, "MW") == 0))
      return 2;
    return std::nullopt;
  }

  Alg parse_macro(const std::string& name) {
    expect('(');
    Alg result;
    if (name == "ME" || name == "MW") {
      std::int64_t a = read_i64();
      expect(',');
      std::int64_t e = read_i64();
      result = name == "ME" ? gen_me(a, e) : gen_mw(a, e);
    } else if (name == "OME" || name == "OMW") {
      std::int64_t a = read_i64();
      expect(',');
      std::int64_t e = read_i64();
      expect(',');
      std::int64_t b = read_i64();
      result = name == "OME" ? gen_ome(a, e, b) : gen_omw(a, e, b);
    } else if (name == "SME" || name == "SMW") {
      SmeParams p;
      p.a = read_i64();
      expect(',');
      p.e = read_i64();
      expect(',');
      expect('(');
      p.K = parse_sequence();
      expect(')');
      if (peek() == ',') {
        ++i;
        p.n = read_i64();
      }
      result = name == "SME" ? gen_sme(p) : gen_smw(p);
    } else if (name == "WPF") {
      std::int64_t a = read_i64();
      expect(',');
      std::int64_t e = read_i64();
      result = gen_wpf(a, e);
    } else if (name == "AME") {
      std::int64_t a = read_i64();
      expect(',');
      std::int64_t e = read_i64();
      result = gen_ame(a, e);
    } else {
      fail("unknown macro '" + name + "'");
    }
    expect(')');
    return result;
  }

  // atom := primitive | '(' sequence ')' | macro '(' args ')'
  // Returns the parsed atoms (a letter run yields several primitives).
  std::vector<Alg> parse_atoms() {
    std::vector<Alg> out;
    char c = peek();
    if (c == '(') {
      ++i;
      Alg inner = parse_sequence();
      expect(')');
      out.push_back(apply_exponent(inner, /*prim_base=*/false));
      return out;
    }
    if (!std::isalpha(static_cast<unsigned char>(c))) fail("expected atom");
    std::size_t start = i;
    while (i < s.size() && std::isalpha(static_cast<unsigned char>(s[i]))) ++i;
    std::string run = s.substr(start, i - start);
    std::string macro_name;
    if (auto len = macro_suffix(run); len && peek() == '(') {
      macro_name = run.substr(run.size() - *len);
      run.resize(run.size() - *len);
    }
    // Leading plain instructions; only the last may carry an exponent when no
    // macro follows (the '^' binds to the letter directly before it).
    for (std::size_t k = 0; k < run.size(); ++k) {
      auto instr = instruction_from_char(run[k]);
      if (!instr) fail(std::string("unknown instruction '") + run[k] + "'");
      bool last_plain = macro_name.empty() && k + 1 == run.size();
      if (last_plain) {
        out.push_back(apply_exponent(prim(*instr), /*prim_base=*/true));
      } else {
        out.push_back(prim(*instr));
      }
    }
    if (!macro_name.empty()) {
      Alg m = parse_macro(macro_name);
      out.push_back(apply_exponent(m, /*prim_base=*/false));
    }
    return out;
  }

  Alg apply_exponent(Alg base, bool prim_base) {
    while (peek() == '^') {
      ++i;
      Big e = read_big();
      if (e < 0) {
        if (!prim_base || base->kind != Algorithm::Kind::Prim)
          fail("negative exponent allowed on primitives only");
        base = prim_pow(base->prim, e);
      } else {
        base = pow_of(base, e);
      }
      prim_base = false;
    }
    return base;
  }

  Alg parse_sequence() {
    std::vector<Alg> parts;
    while (true) {
      char c = peek();
      if (c == '\0' || c == ')' || c == ',') break;
      auto atoms = parse_atoms();
      parts.insert(parts.end(), atoms.begin(), atoms.end());
    }
    return seq(std::move(parts));
  }
};

}  // namespace

Alg parse_algorithm(const std::string& text) {
  AlgParser p(text);
  Alg result = p.parse_sequence();
  if (!p.at_end()) p.fail("trailing input");
  return result;
}

// ---------------------------------------------------------------------------
// Printer
// ---------------------------------------------------------------------------

namespace {

void print_node(const Algorithm* node, std::ostringstream& out) {
  switch (node->kind) {
    case Algorithm::Kind::Prim:
      out << to_char(node->prim);
      return;
    case Algorithm::Kind::Labeled:
      print_node(node->body.get(), out);
      return;
    case Algorithm::Kind::Seq:
      for (const auto& c : node->children) print_node(c.get(), out);
      return;
    case Algorithm::Kind::Pow: {
      const Algorithm* body = node->body.get();
      while (body->kind == Algorithm::Kind::Labeled) body = body->body.get();
      bool needs_parens = body->kind != Algorithm::Kind::Prim;
      if (needs_parens) out << '(';
      print_node(body, out);
      if (needs_parens) out << ')';
      out << '^' << node->exp;
      return;
    }
  }
}

}  // namespace

std::string print_algorithm(const Alg& a) {
  std::ostringstream out;
  print_node(a.get(), out);
  return out.str();
}

}  // namespace bm
