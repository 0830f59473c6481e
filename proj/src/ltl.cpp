#include "syncomp/ltl.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <ostream>
#include <vector>

namespace syncomp {

namespace {

FormulaPtr make(LtlOp op, std::string name, FormulaPtr lhs, FormulaPtr rhs) {
  return std::make_shared<const Formula>(op, std::move(name), std::move(lhs),
                                         std::move(rhs));
}

}  // namespace

FormulaPtr Formula::top() { return make(LtlOp::tru, {}, nullptr, nullptr); }
FormulaPtr Formula::bottom() { return make(LtlOp::fls, {}, nullptr, nullptr); }
FormulaPtr Formula::prop(std::string name) {
  return make(LtlOp::prop, std::move(name), nullptr, nullptr);
}
FormulaPtr Formula::negation(FormulaPtr f) {
  return make(LtlOp::negation, {}, std::move(f), nullptr);
}
FormulaPtr Formula::conj(FormulaPtr a, FormulaPtr b) {
  return make(LtlOp::conj, {}, std::move(a), std::move(b));
}
FormulaPtr Formula::disj(FormulaPtr a, FormulaPtr b) {
  return make(LtlOp::disj, {}, std::move(a), std::move(b));
}
FormulaPtr Formula::implies(FormulaPtr a, FormulaPtr b) {
  return make(LtlOp::implies, {}, std::move(a), std::move(b));
}
FormulaPtr Formula::iff(FormulaPtr a, FormulaPtr b) {
  return make(LtlOp::iff, {}, std::move(a), std::move(b));
}
FormulaPtr Formula::next(FormulaPtr f) {
  return make(LtlOp::next, {}, std::move(f), nullptr);
}
FormulaPtr Formula::always(FormulaPtr f) {
  return make(LtlOp::always, {}, std::move(f), nullptr);
}
FormulaPtr Formula::eventually(FormulaPtr f) {
  return make(LtlOp::eventually, {}, std::move(f), nullptr);
}
FormulaPtr Formula::until(FormulaPtr a, FormulaPtr b) {
  return make(LtlOp::until, {}, std::move(a), std::move(b));
}
FormulaPtr Formula::release(FormulaPtr a, FormulaPtr b) {
  return make(LtlOp::release, {}, std::move(a), std::move(b));
}

bool Formula::is_unary() const {
  return op_ == LtlOp::negation || op_ == LtlOp::next || op_ == LtlOp::always ||
         op_ == LtlOp::eventually;
}

bool Formula::is_binary() const {
  switch (op_) {
    case LtlOp::conj:
    case LtlOp::disj:
    case LtlOp::implies:
    case LtlOp::iff:
    case LtlOp::until:
    case LtlOp::release:
      return true;
    default:
      return false;
  }
}

int compare(const Formula& a, const Formula& b) {
  if (a.op() != b.op()) {
    return a.op() < b.op() ? -1 : 1;
  }
  switch (a.op()) {
    case LtlOp::tru:
    case LtlOp::fls:
      return 0;
    case LtlOp::prop:
      return a.prop_name().compare(b.prop_name());
    default: {
      int c = compare(*a.lhs(), *b.lhs());
      if (c != 0) return c;
      if (!a.rhs() && !b.rhs()) return 0;
      return compare(*a.rhs(), *b.rhs());
    }
  }
}

bool operator==(const Formula& a, const Formula& b) {
  return compare(a, b) == 0;
}

namespace {

// Loosest 1 .. tightest 6; atoms are 7.
int precedence(LtlOp op) {
  switch (op) {
    case LtlOp::iff:
      return 1;
    case LtlOp::implies:
      return 2;
    case LtlOp::disj:
      return 3;
    case LtlOp::conj:
      return 4;
    case LtlOp::until:
    case LtlOp::release:
      return 5;
    case LtlOp::negation:
    case LtlOp::next:
    case LtlOp::always:
    case LtlOp::eventually:
      return 6;
    default:
      return 7;
  }
}

void print(const Formula& f, std::string& out, int min_prec) {
  const int prec = precedence(f.op());
  const bool parens = prec < min_prec;
  if (parens) out += "(";
  switch (f.op()) {
    case LtlOp::tru:
      out += "true";
      break;
    case LtlOp::fls:
      out += "false";
      break;
    case LtlOp::prop:
      out += f.prop_name();
      break;
    case LtlOp::negation:
      out += "!";
      print(*f.lhs(), out, prec);
      break;
    case LtlOp::next:
      out += "X ";
      print(*f.lhs(), out, prec);
      break;
    case LtlOp::always:
      out += "G ";
      print(*f.lhs(), out, prec);
      break;
    case LtlOp::eventually:
      out += "F ";
      print(*f.lhs(), out, prec);
      break;
    default: {
      const char* glyph = "?";
      switch (f.op()) {
        case LtlOp::conj: glyph = " & "; break;
        case LtlOp::disj: glyph = " | "; break;
        case LtlOp::implies: glyph = " -> "; break;
        case LtlOp::iff: glyph = " <-> "; break;
        case LtlOp::until: glyph = " U "; break;
        case LtlOp::release: glyph = " R "; break;
        default: break;
      }
      // Binary operators associate to the right.
      print(*f.lhs(), out, prec + 1);
      out += glyph;
      print(*f.rhs(), out, prec);
      break;
    }
  }
  if (parens) out += ")";
}

}  // namespace

std::string Formula::str() const {
  std::string out;
  print(*this, out, 0);
  return out;
}

std::ostream& operator<<(std::ostream& os, const Formula& f) {
  return os << f.str();
}

// ---------------------------------------------------------------------------
// Parser

namespace {

enum class Tok {
  end,
  lparen,
  rparen,
  bang,
  amp,
  pipe,
  arrow,
  darrow,
  op_next,
  op_always,
  op_eventually,
  op_until,
  op_release,
  lit_true,
  lit_false,
  ident,
};

struct Token {
  Tok kind;
  std::size_t pos;
  std::string text;
};

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '?' ||
         c == '\'';
}

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    switch (c) {
      case '(':
        out.push_back({Tok::lparen, start, "("});
        ++i;
        continue;
      case ')':
        out.push_back({Tok::rparen, start, ")"});
        ++i;
        continue;
      case '!':
        out.push_back({Tok::bang, start, "!"});
        ++i;
        continue;
      case '&':
        out.push_back({Tok::amp, start, "&"});
        ++i;
        continue;
      case '|':
        out.push_back({Tok::pipe, start, "|"});
        ++i;
        continue;
      case '-':
        if (i + 1 < text.size() && text[i + 1] == '>') {
          out.push_back({Tok::arrow, start, "->"});
          i += 2;
          continue;
        }
        throw FormulaParseError(start, "stray '-'");
      case '<':
        if (i + 2 < text.size() && text[i + 1] == '-' && text[i + 2] == '>') {
          out.push_back({Tok::darrow, start, "<->"});
          i += 3;
          continue;
        }
        if (i + 1 < text.size() && text[i + 1] == '>') {
          out.push_back({Tok::op_eventually, start, "<>"});
          i += 2;
          continue;
        }
        throw FormulaParseError(start, "stray '<'");
      case '[':
        if (i + 1 < text.size() && text[i + 1] == ']') {
          out.push_back({Tok::op_always, start, "[]"});
          i += 2;
          continue;
        }
        throw FormulaParseError(start, "stray '['");
      default:
        break;
    }
    if (!ident_start(c)) {
      throw FormulaParseError(start, std::string("unexpected character '") + c + "'");
    }
    std::string name;
    while (i < text.size()) {
      char d = text[i];
      if (ident_char(d)) {
        name += d;
        ++i;
        continue;
      }
      // '-' belongs to the identifier only when it does not start "->".
      if (d == '-' && i + 1 < text.size() && ident_char(text[i + 1])) {
        name += d;
        ++i;
        continue;
      }
      break;
    }
    // Indexed atoms like failed?(3): a parenthesized number glued to the name.
    if (i < text.size() && text[i] == '(') {
      std::size_t j = i + 1;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
        ++j;
      }
      if (j > i + 1 && j < text.size() && text[j] == ')') {
        name += text.substr(i, j + 1 - i);
        i = j + 1;
      }
    }
    if (name == "U") {
      out.push_back({Tok::op_until, start, name});
    } else if (name == "R") {
      out.push_back({Tok::op_release, start, name});
    } else if (name == "X" || name == "O") {
      out.push_back({Tok::op_next, start, name});
    } else if (name == "G") {
      out.push_back({Tok::op_always, start, name});
    } else if (name == "F") {
      out.push_back({Tok::op_eventually, start, name});
    } else if (name == "true") {
      out.push_back({Tok::lit_true, start, name});
    } else if (name == "false") {
      out.push_back({Tok::lit_false, start, name});
    } else {
      out.push_back({Tok::ident, start, name});
    }
  }
  out.push_back({Tok::end, text.size(), ""});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  FormulaPtr run() {
    FormulaPtr f = parse_iff();
    if (peek().kind != Tok::end) {
      throw FormulaParseError(peek().pos,
                              "unexpected '" + peek().text + "' after formula");
    }
    return f;
  }

 private:
  const Token& peek() const { return tokens_[at_]; }
  Token take() { return tokens_[at_++]; }
  bool eat(Tok kind) {
    if (peek().kind == kind) {
      ++at_;
      return true;
    }
    return false;
  }

  FormulaPtr parse_iff() {
    FormulaPtr l = parse_implies();
    if (eat(Tok::darrow)) {
      return Formula::iff(std::move(l), parse_iff());
    }
    return l;
  }

  FormulaPtr parse_implies() {
    FormulaPtr l = parse_or();
    if (eat(Tok::arrow)) {
      return Formula::implies(std::move(l), parse_implies());
    }
    return l;
  }

  FormulaPtr parse_or() {
    FormulaPtr l = parse_and();
    while (eat(Tok::pipe)) {
      l = Formula::disj(std::move(l), parse_and());
    }
    return l;
  }

  FormulaPtr parse_and() {
    FormulaPtr l = parse_until();
    while (eat(Tok::amp)) {
      l = Formula::conj(std::move(l), parse_until());
    }
    return l;
  }

  FormulaPtr parse_until() {
    FormulaPtr l = parse_unary();
    if (eat(Tok::op_until)) {
      return Formula::until(std::move(l), parse_until());
    }
    if (eat(Tok::op_release)) {
      return Formula::release(std::move(l), parse_until());
    }
    return l;
  }

  FormulaPtr parse_unary() {
    switch (peek().kind) {
      case Tok::bang:
        take();
        return Formula::negation(parse_unary());
      case Tok::op_next:
        take();
        return Formula::next(parse_unary());
      case Tok::op_always:
        take();
        return Formula::always(parse_unary());
      case Tok::op_eventually:
        take();
        return Formula::eventually(parse_unary());
      default:
        return parse_atom();
    }
  }

  FormulaPtr parse_atom() {
    Token t = take();
    switch (t.kind) {
      case Tok::lit_true:
        return Formula::top();
      case Tok::lit_false:
        return Formula::bottom();
      case Tok::ident:
        return Formula::prop(t.text);
      case Tok::lparen: {
        FormulaPtr f = parse_iff();
        if (!eat(Tok::rparen)) {
          throw FormulaParseError(peek().pos, "expected ')'");
        }
        return f;
      }
      case Tok::end:
        throw FormulaParseError(t.pos, "expected a formula");
      default:
        throw FormulaParseError(t.pos, "unexpected '" + t.text + "'");
    }
  }

  std::vector<Token> tokens_;
  std::size_t at_ = 0;
};

}  // namespace

FormulaPtr parse_formula(std::string_view text) {
  return Parser(lex(text)).run();
}

// ---------------------------------------------------------------------------
// Negation normal form

namespace {

FormulaPtr nnf_pos(const FormulaPtr& f);
FormulaPtr nnf_neg(const FormulaPtr& f);

FormulaPtr nnf_pos(const FormulaPtr& f) {
  switch (f->op()) {
    case LtlOp::tru:
    case LtlOp::fls:
    case LtlOp::prop:
      return f;
    case LtlOp::negation:
      return nnf_neg(f->lhs());
    case LtlOp::conj:
      return Formula::conj(nnf_pos(f->lhs()), nnf_pos(f->rhs()));
    case LtlOp::disj:
      return Formula::disj(nnf_pos(f->lhs()), nnf_pos(f->rhs()));
    case LtlOp::implies:
      return Formula::disj(nnf_neg(f->lhs()), nnf_pos(f->rhs()));
    case LtlOp::iff:
      return Formula::disj(
          Formula::conj(nnf_pos(f->lhs()), nnf_pos(f->rhs())),
          Formula::conj(nnf_neg(f->lhs()), nnf_neg(f->rhs())));
    case LtlOp::next:
      return Formula::next(nnf_pos(f->lhs()));
    case LtlOp::always:
      return Formula::release(Formula::bottom(), nnf_pos(f->lhs()));
    case LtlOp::eventually:
      return Formula::until(Formula::top(), nnf_pos(f->lhs()));
    case LtlOp::until:
      return Formula::until(nnf_pos(f->lhs()), nnf_pos(f->rhs()));
    case LtlOp::release:
      return Formula::release(nnf_pos(f->lhs()), nnf_pos(f->rhs()));
  }
  throw std::logic_error("unreachable");
}

FormulaPtr nnf_neg(const FormulaPtr& f) {
  switch (f->op()) {
    case LtlOp::tru:
      return Formula::bottom();
    case LtlOp::fls:
      return Formula::top();
    case LtlOp::prop:
      return Formula::negation(f);
    case LtlOp::negation:
      return nnf_pos(f->lhs());
    case LtlOp::conj:
      return Formula::disj(nnf_neg(f->lhs()), nnf_neg(f->rhs()));
    case LtlOp::disj:
      return Formula::conj(nnf_neg(f->lhs()), nnf_neg(f->rhs()));
    case LtlOp::implies:
      return Formula::conj(nnf_pos(f->lhs()), nnf_neg(f->rhs()));
    case LtlOp::iff:
      return Formula::disj(
          Formula::conj(nnf_pos(f->lhs()), nnf_neg(f->rhs())),
          Formula::conj(nnf_neg(f->lhs()), nnf_pos(f->rhs())));
    case LtlOp::next:
      return Formula::next(nnf_neg(f->lhs()));
    case LtlOp::always:
      return Formula::until(Formula::top(), nnf_neg(f->lhs()));
    case LtlOp::eventually:
      return Formula::release(Formula::bottom(), nnf_neg(f->lhs()));
    case LtlOp::until:
      return Formula::release(nnf_neg(f->lhs()), nnf_neg(f->rhs()));
    case LtlOp::release:
      return Formula::until(nnf_neg(f->lhs()), nnf_neg(f->rhs()));
  }
  throw std::logic_error("unreachable");
}

}  // namespace

FormulaPtr to_nnf(const FormulaPtr& f) { return nnf_pos(f); }

bool is_nnf(const Formula& f) {
  switch (f.op()) {
    case LtlOp::tru:
    case LtlOp::fls:
    case LtlOp::prop:
      return true;
    case LtlOp::negation:
      return f.lhs()->op() == LtlOp::prop;
    case LtlOp::implies:
    case LtlOp::iff:
    case LtlOp::always:
    case LtlOp::eventually:
      return false;
    case LtlOp::next:
      return is_nnf(*f.lhs());
    default:
      return is_nnf(*f.lhs()) && is_nnf(*f.rhs());
  }
}

std::set<std::string> collect_props(const FormulaPtr& f) {
  std::set<std::string> out;
  std::vector<const Formula*> stack{f.get()};
  while (!stack.empty()) {
    const Formula* at = stack.back();
    stack.pop_back();
    if (at->op() == LtlOp::prop) {
      out.insert(at->prop_name());
      continue;
    }
    if (at->lhs()) stack.push_back(at->lhs().get());
    if (at->rhs()) stack.push_back(at->rhs().get());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Lasso semantics

namespace {

// Truth vector of f at every lasso position; positions p..p+c-1 wrap to p.
std::vector<char> eval_positions(const Formula& f,
                                 std::span<const PropSet> prefix,
                                 std::span<const PropSet> cycle) {
  const std::size_t p = prefix.size();
  const std::size_t n = p + cycle.size();
  auto nxt = [p, n](std::size_t i) { return i + 1 < n ? i + 1 : p; };
  auto labels = [&](std::size_t i) -> const PropSet& {
    return i < p ? prefix[i] : cycle[i - p];
  };

  auto lfp = [&](auto&& step) {
    std::vector<char> v(n, 0);
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = n; i-- > 0;) {
        char nv = step(i, v);
        if (nv != v[i]) {
          v[i] = nv;
          changed = true;
        }
      }
    }
    return v;
  };
  auto gfp = [&](auto&& step) {
    std::vector<char> v(n, 1);
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = n; i-- > 0;) {
        char nv = step(i, v);
        if (nv != v[i]) {
          v[i] = nv;
          changed = true;
        }
      }
    }
    return v;
  };

  switch (f.op()) {
    case LtlOp::tru:
      return std::vector<char>(n, 1);
    case LtlOp::fls:
      return std::vector<char>(n, 0);
    case LtlOp::prop: {
      std::vector<char> v(n);
      for (std::size_t i = 0; i < n; ++i) {
        v[i] = labels(i).count(f.prop_name()) ? 1 : 0;
      }
      return v;
    }
    case LtlOp::negation: {
      std::vector<char> v = eval_positions(*f.lhs(), prefix, cycle);
      for (char& b : v) b = !b;
      return v;
    }
    case LtlOp::conj:
    case LtlOp::disj:
    case LtlOp::implies:
    case LtlOp::iff: {
      std::vector<char> a = eval_positions(*f.lhs(), prefix, cycle);
      std::vector<char> b = eval_positions(*f.rhs(), prefix, cycle);
      std::vector<char> v(n);
      for (std::size_t i = 0; i < n; ++i) {
        switch (f.op()) {
          case LtlOp::conj: v[i] = a[i] && b[i]; break;
          case LtlOp::disj: v[i] = a[i] || b[i]; break;
          case LtlOp::implies: v[i] = !a[i] || b[i]; break;
          default: v[i] = a[i] == b[i]; break;
        }
      }
      return v;
    }
    case LtlOp::next: {
      std::vector<char> a = eval_positions(*f.lhs(), prefix, cycle);
      std::vector<char> v(n);
      for (std::size_t i = 0; i < n; ++i) v[i] = a[nxt(i)];
      return v;
    }
    case LtlOp::always: {
      std::vector<char> a = eval_positions(*f.lhs(), prefix, cycle);
      return gfp([&](std::size_t i, const std::vector<char>& v) -> char {
        return a[i] && v[nxt(i)];
      });
    }
    case LtlOp::eventually: {
      std::vector<char> a = eval_positions(*f.lhs(), prefix, cycle);
      return lfp([&](std::size_t i, const std::vector<char>& v) -> char {
        return a[i] || v[nxt(i)];
      });
    }
    case LtlOp::until: {
      std::vector<char> a = eval_positions(*f.lhs(), prefix, cycle);
      std::vector<char> b = eval_positions(*f.rhs(), prefix, cycle);
      return lfp([&](std::size_t i, const std::vector<char>& v) -> char {
        return b[i] || (a[i] && v[nxt(i)]);
      });
    }
    case LtlOp::release: {
      std::vector<char> a = eval_positions(*f.lhs(), prefix, cycle);
      std::vector<char> b = eval_positions(*f.rhs(), prefix, cycle);
      return gfp([&](std::size_t i, const std::vector<char>& v) -> char {
        return b[i] && (a[i] || v[nxt(i)]);
      });
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace

bool eval_on_lasso(const FormulaPtr& f, std::span<const PropSet> prefix,
                   std::span<const PropSet> cycle) {
  if (cycle.empty()) {
    throw std::invalid_argument("lasso cycle must be non-empty");
  }
  return eval_positions(*f, prefix, cycle)[0] != 0;
}

}  // namespace syncomp
