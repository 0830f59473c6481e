#pragma once

#include <memory>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace syncomp {

enum class LtlOp : std::uint8_t {
  tru,
  fls,
  prop,
  negation,
  conj,
  disj,
  implies,
  iff,
  next,
  always,
  eventually,
  until,
  release,
};

class Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

/// Immutable LTL syntax tree. Subtrees are shared; equality is structural.
class Formula {
 public:
  static FormulaPtr top();
  static FormulaPtr bottom();
  static FormulaPtr prop(std::string name);
  static FormulaPtr negation(FormulaPtr f);
  static FormulaPtr conj(FormulaPtr a, FormulaPtr b);
  static FormulaPtr disj(FormulaPtr a, FormulaPtr b);
  static FormulaPtr implies(FormulaPtr a, FormulaPtr b);
  static FormulaPtr iff(FormulaPtr a, FormulaPtr b);
  static FormulaPtr next(FormulaPtr f);
  static FormulaPtr always(FormulaPtr f);
  static FormulaPtr eventually(FormulaPtr f);
  static FormulaPtr until(FormulaPtr a, FormulaPtr b);
  static FormulaPtr release(FormulaPtr a, FormulaPtr b);

  LtlOp op() const { return op_; }
  const std::string& prop_name() const { return name_; }
  const FormulaPtr& lhs() const { return lhs_; }
  const FormulaPtr& rhs() const { return rhs_; }
  bool is_unary() const;
  bool is_binary() const;

  std::string str() const;

  // Prefer the static factories; this is public only so they can allocate.
  Formula(LtlOp op, std::string name, FormulaPtr lhs, FormulaPtr rhs)
      : op_(op), name_(std::move(name)), lhs_(std::move(lhs)), rhs_(std::move(rhs)) {}

 private:
  LtlOp op_;
  std::string name_;
  FormulaPtr lhs_;
  FormulaPtr rhs_;
};

bool operator==(const Formula& a, const Formula& b);
inline bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

/// Three-way structural ordering (for canonical containers).
int compare(const Formula& a, const Formula& b);

struct FormulaParseError : std::runtime_error {
  FormulaParseError(std::size_t position, const std::string& message)
      : std::runtime_error("syntax error at position " +
                           std::to_string(position + 1) + ": " + message),
        position(position) {}

  std::size_t position;
};

/// Parses the textual LTL syntax. Precedence, loosest first: <->, ->, |, &,
/// U/R, then the prefix operators ! X G F. `[]` means G, `<>` means F, `O`
/// means X. Identifiers may contain letters, digits, _, ?, - and an optional
/// `(digits)` suffix, so names like failed?(3) or no-new-failures? are atoms.
FormulaPtr parse_formula(std::string_view text);

/// Negation normal form: -> and <-> are expanded, G and F are rewritten to
/// R and U, and negation remains only on propositions.
FormulaPtr to_nnf(const FormulaPtr& f);

bool is_nnf(const Formula& f);

/// Proposition names appearing in f.
std::set<std::string> collect_props(const FormulaPtr& f);

using PropSet = std::set<std::string>;

/// Exact LTL truth of f on the ultimately periodic word
/// prefix . cycle^omega, computed by fixpoint iteration over the lasso
/// positions. Handles every operator, normal form or not.
bool eval_on_lasso(const FormulaPtr& f, std::span<const PropSet> prefix,
                   std::span<const PropSet> cycle);

std::ostream& operator<<(std::ostream& os, const Formula& f);

}  // namespace syncomp
