#pragma once

#include <map>
#include <string>
#include <vector>

#include "pts/rational.hpp"

namespace pts {

using VarId = int;

// Names of real-valued variables. Names are unique; ids are dense.
class VarTable {
 public:
  VarId add(const std::string& name);
  // Adds name, or name#k for the first free k when taken.
  VarId add_unique(const std::string& name);
  const std::string& name(VarId v) const { return names_.at(static_cast<std::size_t>(v)); }
  std::size_t size() const { return names_.size(); }
  bool contains(const std::string& name) const { return index_.count(name) > 0; }
  VarId id(const std::string& name) const;

 private:
  std::vector<std::string> names_;
  std::map<std::string, VarId> index_;
};

struct ArithTerm {
  enum class Kind { Const, Var, Add, Mul };
  Kind kind = Kind::Const;
  Rational value;
  VarId var = -1;
  std::vector<ArithTerm> args;
};

ArithTerm t_const(const Rational& r);
ArithTerm t_var(VarId v);
// Flattens nested sums; an empty sum is 0, a singleton is its element.
ArithTerm t_add(std::vector<ArithTerm> args);
ArithTerm t_mul(std::vector<ArithTerm> args);
ArithTerm t_sub(ArithTerm a, ArithTerm b);

struct ArithFormula {
  enum class Kind { True, False, Eq, Leq, Not, And, Or, Exists, Forall };
  Kind kind = Kind::True;
  ArithTerm lhs, rhs;
  std::vector<VarId> vars;
  std::vector<ArithFormula> kids;
};

ArithFormula a_true();
ArithFormula a_false();
ArithFormula a_eq(ArithTerm l, ArithTerm r);
ArithFormula a_leq(ArithTerm l, ArithTerm r);
ArithFormula a_lt(ArithTerm l, ArithTerm r);  // Not(r <= l)
ArithFormula a_not(ArithFormula f);
// And/Or drop neutral elements and absorb True/False.
ArithFormula a_and(std::vector<ArithFormula> kids);
ArithFormula a_or(std::vector<ArithFormula> kids);
ArithFormula a_exists(std::vector<VarId> vars, ArithFormula body);
ArithFormula a_forall(std::vector<VarId> vars, ArithFormula body);
ArithFormula a_implies(ArithFormula a, ArithFormula b);

// A formula together with the table naming its variables.
struct ArithSentence {
  ArithFormula phi;
  VarTable vars;
};

bool has_mul(const ArithTerm& t);
// True when some product has two or more non-constant factors.
bool is_nonlinear(const ArithTerm& t);
bool is_nonlinear(const ArithFormula& f);
bool has_mul(const ArithFormula& f);
bool is_quantifier_free(const ArithFormula& f);

std::size_t formula_size(const ArithFormula& f);
std::vector<VarId> free_arith_vars(const ArithFormula& f);

// Readable infix rendering for traces and tests.
std::string to_string(const ArithTerm& t, const VarTable& vars);
std::string to_string(const ArithFormula& f, const VarTable& vars);

// Integer n written with 0, 1, + and * only (Horner in base 2).
ArithTerm strict_integer(const mpz_class& n);

}  // namespace pts
