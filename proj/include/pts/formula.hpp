#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "pts/literal.hpp"

namespace pts {

enum class Mode { FO, QPL };

enum class Kind {
  VarEq,
  VarNeq,
  Rel,
  NegRel,
  PropLit,
  MarginalIdentity,
  MarginalEquiv,
  CondIndep,
  Dep,
  Constancy,
  And,
  Or,
  Exists,
  Forall,
  ClassicalNeg,
  // Sugar, removed by expand_sugar.
  TupleEq,
  TupleNeq,
  BoundedExists,
  BoundedForall,
  ConstExists,
  Implies,
  Iff,
};

struct Node;
using Formula = std::shared_ptr<const Node>;

struct Node {
  Kind kind;
  // VarEq/VarNeq: two terms. Rel/NegRel: arguments. TupleEq/TupleNeq: left
  // half then right half. BoundedExists/BoundedForall: the value set.
  std::vector<Term> terms;
  // Relation, proposition or bound variable.
  std::string name;
  // Atom tuples. MarginalIdentity/MarginalEquiv: x, y. CondIndep: x is the
  // condition, y and z the independent sides. Dep: x determines y.
  // Constancy: x. ConstExists: x holds the bound variables.
  std::vector<Variable> x, y, z;
  bool positive = true;
  std::vector<Formula> kids;
};

Formula f_eq(Term a, Term b);
Formula f_neq(Term a, Term b);
Formula f_rel(std::string rel, std::vector<Term> args);
Formula f_negrel(std::string rel, std::vector<Term> args);
Formula f_prop(std::string p, bool positive);
Formula f_mi(std::vector<Variable> x, std::vector<Variable> y);
Formula f_me(std::vector<Variable> x, std::vector<Variable> y);
Formula f_ci(std::vector<Variable> cond, std::vector<Variable> y, std::vector<Variable> z);
Formula f_dep(std::vector<Variable> x, std::vector<Variable> y);
Formula f_const(std::vector<Variable> x);
Formula f_and(Formula a, Formula b);
Formula f_or(Formula a, Formula b);
Formula f_exists(Variable v, Formula body);
Formula f_forall(Variable v, Formula body);
Formula f_neg(Formula body);
Formula f_tuple_eq(std::vector<Term> left, std::vector<Term> right);
Formula f_tuple_neq(std::vector<Term> left, std::vector<Term> right);
Formula f_bounded_exists(Variable v, std::vector<Term> set, Formula body);
Formula f_bounded_forall(Variable v, std::vector<Term> set, Formula body);
Formula f_const_exists(std::vector<Variable> vars, Formula body);
Formula f_implies(Formula guard, Formula body);
Formula f_iff(Formula a, Formula b);

// Right-nested conjunction/disjunction; the list must be nonempty.
Formula and_all(const std::vector<Formula>& fs);
Formula or_all(const std::vector<Formula>& fs);
Formula exists_all(const std::vector<Variable>& vs, Formula body);
Formula forall_all(const std::vector<Variable>& vs, Formula body);

std::vector<Term> var_terms(const std::vector<Variable>& vs);

bool equal(const Formula& a, const Formula& b);

bool is_sugar(Kind k);
bool is_literal(Kind k);  // VarEq, VarNeq, Rel, NegRel, PropLit
bool is_dependency_atom(Kind k);

std::set<Variable> free_vars(const Formula& f);
// Every variable name occurring anywhere, bound or free.
std::set<Variable> all_vars(const Formula& f);

std::size_t node_count(const Formula& f);
std::size_t depth(const Formula& f);

// No dependency atoms, no classical negation, no sugar.
bool is_pure_fo(const Formula& f);
bool contains_kind(const Formula& f, Kind k);

// Removes every sugar node. Idempotent.
Formula expand_sugar(const Formula& f);

// Tarskian complement of a quantifier-free combination of literals (De Morgan
// with literal flips). Throws UnsupportedSugarError otherwise.
Formula literal_dual(const Formula& f);

Literal to_literal(const Formula& f);

}  // namespace pts
