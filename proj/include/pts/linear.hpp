#pragma once

#include <map>
#include <optional>
#include <vector>

#include "pts/arith.hpp"

namespace pts {

struct LinExpr {
  std::map<VarId, Rational> coef;  // no zero coefficients
  Rational constant;

  static LinExpr of_const(const Rational& c);
  static LinExpr of_var(VarId v, const Rational& c = 1);

  bool is_constant() const { return coef.empty(); }
  void add_term(VarId v, const Rational& c);
  LinExpr& operator+=(const LinExpr& o);
  LinExpr& operator-=(const LinExpr& o);
  LinExpr& operator*=(const Rational& k);
  // Replaces v by e.
  void substitute(VarId v, const LinExpr& e);
  Rational eval(const std::map<VarId, Rational>& values) const;
  bool operator==(const LinExpr& o) const { return coef == o.coef && constant == o.constant; }
  bool operator<(const LinExpr& o) const {
    return constant != o.constant ? constant < o.constant : coef < o.coef;
  }
};

LinExpr operator+(LinExpr a, const LinExpr& b);
LinExpr operator-(LinExpr a, const LinExpr& b);
LinExpr operator*(LinExpr a, const Rational& k);

ArithTerm to_term(const LinExpr& e);

enum class Rel { Eq, Le, Lt, Ne };

// sum_k c_k * prod(factors_k) + lin  (rel)  0, each factor linear.
struct PolyConstraint {
  struct Product {
    Rational coef;
    std::vector<LinExpr> factors;
  };
  std::vector<Product> products;
  LinExpr lin;
  Rel rel = Rel::Eq;

  bool is_linear() const { return products.empty(); }
};

// Converts lhs - rhs. Returns nullopt for terms outside sums of products of
// linear factors (never produced by this library, but accepted input).
std::optional<PolyConstraint> to_constraint(const ArithTerm& lhs, const ArithTerm& rhs, Rel rel);

ArithFormula to_formula(const PolyConstraint& c);

// Moves constant factors into coefficients and multiplies out products with at
// most one live factor. Afterwards is_linear() tells whether any product is left.
void fold_products(PolyConstraint& c);

// Truth value of a constraint without variables.
bool holds_constant(const LinExpr& e, Rel rel);

// Incremental Gauss-Jordan elimination over exact rationals.
class EqSystem {
 public:
  // Adds e = 0. Returns false when the system became inconsistent.
  bool add(const LinExpr& e);
  LinExpr reduce(const LinExpr& e) const;
  void reduce_in_place(PolyConstraint& c) const;
  bool is_pivot(VarId v) const { return pivots_.count(v) > 0; }
  // Pivot variable -> expression over non-pivot variables.
  const std::map<VarId, LinExpr>& pivots() const { return pivots_; }
  bool consistent() const { return consistent_; }

 private:
  std::map<VarId, LinExpr> pivots_;
  // Non-pivot variable -> pivots whose expression mentions it.
  std::map<VarId, std::vector<VarId>> users_;
  bool consistent_ = true;
};

}  // namespace pts
