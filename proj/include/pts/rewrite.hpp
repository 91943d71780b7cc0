#pragma once

#include <set>
#include <string>

#include "pts/formula.hpp"
#include "pts/team.hpp"

namespace pts {

// Names "$<hint><n>"; '$' is not accepted by the parser, so generated names
// cannot clash with user variables. Reserved names are skipped as well.
class FreshNameSource {
 public:
  FreshNameSource() = default;
  explicit FreshNameSource(const Formula& f) { reserve(f); }
  void reserve(const Formula& f);
  Variable next(const std::string& hint);
  std::vector<Variable> tuple(const std::string& hint, std::size_t n);

 private:
  std::set<Variable> reserved_;
  std::size_t counter_ = 0;
};

enum class TargetLogic { Identity, Equivalence, IdentityDep, Independence, CondIndependence, Qpl };

// Accepts "FO(~)", "FO(~*)", "FO(~,dep)", "FO(indep)", "FO(ci)" and "QPL".
TargetLogic parse_target(const std::string& text);
std::string to_string(TargetLogic t);
// Whether an atom of this kind (with this condition arity, for ci) may appear in t.
bool atom_allowed(TargetLogic t, Kind k, bool conditional = false);

// dep(x ; y) -> ci(x ; y ; y); const(x) -> ci(; x ; x).
Formula dep_to_ci(const Formula& f);
// dep(x ; y1..yk) -> chain of (x y1..yi-1, yi) =~* (x y1..yi-1); constancy and
// dep with empty x go through a fresh universally quantified u.
Formula dep_to_equiv(const Formula& f, FreshNameSource& fresh);
// x =~* y -> E z. (dep(y ; z) & dep(z ; y) & x =~ z).
Formula equiv_to_identity_dep(const Formula& f, FreshNameSource& fresh);
// x =~ y -> A z. ((z != x & z != y) | ((z = x | z = y) & z =~* x & z =~* y)).
Formula identity_to_equiv(const Formula& f, FreshNameSource& fresh);
// x =~ y with marginal independence and first-order logic only, via a
// detector variable d that must be uniform over two constants and
// independent of a uniformly quantified z. Needs at least two elements.
Formula identity_to_marg_indep(const Formula& f, FreshNameSource& fresh);
// ci(x0 ; x1 ; x2) via marginal independence and marginal identity, using
// the structure constant "zero" (ConfigError when missing).
Formula ci_to_marg_indep(const Formula& f, const Structure& structure, FreshNameSource& fresh);

// Replaces every atom outside the target bottom-up. NoPathError when an atom
// has no translation into the target. Output is sugar-free.
Formula lower(const Formula& f, TargetLogic target, const Structure& structure,
              FreshNameSource& fresh);
Formula lower(const Formula& f, TargetLogic target, const Structure& structure);

// Whether every atom of f lies in the target.
bool within(const Formula& f, TargetLogic target);

}  // namespace pts
