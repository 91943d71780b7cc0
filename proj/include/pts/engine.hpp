#pragma once

#include <map>
#include <stdexcept>

#include "pts/formula.hpp"
#include "pts/linear.hpp"
#include "pts/solver.hpp"
#include "pts/team.hpp"

namespace pts {

// Tarskian truth of a pure first-order formula under one assignment.
bool holds_tarski(const Formula& f, const Structure& s, std::map<Variable, Value>& env);

// A formula that every support row of a team satisfying f satisfies, or null
// for "true". Pure first-order.
Formula flat_guard(const Formula& f);

// Variable sets U with f entailing dep(U ; v).
std::vector<std::set<Variable>> determiners(const Formula& f, const Variable& v);

// Raised when a formula needs the generic compiled path (classical negation
// over an undetermined team, or enumeration budgets exceeded).
struct EngineFallback : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EngineOptions {
  std::size_t max_branches = 4096;   // Dirac enumerations per existential block
  std::size_t max_unknowns = 50000;
  bool try_relaxation_model = true;
  SolverConfig solver;
};

// Team semantics evaluated over teams whose weights are linear expressions in
// nonnegative unknowns. Splits of disjunctions and extension choices become
// unknowns; the truth of f is an existential arithmetic question over them.
class Engine {
 public:
  Engine(const Structure& structure, EngineOptions opts = {});

  // Sat iff the team satisfies f. Sugar is expanded first.
  SolverVerdict decide(const ProbabilisticTeam& team, const Formula& f);

  std::size_t unknowns() const { return vars_.size(); }

 private:
  struct SymRow {
    Tuple values;
    LinExpr weight;
  };
  struct SymTeam {
    std::vector<Variable> domain;
    std::vector<SymRow> rows;
    bool concrete() const;
  };

  ArithFormula eval(const Formula& f, const SymTeam& t);
  ArithFormula eval_flat(const Formula& f, const SymTeam& t);
  ArithFormula eval_atom(const Formula& f, const SymTeam& t);
  ArithFormula eval_or(const Formula& f, const SymTeam& t);
  ArithFormula eval_exists(const Formula& f, const SymTeam& t);
  ArithFormula eval_forall(const Formula& f, const SymTeam& t);
  ArithFormula eval_negation(const Formula& f, const SymTeam& t);
  SolverVerdict decide_constraints(const ArithFormula& c);

  SymTeam restrict_to(const SymTeam& t, const std::set<Variable>& keep) const;
  std::map<Variable, Value> env_of(const SymTeam& t, const SymRow& r) const;
  bool guard_holds(const Formula& guard, std::map<Variable, Value>& env) const;
  VarId fresh_unknown();
  ProbabilisticTeam to_team(const SymTeam& t) const;

  const Structure& structure_;
  EngineOptions opts_;
  VarTable vars_;
  std::size_t fresh_names_ = 0;
};

}  // namespace pts
