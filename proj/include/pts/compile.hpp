#pragma once

#include <string>
#include <vector>

#include "pts/arith.hpp"
#include "pts/formula.hpp"
#include "pts/team.hpp"

namespace pts {

// Weights of a team whose assignments range over universe^|vars|. Index i
// is read in mixed radix, first variable most significant.
struct WeightFamily {
  std::vector<Variable> vars;
  std::vector<ArithTerm> weights;
};

// Translation of team semantics into real arithmetic over a fixed finite
// structure, non-scaled. New weight variables are named w_<stage>_<index>
// with stages t1, r1, t2, ... in order of creation.
class Compiler {
 public:
  Compiler(const Structure& structure, VarTable& vars);

  // Fresh variables for every index over the given variables.
  WeightFamily fresh_family(const std::vector<Variable>& vars, const std::string& stage);

  // f*(weights): holds iff the team with these weights satisfies f.
  // Sugar must be expanded; PreconditionError on =~* atoms.
  ArithFormula star(const Formula& f, const WeightFamily& fam);

  std::vector<VarId> ids(const WeightFamily& fam) const;
  std::size_t index_size(std::size_t arity) const;
  // Value tuple of an index.
  Tuple tuple_of(std::size_t index, std::size_t arity) const;

 private:
  ArithFormula literal(const Formula& f, const WeightFamily& fam);
  ArithFormula identity(const Formula& f, const WeightFamily& fam);
  ArithFormula independence(const Formula& f, const WeightFamily& fam);
  ArithFormula dependence(const std::vector<Variable>& x, const std::vector<Variable>& y,
                          const WeightFamily& fam);
  ArithFormula split(const Formula& f, const WeightFamily& fam);
  ArithFormula quantifier(const Formula& f, const WeightFamily& fam);
  // Sum of weights per assignment of `vars`, keyed by that assignment's index.
  std::vector<ArithTerm> marginal(const WeightFamily& fam, const std::vector<Variable>& vars) const;
  std::string next_stage(const char* tag);

  const Structure& structure_;
  VarTable& vars_;
  int stage_counter_ = 0;
};

// Weight-variable name for an index tuple: values concatenated when every
// value is a single character, otherwise joined by "_".
std::string weight_name(const std::string& stage, const Tuple& index);

// f*(s) over the binary structure with the s-variables declared first.
ArithFormula compile_star(const Formula& f, const std::vector<Variable>& props, VarTable& vars);

// exists s. s >= 0 and not(sum s = 0) and f*(s).
ArithSentence compile_sat(const Formula& f, const std::vector<Variable>& props);
// forall s. (s >= 0 and not(sum s = 0)) -> f*(s); the nonempty condition is
// dropped when include_empty is set.
ArithSentence compile_validity(const Formula& f, const std::vector<Variable>& props,
                               bool include_empty = false);
// forall s. (s >= 0 and not(sum s = 0) and sigma*(s)) -> target*(s).
ArithSentence compile_implication(const std::vector<Formula>& sigma, const Formula& target,
                                  const std::vector<Variable>& props);

// Existential sentence that is true iff the team satisfies f over the
// structure. Team weights appear as rational constants, or, with
// strict_vocabulary, as fresh variables pinned by equations over 0, 1, + and *.
ArithSentence compile_team_check(const Structure& structure, const ProbabilisticTeam& team,
                                 const Formula& f, bool strict_vocabulary = false);

// Free variables of f in sorted order, checked against a declared tuple when
// one is given (InputError on a variable outside it).
std::vector<Variable> proposition_tuple(const Formula& f, const std::vector<Variable>& declared);

}  // namespace pts
