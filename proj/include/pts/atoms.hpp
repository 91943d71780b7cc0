#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pts/literal.hpp"
#include "pts/team.hpp"

namespace pts {

struct AtomVerdict {
  bool holds = true;
  // A value tuple (identity, independence) or a pair of support rows
  // projected to the atom's variables (dependence, literals).
  std::vector<Tuple> witness;

  explicit operator bool() const { return holds; }
};

std::string describe_witness(const AtomVerdict& v);

AtomVerdict eval_marginal_identity(const ProbabilisticTeam& team, const std::vector<Variable>& x,
                                   const std::vector<Variable>& y);
AtomVerdict eval_marginal_equivalence(const ProbabilisticTeam& team,
                                      const std::vector<Variable>& x,
                                      const std::vector<Variable>& y);
// y ⊥⊥_x z; an empty x gives marginal independence.
AtomVerdict eval_conditional_independence(const ProbabilisticTeam& team,
                                          const std::vector<Variable>& x,
                                          const std::vector<Variable>& y,
                                          const std::vector<Variable>& z);
// dep(x; y); an empty x gives constancy.
AtomVerdict eval_dependence(const ProbabilisticTeam& team, const std::vector<Variable>& x,
                            const std::vector<Variable>& y);
AtomVerdict eval_fo_literal(const Structure& structure, const ProbabilisticTeam& team,
                            const Literal& lit);

}  // namespace pts
