#pragma once

#include <string>

#include "pts/formula.hpp"
#include "pts/solver.hpp"
#include "pts/team.hpp"

namespace pts {

struct Verdict {
  enum class Value { True, False, Unknown };
  Value value = Value::Unknown;
  // Strategy trace, one step per line.
  std::string reason;
  // Split weights or extension values read off a model, when available.
  std::string witness;

  bool is_true() const { return value == Value::True; }
  bool is_false() const { return value == Value::False; }
  bool is_unknown() const { return value == Value::Unknown; }
};

std::string to_string(Verdict::Value v);

enum class Strategy { Auto, Flat, Direct, Compile, WitnessSearch };

// Accepts "auto", "flat", "direct", "compile", "witness-search".
Strategy parse_strategy(const std::string& text);
std::string to_string(Strategy s);

struct CheckOptions {
  SolverConfig solver;
  // Weights enter compiled sentences as pinned variables instead of constants.
  bool strict_vocabulary = false;
  // Limit on candidate splits or extensions tried by witness search.
  std::size_t witness_budget = 4096;
};

// True iff every positive-weight row satisfies f. StrategyError when f is not
// pure first-order.
Verdict eval_flat(const Structure& structure, const ProbabilisticTeam& team, const Formula& f);

// Decides team |= f under the non-scaled semantics. Unknown only when an
// external solver was needed and did not answer.
Verdict check(const Structure& structure, const ProbabilisticTeam& team, const Formula& f,
              Strategy strategy = Strategy::Auto, const CheckOptions& opts = {});

// Sound but incomplete: tries value-guided splits and Dirac extensions.
// Returns True or Unknown, never False.
Verdict witness_search(const Structure& structure, const ProbabilisticTeam& team,
                       const Formula& f, const CheckOptions& opts = {});

}  // namespace pts
