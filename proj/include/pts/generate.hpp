#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "pts/formula.hpp"
#include "pts/team.hpp"

namespace pts {

using Rng = std::mt19937_64;

// Seeded team over universe^vars with at most max_rows distinct rows (at
// least one) and weights k/d, 0 <= k <= d <= max_denominator.
ProbabilisticTeam random_team(const std::vector<Value>& universe, const std::vector<Variable>& vars,
                              std::size_t max_rows, std::uint64_t seed,
                              int max_denominator = 12);
ProbabilisticTeam random_team(const std::vector<Value>& universe, const std::vector<Variable>& vars,
                              std::size_t max_rows, Rng& rng, int max_denominator = 12);

// Node kinds the formula generator may produce.
enum GenKind : unsigned {
  kGenEquality = 1u << 0,  // x = y, x != y
  kGenProp = 1u << 1,      // p, !p (binary structure)
  kGenIdentity = 1u << 2,
  kGenEquiv = 1u << 3,
  kGenIndep = 1u << 4,     // ci with empty condition
  kGenCondIndep = 1u << 5,
  kGenDep = 1u << 6,
  kGenConst = 1u << 7,
  kGenAnd = 1u << 8,
  kGenOr = 1u << 9,
  kGenExists = 1u << 10,
  kGenForall = 1u << 11,
  kGenNeg = 1u << 12,
};

struct FormulaGenOptions {
  std::vector<Variable> vars;  // free variables to draw from
  unsigned kinds = kGenEquality | kGenIdentity | kGenAnd | kGenOr;
  std::size_t max_depth = 2;
  std::size_t max_tuple = 2;
};

// Random formula with depth at most max_depth whose free variables lie in
// opts.vars. Bound variables are named b1, b2, ...
Formula random_formula(const FormulaGenOptions& opts, Rng& rng);

// Searches for a team over {0,1}^props satisfying every formula of sigma and
// falsifying target: first uniform distributions on small supports in
// lexicographic order, then random distributions. Sound, not complete.
std::optional<ProbabilisticTeam> refute_implication(const std::vector<Formula>& sigma,
                                                    const Formula& target,
                                                    const std::vector<Variable>& props,
                                                    std::size_t trials, std::uint64_t seed);

// Whether target is a ci atom that equals an assumption up to the order of
// variables inside each tuple and the order of the two independent tuples.
bool implied_by_symmetry(const std::vector<Formula>& sigma, const Formula& target);

}  // namespace pts
