#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "pts/rational.hpp"

namespace pts {

using Value = std::string;
using Variable = std::string;
using Tuple = std::vector<Value>;

struct Row {
  Tuple values;
  Rational weight;
  bool operator==(const Row& o) const { return values == o.values && weight == o.weight; }
};

// Weighted assignments over a shared ordered variable tuple. Rows are kept
// sorted by value tokens and pairwise distinct; zero weights are allowed.
class ProbabilisticTeam {
 public:
  ProbabilisticTeam() = default;
  // Throws InputError on duplicate assignments, wrong arity or negative weight.
  ProbabilisticTeam(std::vector<Variable> domain, std::vector<Row> rows);

  // Like the constructor but sums the weights of repeated assignments.
  static ProbabilisticTeam accumulate(std::vector<Variable> domain, std::vector<Row> rows);

  const std::vector<Variable>& domain() const { return domain_; }
  const std::vector<Row>& rows() const { return rows_; }
  bool empty() const { return rows_.empty(); }

  bool has_variable(const Variable& v) const;
  // Position of v in the domain; DomainError when absent.
  std::size_t index_of(const Variable& v) const;
  std::vector<std::size_t> indices_of(const std::vector<Variable>& vars) const;

  Rational total_weight() const;
  bool normalized() const;
  Rational weight_of(const Tuple& values) const;

  // Drops zero-weight rows.
  ProbabilisticTeam compact() const;

  bool operator==(const ProbabilisticTeam& o) const {
    return domain_ == o.domain_ && rows_ == o.rows_;
  }

 private:
  std::vector<Variable> domain_;
  std::vector<Row> rows_;
};

struct Relation {
  std::size_t arity = 0;
  std::set<Tuple> tuples;
};

struct Structure {
  std::vector<Value> universe;
  std::map<std::string, Relation> relations;
  std::map<std::string, Value> constants;

  // ({0,1}, P = {1}): the encoding used for propositional formulas.
  static Structure binary();
  // Universe = values occurring in the team, sorted; no relations.
  static Structure from_team(const ProbabilisticTeam& team);

  bool has_value(const Value& v) const;
  // Throws InputError unless relation tuples and constants lie in the universe.
  void validate() const;
};

using LocalDistribution = std::map<Value, Rational>;
// Keyed by row assignment (the row's value tuple).
using ExtensionChoice = std::map<Tuple, LocalDistribution>;

Rational marginal_weight(const ProbabilisticTeam& team, const std::vector<Variable>& vars,
                         const Tuple& vals);

// Keeps the listed variables (in domain order) and merges rows.
ProbabilisticTeam restrict(const ProbabilisticTeam& team, const std::vector<Variable>& keep);

ProbabilisticTeam scaled_union(const ProbabilisticTeam& y, const ProbabilisticTeam& z,
                               const Rational& k);
ProbabilisticTeam plain_union(const ProbabilisticTeam& y, const ProbabilisticTeam& z);

// X[A/x]. If x is already in the domain its column is overwritten.
ProbabilisticTeam duplicate(const ProbabilisticTeam& team, const std::vector<Value>& universe,
                            const Variable& x);
// X[F/x].
ProbabilisticTeam extend(const ProbabilisticTeam& team, const ExtensionChoice& choice,
                         const Variable& x);

ProbabilisticTeam normalize(const ProbabilisticTeam& team);
ProbabilisticTeam scale(const ProbabilisticTeam& team, const Rational& factor);

std::vector<Tuple> support(const ProbabilisticTeam& team);

// Marginal distribution of a variable tuple over the support.
std::map<Tuple, Rational> marginal(const ProbabilisticTeam& team,
                                   const std::vector<Variable>& vars);

}  // namespace pts
