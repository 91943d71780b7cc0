#pragma once

#include <string>
#include <vector>

#include "pts/team.hpp"

namespace pts {

// A variable or a structure constant (written #name).
struct Term {
  std::string name;
  bool constant = false;

  bool operator==(const Term& o) const { return name == o.name && constant == o.constant; }
  bool operator<(const Term& o) const {
    return constant != o.constant ? constant < o.constant : name < o.name;
  }
};

inline Term var_term(std::string name) { return Term{std::move(name), false}; }
inline Term const_term(std::string name) { return Term{std::move(name), true}; }

struct Literal {
  enum class Kind { Eq, Neq, Rel, NegRel };
  Kind kind = Kind::Eq;
  std::string relation;     // Rel / NegRel only
  std::vector<Term> args;   // two terms for Eq / Neq
};

// Binds the literal's variables to positions of a fixed domain so it can be
// evaluated on many rows.
class BoundLiteral {
 public:
  BoundLiteral(const Literal& lit, const Structure& s, const std::vector<Variable>& domain);
  bool holds(const Tuple& row) const;

 private:
  Literal::Kind kind_;
  const Relation* rel_ = nullptr;
  // Index into the row, or -1 with the value stored in consts_.
  std::vector<long> slots_;
  std::vector<Value> consts_;
};

}  // namespace pts
