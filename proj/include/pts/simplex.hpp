#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "pts/rational.hpp"

namespace pts {

// c + k*delta for an infinitesimal delta > 0; strict bounds use k = +-1.
struct DeltaRational {
  Rational c, k;
  bool operator<(const DeltaRational& o) const { return c != o.c ? c < o.c : k < o.k; }
  bool operator>(const DeltaRational& o) const { return o < *this; }
  bool operator<=(const DeltaRational& o) const { return !(o < *this); }
  bool operator==(const DeltaRational& o) const { return c == o.c && k == o.k; }
};

// Feasibility of bounded linear equalities, in the general form used by SMT
// solvers: every row defines a basic variable as a combination of nonbasic
// ones, bounds live on variables. Exact rationals; Bland's rule.
class Simplex {
 public:
  int add_var();
  void set_lower(int v, const Rational& bound, bool strict = false);
  void set_upper(int v, const Rational& bound, bool strict = false);
  // Adds a variable equal to the given combination of existing variables.
  int add_row(const std::map<int, Rational>& expr);

  bool check();
  // Concrete values after a successful check, with delta chosen small enough.
  std::vector<Rational> model() const;
  std::size_t pivots() const { return pivots_; }

 private:
  bool below_lower(int v) const { return lower_[v] && values_[v] < *lower_[v]; }
  bool above_upper(int v) const { return upper_[v] && values_[v] > *upper_[v]; }
  void update(int j, const DeltaRational& v);
  void pivot_and_update(int i, int j, const DeltaRational& v);

  std::vector<std::optional<DeltaRational>> lower_, upper_;
  std::vector<DeltaRational> values_;
  std::vector<bool> basic_;
  std::vector<std::map<int, Rational>> row_;
  std::vector<std::set<int>> col_;
  std::set<int> basics_;
  bool conflict_ = false;
  std::size_t pivots_ = 0;
};

}  // namespace pts
