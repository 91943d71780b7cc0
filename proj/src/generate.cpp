#include "pts/generate.hpp"

#include <algorithm>
#include <array>

#include "pts/checker.hpp"
#include "pts/errors.hpp"

namespace pts {

ProbabilisticTeam random_team(const std::vector<Value>& universe, const std::vector<Variable>& vars,
                              std::size_t max_rows, Rng& rng, int max_denominator) {
  if (universe.empty()) throw InputError("random_team needs a nonempty universe");
  std::size_t space = 1;
  for (std::size_t i = 0; i < vars.size() && space <= max_rows; ++i) space *= universe.size();
  std::size_t n = std::uniform_int_distribution<std::size_t>(1, std::max<std::size_t>(1, std::min(max_rows, space)))(rng);
  std::set<Tuple> seen;
  std::vector<Row> rows;
  std::uniform_int_distribution<std::size_t> val(0, universe.size() - 1);
  std::uniform_int_distribution<int> den(1, max_denominator);
  while (rows.size() < n) {
    Tuple t;
    for (std::size_t i = 0; i < vars.size(); ++i) t.push_back(universe[val(rng)]);
    if (!seen.insert(t).second) continue;
    int d = den(rng);
    int k = std::uniform_int_distribution<int>(0, d)(rng);
    rows.push_back({std::move(t), make_rational(k, d)});
  }
  return ProbabilisticTeam(vars, std::move(rows));
}

ProbabilisticTeam random_team(const std::vector<Value>& universe, const std::vector<Variable>& vars,
                              std::size_t max_rows, std::uint64_t seed, int max_denominator) {
  Rng rng(seed);
  return random_team(universe, vars, max_rows, rng, max_denominator);
}

namespace {

class FormulaGen {
 public:
  FormulaGen(const FormulaGenOptions& opts, Rng& rng) : opts_(opts), rng_(rng) {}

  Formula gen(std::vector<Variable> scope, std::size_t depth) {
    std::vector<unsigned> choices;
    for (unsigned k : {kGenEquality, kGenProp, kGenIdentity, kGenEquiv, kGenIndep, kGenCondIndep,
                       kGenDep, kGenConst})
      if ((opts_.kinds & k) && !scope.empty()) choices.push_back(k);
    if (depth > 0)
      for (unsigned k : {kGenAnd, kGenOr, kGenExists, kGenForall, kGenNeg})
        if (opts_.kinds & k) choices.push_back(k);
    if (choices.empty()) throw InputError("formula generator has nothing to generate");
    unsigned k = choices[pick(choices.size())];
    switch (k) {
      case kGenEquality: {
        Variable a = one(scope), b = one(scope);
        return coin() ? f_eq(var_term(a), var_term(b)) : f_neq(var_term(a), var_term(b));
      }
      case kGenProp:
        return f_prop(one(scope), coin());
      case kGenIdentity: {
        std::size_t n = 1 + pick(std::min(opts_.max_tuple, scope.size()));
        return f_mi(tuple(scope, n), tuple(scope, n));
      }
      case kGenEquiv:
        return f_me(tuple(scope, 1 + pick(std::min(opts_.max_tuple, scope.size()))),
                    tuple(scope, 1 + pick(std::min(opts_.max_tuple, scope.size()))));
      case kGenIndep:
        return f_ci({}, tuple(scope, 1 + pick(std::min(opts_.max_tuple, scope.size()))),
                    tuple(scope, 1 + pick(std::min(opts_.max_tuple, scope.size()))));
      case kGenCondIndep:
        return f_ci(tuple(scope, 1 + pick(std::min(opts_.max_tuple, scope.size()))),
                    tuple(scope, 1 + pick(std::min(opts_.max_tuple, scope.size()))),
                    tuple(scope, 1 + pick(std::min(opts_.max_tuple, scope.size()))));
      case kGenDep:
        return f_dep(tuple(scope, pick(std::min(opts_.max_tuple, scope.size()) + 1)),
                     tuple(scope, 1 + pick(std::min(opts_.max_tuple, scope.size()))));
      case kGenConst:
        return f_const(tuple(scope, 1 + pick(std::min(opts_.max_tuple, scope.size()))));
      case kGenAnd:
        return f_and(gen(scope, depth - 1), gen(scope, depth - 1));
      case kGenOr:
        return f_or(gen(scope, depth - 1), gen(scope, depth - 1));
      case kGenExists:
      case kGenForall: {
        Variable b = "b" + std::to_string(++bound_);
        scope.push_back(b);
        Formula body = gen(scope, depth - 1);
        return k == kGenExists ? f_exists(b, body) : f_forall(b, body);
      }
      default:
        return f_neg(gen(scope, depth - 1));
    }
  }

 private:
  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool coin() { return pick(2) == 0; }
  Variable one(const std::vector<Variable>& scope) { return scope[pick(scope.size())]; }
  // n distinct variables.
  std::vector<Variable> tuple(std::vector<Variable> scope, std::size_t n) {
    std::shuffle(scope.begin(), scope.end(), rng_);
    scope.resize(std::min(n, scope.size()));
    return scope;
  }

  const FormulaGenOptions& opts_;
  Rng& rng_;
  int bound_ = 0;
};

}  // namespace

Formula random_formula(const FormulaGenOptions& opts, Rng& rng) {
  FormulaGen g(opts, rng);
  return g.gen(opts.vars, opts.max_depth);
}

namespace {

bool is_counterexample(const std::vector<Formula>& sigma, const Formula& target,
                       const ProbabilisticTeam& team) {
  Structure s = Structure::binary();
  for (const auto& f : sigma)
    if (!check(s, team, f).is_true()) return false;
  return check(s, team, target).is_false();
}

}  // namespace

std::optional<ProbabilisticTeam> refute_implication(const std::vector<Formula>& sigma,
                                                    const Formula& target,
                                                    const std::vector<Variable>& props,
                                                    std::size_t trials, std::uint64_t seed) {
  if (props.size() > 16) throw InputError("too many propositions for the refuter");
  std::size_t n = std::size_t{1} << props.size();
  auto tuple_of = [&](std::size_t i) {
    Tuple t;
    for (std::size_t b = props.size(); b-- > 0;) t.push_back((i >> b) & 1 ? "1" : "0");
    return t;
  };
  // Uniform distributions on supports of size 1..3, lexicographic within a size.
  std::size_t tried = 0;
  for (std::size_t size = 1; size <= std::min<std::size_t>(3, n); ++size) {
    std::vector<std::size_t> idx(size);
    for (std::size_t i = 0; i < size; ++i) idx[i] = i;
    for (;;) {
      if (++tried > trials) break;
      std::vector<Row> rows;
      for (std::size_t i : idx) rows.push_back({tuple_of(i), make_rational(1, static_cast<long>(size))});
      ProbabilisticTeam team(props, std::move(rows));
      if (is_counterexample(sigma, target, team)) return team;
      std::size_t k = size;
      while (k > 0 && idx[k - 1] == n - size + k - 1) --k;
      if (k == 0) break;
      ++idx[k - 1];
      for (std::size_t j = k; j < size; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  Rng rng(seed);
  for (; tried < trials; ++tried) {
    ProbabilisticTeam team = random_team({"0", "1"}, props, n, rng);
    if (is_zero(team.total_weight())) continue;
    if (is_counterexample(sigma, target, team)) return normalize(team.compact());
  }
  return std::nullopt;
}

bool implied_by_symmetry(const std::vector<Formula>& sigma, const Formula& target) {
  using Key = std::array<std::vector<Variable>, 3>;
  auto key = [](const Formula& f) -> std::optional<Key> {
    if (f->kind != Kind::CondIndep) return std::nullopt;
    Key k{f->x, f->y, f->z};
    for (auto& t : k) std::sort(t.begin(), t.end());
    if (k[2] < k[1]) std::swap(k[1], k[2]);
    return k;
  };
  auto t = key(target);
  if (!t) return false;
  return std::any_of(sigma.begin(), sigma.end(), [&](const Formula& s) { return key(s) == t; });
}

}  // namespace pts
