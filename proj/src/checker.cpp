#include "pts/checker.hpp"

#include <algorithm>

#include "pts/atoms.hpp"
#include "pts/compile.hpp"
#include "pts/engine.hpp"
#include "pts/errors.hpp"
#include "pts/rewrite.hpp"
#include "pts/syntax.hpp"

namespace pts {

std::string to_string(Verdict::Value v) {
  switch (v) {
    case Verdict::Value::True:
      return "true";
    case Verdict::Value::False:
      return "false";
    case Verdict::Value::Unknown:
      return "unknown";
  }
  return "unknown";
}

Strategy parse_strategy(const std::string& text) {
  if (text == "auto") return Strategy::Auto;
  if (text == "flat") return Strategy::Flat;
  if (text == "direct") return Strategy::Direct;
  if (text == "compile") return Strategy::Compile;
  if (text == "witness-search") return Strategy::WitnessSearch;
  throw ConfigError("unknown strategy '" + text +
                    "' (expected auto, flat, direct, compile or witness-search)");
}

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::Auto:
      return "auto";
    case Strategy::Flat:
      return "flat";
    case Strategy::Direct:
      return "direct";
    case Strategy::Compile:
      return "compile";
    case Strategy::WitnessSearch:
      return "witness-search";
  }
  return "auto";
}

namespace {

Verdict make(bool b, std::string reason, std::string witness = "") {
  return {b ? Verdict::Value::True : Verdict::Value::False, std::move(reason), std::move(witness)};
}

Verdict unknown(std::string reason) { return {Verdict::Value::Unknown, std::move(reason), ""}; }

Verdict from_solver(const SolverVerdict& v, const std::string& step) {
  if (v.unknown()) return unknown(step + ": unknown (" + v.reason + ")");
  Verdict out = make(v.sat(), step + ": " + (v.sat() ? "true" : "false"));
  if (v.sat() && v.model) {
    std::string w;
    for (const auto& [name, value] : *v.model) w += (w.empty() ? "" : " ") + name + "=" + to_string(value);
    out.witness = w;
  }
  return out;
}

std::vector<Variable> sorted_free(const Formula& f) {
  auto s = free_vars(f);
  return {s.begin(), s.end()};
}

// Replaces every =~* atom by its =~/dep definition so the compiler accepts it.
Formula drop_equivalence(const Formula& f, FreshNameSource& fresh) {
  if (f->kind == Kind::MarginalEquiv) return equiv_to_identity_dep(f, fresh);
  if (f->kids.empty()) return f;
  auto n = std::make_shared<Node>(*f);
  for (auto& k : n->kids) k = drop_equivalence(k, fresh);
  return n;
}

void check_domain(const ProbabilisticTeam& team, const Formula& f) {
  for (const auto& v : free_vars(f))
    if (!team.has_variable(v))
      throw DomainError("free variable " + v + " of " + print(f) + " is not in the team domain");
}

class Checker {
 public:
  Checker(const Structure& s, const CheckOptions& opts, Strategy strat)
      : s_(s), opts_(opts), strat_(strat) {}

  Verdict run(const ProbabilisticTeam& team, const Formula& f) {
    if (is_pure_fo(f)) return eval_flat(s_, team, f);
    switch (f->kind) {
      case Kind::MarginalIdentity: {
        auto v = eval_marginal_identity(team, f->x, f->y);
        return make(v.holds, "atom " + print(f) + ": " + (v.holds ? "true" : "false"), describe_witness(v));
      }
      case Kind::MarginalEquiv: {
        auto v = eval_marginal_equivalence(team, f->x, f->y);
        return make(v.holds, "atom " + print(f) + ": " + (v.holds ? "true" : "false"), describe_witness(v));
      }
      case Kind::CondIndep: {
        auto v = eval_conditional_independence(team, f->x, f->y, f->z);
        return make(v.holds, "atom " + print(f) + ": " + (v.holds ? "true" : "false"), describe_witness(v));
      }
      case Kind::Dep:
      case Kind::Constancy: {
        auto v = f->kind == Kind::Dep ? eval_dependence(team, f->x, f->y) : eval_dependence(team, {}, f->x);
        return make(v.holds, "atom " + print(f) + ": " + (v.holds ? "true" : "false"), describe_witness(v));
      }
      case Kind::And: {
        Verdict a = run(team, f->kids[0]);
        if (a.is_false()) return a;
        Verdict b = run(team, f->kids[1]);
        if (b.is_false()) return b;
        std::string reason = a.reason + "\n" + b.reason;
        if (a.is_unknown() || b.is_unknown()) return unknown(reason);
        return make(true, reason);
      }
      case Kind::Forall: {
        auto keep = sorted_free(f);
        ProbabilisticTeam dup = duplicate(restrict(team, keep), s_.universe, f->name);
        return run(dup, f->kids[0]);
      }
      case Kind::ClassicalNeg: {
        Verdict v = run(team, f->kids[0]);
        v.reason += "\nnegation " + print(f) + ": " + to_string(v.is_unknown() ? v.value
                                                             : v.is_true() ? Verdict::Value::False
                                                                           : Verdict::Value::True);
        v.witness.clear();
        if (v.is_true())
          v.value = Verdict::Value::False;
        else if (v.is_false())
          v.value = Verdict::Value::True;
        return v;
      }
      case Kind::Or:
      case Kind::Exists:
        return choice(team, f);
      default:
        throw PreconditionError("unexpected node in " + print(f));
    }
  }

  Verdict compiled(const ProbabilisticTeam& team, const Formula& f) {
    ProbabilisticTeam t = restrict(team, sorted_free(f));
    FreshNameSource fresh(f);
    Formula g = drop_equivalence(f, fresh);
    ArithSentence sentence = compile_team_check(s_, t, g, opts_.strict_vocabulary);
    return from_solver(solve(sentence, opts_.solver), "compiled " + print(f));
  }

  Verdict choice(const ProbabilisticTeam& team, const Formula& f) {
    switch (strat_) {
      case Strategy::Direct:
        return compiled(team, f);
      case Strategy::WitnessSearch:
        return search(team, f);
      default:
        break;
    }
    EngineOptions eo;
    eo.solver = opts_.solver;
    Engine engine(s_, eo);
    try {
      return from_solver(engine.decide(team, f), "engine " + print(f));
    } catch (const EngineFallback& e) {
      Verdict v = compiled(team, f);
      v.reason = std::string("engine fallback (") + e.what() + ")\n" + v.reason;
      return v;
    }
  }

  Verdict search(const ProbabilisticTeam& team, const Formula& f);

 private:
  bool spend() { return ++steps_ <= opts_.witness_budget; }

  const Structure& s_;
  const CheckOptions& opts_;
  Strategy strat_;
  std::size_t steps_ = 0;
};

Verdict Checker::search(const ProbabilisticTeam& full, const Formula& f) {
  ProbabilisticTeam team = restrict(full, sorted_free(f)).compact();
  const auto& dom = team.domain();
  auto env_of = [&](const Row& r) {
    std::map<Variable, Value> env;
    for (std::size_t i = 0; i < dom.size(); ++i) env[dom[i]] = r.values[i];
    return env;
  };
  if (f->kind == Kind::Or) {
    Formula ga = flat_guard(f->kids[0]), gb = flat_guard(f->kids[1]);
    std::vector<Row> left, right;
    std::vector<std::size_t> open;
    for (std::size_t i = 0; i < team.rows().size(); ++i) {
      const Row& r = team.rows()[i];
      auto env = env_of(r);
      bool a = !ga || holds_tarski(ga, s_, env);
      bool b = !gb || holds_tarski(gb, s_, env);
      if (a && b)
        open.push_back(i);
      else if (a)
        left.push_back(r);
      else if (b)
        right.push_back(r);
      else
        return unknown("witness search " + print(f) + ": a row satisfies neither guard");
    }
    if (open.size() >= 63) return unknown("witness search " + print(f) + ": budget");
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << open.size()); ++mask) {
      if (!spend()) return unknown("witness search " + print(f) + ": budget");
      std::vector<Row> l = left, r = right;
      for (std::size_t j = 0; j < open.size(); ++j)
        ((mask >> j) & 1 ? r : l).push_back(team.rows()[open[j]]);
      Verdict va = run(ProbabilisticTeam(dom, std::move(l)), f->kids[0]);
      if (!va.is_true()) continue;
      Verdict vb = run(ProbabilisticTeam(dom, std::move(r)), f->kids[1]);
      if (vb.is_true()) return make(true, "witness search " + print(f) + ": split found\n" + va.reason + "\n" + vb.reason);
    }
    return unknown("witness search " + print(f) + ": no split found");
  }
  if (f->kind == Kind::Exists) {
    Formula guard = flat_guard(f->kids[0]);
    std::vector<std::vector<Value>> options;
    for (const auto& r : team.rows()) {
      auto env = env_of(r);
      std::vector<Value> ok;
      for (const auto& a : s_.universe) {
        env[f->name] = a;
        if (!guard || holds_tarski(guard, s_, env)) ok.push_back(a);
      }
      if (ok.empty()) return unknown("witness search " + print(f) + ": a row has no admissible value");
      options.push_back(std::move(ok));
    }
    std::vector<std::size_t> pick(options.size(), 0);
    for (;;) {
      if (!spend()) return unknown("witness search " + print(f) + ": budget");
      ExtensionChoice choice;
      for (std::size_t i = 0; i < pick.size(); ++i)
        choice[team.rows()[i].values][options[i][pick[i]]] = 1;
      Verdict v = run(extend(team, choice, f->name), f->kids[0]);
      if (v.is_true()) {
        std::string w;
        for (std::size_t i = 0; i < pick.size(); ++i) {
          std::string row;
          for (const auto& x : team.rows()[i].values) row += (row.empty() ? "" : ",") + x;
          w += (w.empty() ? "" : " ") + std::string("(") + row + ")->" + options[i][pick[i]];
        }
        return make(true, "witness search " + print(f) + ": Dirac extension found\n" + v.reason, w);
      }
      std::size_t k = 0;
      while (k < pick.size() && ++pick[k] == options[k].size()) pick[k++] = 0;
      if (k == pick.size()) break;
    }
    return unknown("witness search " + print(f) + ": no Dirac extension found");
  }
  return run(team, f);
}

}  // namespace

Verdict eval_flat(const Structure& structure, const ProbabilisticTeam& team, const Formula& f) {
  if (!is_pure_fo(f)) throw StrategyError("flat evaluation needs a pure first-order formula: " + print(f));
  check_domain(team, f);
  const auto& dom = team.domain();
  for (const auto& r : team.rows()) {
    if (is_zero(r.weight)) continue;
    std::map<Variable, Value> env;
    for (std::size_t i = 0; i < dom.size(); ++i) env[dom[i]] = r.values[i];
    if (!holds_tarski(f, structure, env)) {
      std::string row;
      for (const auto& v : r.values) row += (row.empty() ? "" : ",") + v;
      return make(false, "flat " + print(f) + ": false", "(" + row + ")");
    }
  }
  return make(true, "flat " + print(f) + ": true");
}

Verdict check(const Structure& structure, const ProbabilisticTeam& team, const Formula& f,
              Strategy strategy, const CheckOptions& opts) {
  Formula g = expand_sugar(f);
  check_domain(team, g);
  for (const auto& r : team.rows())
    for (const auto& v : r.values)
      if (!structure.has_value(v)) throw DomainError("team value " + v + " is not in the universe");
  Checker c(structure, opts, strategy);
  switch (strategy) {
    case Strategy::Flat:
      return eval_flat(structure, team, g);
    case Strategy::Compile:
      return c.compiled(team, g);
    default:
      return c.run(team, g);
  }
}

Verdict witness_search(const Structure& structure, const ProbabilisticTeam& team, const Formula& f,
                       const CheckOptions& opts) {
  Formula g = expand_sugar(f);
  check_domain(team, g);
  Checker c(structure, opts, Strategy::WitnessSearch);
  return c.search(team, g);
}

}  // namespace pts
