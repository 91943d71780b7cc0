#include "pts/engine.hpp"

#include <algorithm>
#include <functional>

#include "pts/atoms.hpp"
#include "pts/errors.hpp"

namespace pts {

namespace {

const Value& term_value(const Term& t, const Structure& s, const std::map<Variable, Value>& env) {
  if (t.constant) {
    auto it = s.constants.find(t.name);
    if (it == s.constants.end()) throw DomainError("unknown constant #" + t.name);
    return it->second;
  }
  auto it = env.find(t.name);
  if (it == env.end()) throw DomainError("unassigned variable " + t.name);
  return it->second;
}

bool relation_holds(const Structure& s, const std::string& rel, const std::vector<Term>& args,
                    const std::map<Variable, Value>& env) {
  auto it = s.relations.find(rel);
  if (it == s.relations.end()) throw DomainError("unknown relation " + rel);
  if (it->second.arity != args.size()) throw DomainError("arity mismatch for relation " + rel);
  Tuple t;
  for (const auto& a : args) t.push_back(term_value(a, s, env));
  return it->second.tuples.count(t) > 0;
}

}  // namespace

bool holds_tarski(const Formula& f, const Structure& s, std::map<Variable, Value>& env) {
  switch (f->kind) {
    case Kind::VarEq:
      return term_value(f->terms[0], s, env) == term_value(f->terms[1], s, env);
    case Kind::VarNeq:
      return term_value(f->terms[0], s, env) != term_value(f->terms[1], s, env);
    case Kind::Rel:
      return relation_holds(s, f->name, f->terms, env);
    case Kind::NegRel:
      return !relation_holds(s, f->name, f->terms, env);
    case Kind::PropLit:
      return relation_holds(s, "P", {var_term(f->name)}, env) == f->positive;
    case Kind::And:
      return holds_tarski(f->kids[0], s, env) && holds_tarski(f->kids[1], s, env);
    case Kind::Or:
      return holds_tarski(f->kids[0], s, env) || holds_tarski(f->kids[1], s, env);
    case Kind::Exists:
    case Kind::Forall: {
      bool want = f->kind == Kind::Exists;
      auto old = env.find(f->name);
      std::optional<Value> saved;
      if (old != env.end()) saved = old->second;
      bool result = !want;
      for (const auto& a : s.universe) {
        env[f->name] = a;
        if (holds_tarski(f->kids[0], s, env) == want) {
          result = want;
          break;
        }
      }
      if (saved)
        env[f->name] = *saved;
      else
        env.erase(f->name);
      return result;
    }
    default:
      throw PreconditionError("Tarskian evaluation needs a pure first-order formula");
  }
}

Formula flat_guard(const Formula& f) {
  if (is_pure_fo(f)) return f;
  switch (f->kind) {
    case Kind::And: {
      Formula a = flat_guard(f->kids[0]), b = flat_guard(f->kids[1]);
      if (!a) return b;
      if (!b) return a;
      return f_and(a, b);
    }
    case Kind::Or: {
      Formula a = flat_guard(f->kids[0]), b = flat_guard(f->kids[1]);
      if (!a || !b) return nullptr;
      return f_or(a, b);
    }
    case Kind::Exists:
    case Kind::Forall: {
      Formula g = flat_guard(f->kids[0]);
      if (!g) return nullptr;
      return f->kind == Kind::Exists ? f_exists(f->name, g) : f_forall(f->name, g);
    }
    default:
      return nullptr;
  }
}

std::vector<std::set<Variable>> determiners(const Formula& f, const Variable& v) {
  auto has = [&](const std::vector<Variable>& t) { return std::find(t.begin(), t.end(), v) != t.end(); };
  switch (f->kind) {
    case Kind::Dep:
      if (has(f->y)) return {std::set<Variable>(f->x.begin(), f->x.end())};
      return {};
    case Kind::Constancy:
      if (has(f->x)) return {{}};
      return {};
    case Kind::CondIndep:
      // v on both independent sides is independent of itself given x.
      if (has(f->y) && has(f->z)) return {std::set<Variable>(f->x.begin(), f->x.end())};
      return {};
    case Kind::VarEq: {
      std::vector<std::set<Variable>> out;
      for (int i = 0; i < 2; ++i) {
        const Term &a = f->terms[i], &b = f->terms[1 - i];
        if (a.constant || a.name != v) continue;
        if (b.constant)
          out.push_back({});
        else if (b.name != v)
          out.push_back({b.name});
      }
      return out;
    }
    case Kind::And: {
      auto a = determiners(f->kids[0], v), b = determiners(f->kids[1], v);
      a.insert(a.end(), b.begin(), b.end());
      return a;
    }
    case Kind::Exists: {
      if (f->name == v) return {};
      std::vector<std::set<Variable>> out;
      for (auto& u : determiners(f->kids[0], v))
        if (!u.count(f->name)) out.push_back(std::move(u));
      return out;
    }
    case Kind::Forall: {
      if (f->name == v) return {};
      auto out = determiners(f->kids[0], v);
      for (auto& u : out) u.erase(f->name);
      return out;
    }
    default:
      return {};
  }
}

bool Engine::SymTeam::concrete() const {
  return std::all_of(rows.begin(), rows.end(), [](const SymRow& r) { return r.weight.is_constant(); });
}

Engine::Engine(const Structure& structure, EngineOptions opts)
    : structure_(structure), opts_(std::move(opts)) {
  if (structure_.universe.empty()) throw InputError("structure has an empty universe");
}

VarId Engine::fresh_unknown() {
  if (vars_.size() >= opts_.max_unknowns) throw EngineFallback("too many unknowns");
  return vars_.add("u" + std::to_string(fresh_names_++));
}

Engine::SymTeam Engine::restrict_to(const SymTeam& t, const std::set<Variable>& keep) const {
  SymTeam out;
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < t.domain.size(); ++i)
    if (keep.count(t.domain[i])) {
      out.domain.push_back(t.domain[i]);
      idx.push_back(i);
    }
  if (out.domain.size() == t.domain.size()) return t;
  std::map<Tuple, LinExpr> acc;
  for (const auto& r : t.rows) {
    Tuple v;
    for (std::size_t i : idx) v.push_back(r.values[i]);
    acc[v] += r.weight;
  }
  for (auto& [v, w] : acc) out.rows.push_back({v, std::move(w)});
  return out;
}

std::map<Variable, Value> Engine::env_of(const SymTeam& t, const SymRow& r) const {
  std::map<Variable, Value> env;
  for (std::size_t i = 0; i < t.domain.size(); ++i) env[t.domain[i]] = r.values[i];
  return env;
}

bool Engine::guard_holds(const Formula& guard, std::map<Variable, Value>& env) const {
  return !guard || holds_tarski(guard, structure_, env);
}

ProbabilisticTeam Engine::to_team(const SymTeam& t) const {
  std::vector<Row> rows;
  for (const auto& r : t.rows) rows.push_back({r.values, r.weight.constant});
  return ProbabilisticTeam::accumulate(t.domain, std::move(rows));
}

namespace {

ArithFormula is_zero_formula(const LinExpr& e) {
  if (e.is_constant()) return is_zero(e.constant) ? a_true() : a_false();
  return a_eq(to_term(e), t_const(0));
}

ArithFormula truth(bool b) { return b ? a_true() : a_false(); }

std::set<Variable> set_of(const std::vector<Variable>& v) { return {v.begin(), v.end()}; }

}  // namespace

ArithFormula Engine::eval_flat(const Formula& f, const SymTeam& t) {
  std::vector<ArithFormula> out;
  for (const auto& r : t.rows) {
    if (r.weight.is_constant() && is_zero(r.weight.constant)) continue;
    auto env = env_of(t, r);
    if (!holds_tarski(f, structure_, env)) {
      ArithFormula z = is_zero_formula(r.weight);
      if (z.kind == ArithFormula::Kind::False) return z;
      out.push_back(std::move(z));
    }
  }
  return a_and(std::move(out));
}

ArithFormula Engine::eval_atom(const Formula& f, const SymTeam& t) {
  if (f->kind == Kind::MarginalEquiv && t.concrete())
    return truth(eval_marginal_equivalence(to_team(t), f->x, f->y).holds);
  if (t.concrete()) {
    ProbabilisticTeam team = to_team(t);
    switch (f->kind) {
      case Kind::MarginalIdentity:
        return truth(eval_marginal_identity(team, f->x, f->y).holds);
      case Kind::CondIndep:
        return truth(eval_conditional_independence(team, f->x, f->y, f->z).holds);
      case Kind::Dep:
        return truth(eval_dependence(team, f->x, f->y).holds);
      case Kind::Constancy:
        return truth(eval_dependence(team, {}, f->x).holds);
      default:
        break;
    }
  }
  auto project = [&](const SymRow& r, const std::vector<std::size_t>& idx) {
    Tuple v;
    for (std::size_t i : idx) v.push_back(r.values[i]);
    return v;
  };
  auto indices = [&](const std::vector<Variable>& vars) {
    std::vector<std::size_t> idx;
    for (const auto& v : vars) {
      auto it = std::find(t.domain.begin(), t.domain.end(), v);
      if (it == t.domain.end()) throw DomainError("variable " + v + " is not in the team domain");
      idx.push_back(static_cast<std::size_t>(it - t.domain.begin()));
    }
    return idx;
  };
  auto marginals = [&](const std::vector<Variable>& vars) {
    auto idx = indices(vars);
    std::map<Tuple, LinExpr> m;
    for (const auto& r : t.rows) m[project(r, idx)] += r.weight;
    return m;
  };
  std::vector<ArithFormula> out;
  switch (f->kind) {
    case Kind::MarginalIdentity: {
      auto mx = marginals(f->x), my = marginals(f->y);
      std::set<Tuple> keys;
      for (const auto& [k, w] : mx) keys.insert(k);
      for (const auto& [k, w] : my) keys.insert(k);
      for (const auto& k : keys) {
        LinExpr d;
        if (auto it = mx.find(k); it != mx.end()) d += it->second;
        if (auto it = my.find(k); it != my.end()) d -= it->second;
        out.push_back(is_zero_formula(d));
      }
      return a_and(std::move(out));
    }
    case Kind::MarginalEquiv: {
      // Some matching pairs the positive x-cells with the positive y-cells of
      // equal weight; every other cell weighs 0. Cells with identical weight
      // expressions are interchangeable, so they are used in index order.
      std::vector<LinExpr> mx, my;
      for (auto& [k, w] : marginals(f->x)) mx.push_back(std::move(w));
      for (auto& [k, w] : marginals(f->y)) my.push_back(std::move(w));
      auto constant_cells = [](const std::vector<LinExpr>& v) {
        return std::count_if(v.begin(), v.end(), [](const LinExpr& e) { return e.is_constant(); });
      };
      if (constant_cells(my) > constant_cells(mx)) std::swap(mx, my);
      std::vector<std::size_t> twin(mx.size());
      for (std::size_t i = 0; i < mx.size(); ++i) {
        twin[i] = i;
        for (std::size_t k = 0; k < i; ++k)
          if (mx[k] == mx[i]) twin[i] = k;
      }
      // Positive constant x-cells that are still unmatched.
      std::size_t pending = 0;
      std::vector<bool> must(mx.size(), false);
      for (std::size_t i = 0; i < mx.size(); ++i)
        if (mx[i].is_constant() && sgn(mx[i].constant) > 0) must[i] = true, ++pending;
      // One disjunction per y-cell, nested, so that a search can refute a
      // partial matching without expanding its completions.
      std::vector<bool> used(mx.size(), false);
      std::size_t nodes = 0;
      std::function<ArithFormula(std::size_t)> match = [&](std::size_t j) -> ArithFormula {
        if (++nodes > 16 * opts_.max_branches) throw EngineFallback("=~* matching budget");
        if (pending > my.size() - j) return a_false();
        if (j == my.size()) {
          std::vector<ArithFormula> rest;
          for (std::size_t i = 0; i < mx.size(); ++i)
            if (!used[i] && !must[i]) rest.push_back(is_zero_formula(mx[i]));
          return a_and(std::move(rest));
        }
        std::vector<ArithFormula> options;
        for (std::size_t i = 0; i < mx.size(); ++i) {
          if (used[i] || (twin[i] != i && !used[twin[i]])) continue;
          ArithFormula eq = is_zero_formula(mx[i] - my[j]);
          if (eq.kind == ArithFormula::Kind::False) continue;
          ArithFormula pos = my[j].is_constant() ? truth(sgn(my[j].constant) > 0)
                                                 : a_lt(t_const(0), to_term(my[j]));
          if (pos.kind == ArithFormula::Kind::False) continue;
          used[i] = true;
          pending -= must[i];
          ArithFormula tail = match(j + 1);
          pending += must[i];
          used[i] = false;
          std::vector<ArithFormula> conj;
          conj.push_back(std::move(eq));
          conj.push_back(std::move(pos));
          conj.push_back(std::move(tail));
          options.push_back(a_and(std::move(conj)));
        }
        ArithFormula zero = is_zero_formula(my[j]);
        if (zero.kind != ArithFormula::Kind::False) {
          std::vector<ArithFormula> conj;
          conj.push_back(std::move(zero));
          conj.push_back(match(j + 1));
          options.push_back(a_and(std::move(conj)));
        }
        return a_or(std::move(options));
      };
      return match(0);
    }
    case Kind::Dep:
    case Kind::Constancy: {
      const auto& x = f->kind == Kind::Dep ? f->x : std::vector<Variable>{};
      const auto& y = f->kind == Kind::Dep ? f->y : f->x;
      auto ix = indices(x), iy = indices(y);
      std::map<Tuple, std::map<Tuple, LinExpr>> groups;
      for (const auto& r : t.rows) groups[project(r, ix)][project(r, iy)] += r.weight;
      for (const auto& [gx, classes] : groups) {
        if (classes.size() < 2) continue;
        LinExpr total;
        for (const auto& [c, w] : classes) total += w;
        std::vector<ArithFormula> options;
        for (const auto& [c, w] : classes) options.push_back(is_zero_formula(total - w));
        out.push_back(a_or(std::move(options)));
      }
      return a_and(std::move(out));
    }
    case Kind::CondIndep: {
      // Var(xyz) as a set; every assignment with both its xy- and its
      // xz-part occurring gives one product equation, the rest are 0 = 0.
      std::vector<Variable> all;
      for (const auto* part : {&f->x, &f->y, &f->z})
        for (const auto& v : *part)
          if (std::find(all.begin(), all.end(), v) == all.end()) all.push_back(v);
      auto sub = [&](const std::vector<Variable>& a, const std::vector<Variable>& b) {
        std::vector<Variable> out_vars;
        for (const auto& v : all)
          if (std::find(a.begin(), a.end(), v) != a.end() || std::find(b.begin(), b.end(), v) != b.end())
            out_vars.push_back(v);
        return out_vars;
      };
      auto vxy = sub(f->x, f->y), vxz = sub(f->x, f->z), vx = sub(f->x, {});
      auto mxy = marginals(vxy), mxz = marginals(vxz), mx = marginals(vx), mall = marginals(all);
      auto lookup = [](const std::map<Tuple, LinExpr>& m, const Tuple& k) {
        auto it = m.find(k);
        return it == m.end() ? LinExpr() : it->second;
      };
      auto pick = [&](const std::map<Variable, Value>& s, const std::vector<Variable>& vs) {
        Tuple out_t;
        for (const auto& v : vs) out_t.push_back(s.at(v));
        return out_t;
      };
      for (const auto& [kxy, wxy] : mxy)
        for (const auto& [kxz, wxz] : mxz) {
          std::map<Variable, Value> s;
          bool ok = true;
          for (std::size_t i = 0; i < vxy.size(); ++i) s[vxy[i]] = kxy[i];
          for (std::size_t i = 0; i < vxz.size() && ok; ++i) {
            auto [it, fresh] = s.emplace(vxz[i], kxz[i]);
            if (!fresh && it->second != kxz[i]) ok = false;
          }
          if (!ok) continue;
          LinExpr wall = lookup(mall, pick(s, all)), wx = lookup(mx, pick(s, vx));
          auto c = to_constraint(t_mul({to_term(wxy), to_term(wxz)}), t_mul({to_term(wall), to_term(wx)}),
                                 Rel::Eq);
          if (c->is_linear() && c->lin.is_constant()) {
            if (!is_zero(c->lin.constant)) return a_false();
            continue;
          }
          out.push_back(to_formula(*c));
        }
      return a_and(std::move(out));
    }
    default:
      throw PreconditionError("not an atom");
  }
}

ArithFormula Engine::eval_or(const Formula& f, const SymTeam& team) {
  SymTeam t = restrict_to(team, free_vars(f));
  Formula ga = flat_guard(f->kids[0]), gb = flat_guard(f->kids[1]);
  SymTeam left{t.domain, {}}, right{t.domain, {}};
  std::vector<ArithFormula> out;
  for (const auto& r : t.rows) {
    if (r.weight.is_constant() && is_zero(r.weight.constant)) continue;
    auto env = env_of(t, r);
    bool a = guard_holds(ga, env), b = guard_holds(gb, env);
    if (a && b) {
      VarId s = fresh_unknown();
      LinExpr ls = LinExpr::of_var(s);
      out.push_back(a_leq(t_const(0), t_var(s)));
      out.push_back(a_leq(t_var(s), to_term(r.weight)));
      left.rows.push_back({r.values, ls});
      right.rows.push_back({r.values, r.weight - ls});
    } else if (a) {
      left.rows.push_back(r);
    } else if (b) {
      right.rows.push_back(r);
    } else {
      ArithFormula z = is_zero_formula(r.weight);
      if (z.kind == ArithFormula::Kind::False) return z;
      out.push_back(std::move(z));
    }
  }
  ArithFormula l = eval(f->kids[0], left);
  if (l.kind == ArithFormula::Kind::False) return l;
  out.push_back(std::move(l));
  out.push_back(eval(f->kids[1], right));
  return a_and(std::move(out));
}

ArithFormula Engine::eval_forall(const Formula& f, const SymTeam& team) {
  SymTeam t = restrict_to(team, free_vars(f));
  SymTeam out;
  out.domain = t.domain;
  out.domain.push_back(f->name);
  Rational share(1, static_cast<long>(structure_.universe.size()));
  share.canonicalize();
  for (const auto& r : t.rows)
    for (const auto& a : structure_.universe) {
      Tuple v = r.values;
      v.push_back(a);
      out.rows.push_back({std::move(v), r.weight * share});
    }
  return eval(f->kids[0], out);
}

ArithFormula Engine::eval_exists(const Formula& f, const SymTeam& team) {
  // The maximal block of directly nested existentials over distinct variables.
  std::vector<Variable> block;
  Formula body = f;
  while (body->kind == Kind::Exists &&
         std::find(block.begin(), block.end(), body->name) == block.end()) {
    block.push_back(body->name);
    body = body->kids[0];
  }
  // A variable the body does not mention changes nothing (locality).
  auto body_free = free_vars(body);
  std::erase_if(block, [&](const Variable& v) { return !body_free.count(v); });
  SymTeam t = restrict_to(team, free_vars(f));
  std::set<Variable> available(t.domain.begin(), t.domain.end());

  // Block variables that the body makes functions of earlier ones are chosen
  // as Dirac extensions, enumerated per occurring determiner value.
  struct Forced {
    Variable v;
    std::vector<Variable> by;
  };
  std::vector<Forced> forced;
  std::vector<Variable> pending = block;
  for (bool progress = true; progress;) {
    progress = false;
    for (auto it = pending.begin(); it != pending.end(); ++it) {
      for (const auto& u : determiners(body, *it)) {
        if (!std::includes(available.begin(), available.end(), u.begin(), u.end())) continue;
        forced.push_back({*it, {u.begin(), u.end()}});
        available.insert(*it);
        pending.erase(it);
        progress = true;
        break;
      }
      if (progress) break;
    }
  }
  std::vector<Variable> free_block = pending;
  Formula guard = flat_guard(body);

  // Enumerate forced functions depth first; each complete choice yields one
  // disjunct.
  std::vector<ArithFormula> branches;
  std::size_t count = 0;
  std::function<void(std::size_t, const SymTeam&)> go = [&](std::size_t k, const SymTeam& cur) {
    if (k == forced.size()) {
      if (++count > opts_.max_branches) throw EngineFallback("existential enumeration budget");
      // Unforced variables: one unknown per row and allowed value combination.
      SymTeam ext;
      ext.domain = cur.domain;
      ext.domain.insert(ext.domain.end(), free_block.begin(), free_block.end());
      std::vector<ArithFormula> cons;
      std::size_t a = structure_.universe.size();
      std::size_t combos = 1;
      for (std::size_t i = 0; i < free_block.size(); ++i) combos *= a;
      for (const auto& r : cur.rows) {
        if (r.weight.is_constant() && is_zero(r.weight.constant)) continue;
        auto env = env_of(cur, r);
        std::vector<Tuple> allowed;
        for (std::size_t c = 0; c < combos; ++c) {
          Tuple vals(free_block.size());
          std::size_t code = c;
          for (std::size_t i = free_block.size(); i-- > 0;) {
            vals[i] = structure_.universe[code % a];
            code /= a;
          }
          for (std::size_t i = 0; i < free_block.size(); ++i) env[free_block[i]] = vals[i];
          if (guard_holds(guard, env)) allowed.push_back(std::move(vals));
        }
        if (allowed.empty()) {
          ArithFormula z = is_zero_formula(r.weight);
          if (z.kind == ArithFormula::Kind::False) {
            branches.push_back(z);
            return;
          }
          cons.push_back(std::move(z));
          continue;
        }
        if (allowed.size() == 1) {
          Tuple v = r.values;
          v.insert(v.end(), allowed[0].begin(), allowed[0].end());
          ext.rows.push_back({std::move(v), r.weight});
          continue;
        }
        // The last extension takes the remainder, so marginals that do not
        // mention the block stay as they were.
        LinExpr rest = r.weight;
        for (std::size_t k = 0; k < allowed.size(); ++k) {
          LinExpr w = rest;
          if (k + 1 < allowed.size()) {
            VarId u = fresh_unknown();
            w = LinExpr::of_var(u);
            rest -= w;
          }
          cons.push_back(a_leq(t_const(0), to_term(w)));
          Tuple v = r.values;
          v.insert(v.end(), allowed[k].begin(), allowed[k].end());
          ext.rows.push_back({std::move(v), std::move(w)});
        }
      }
      cons.push_back(eval(body, ext));
      branches.push_back(a_and(std::move(cons)));
      return;
    }
    const Forced& fv = forced[k];
    std::vector<std::size_t> idx;
    for (const auto& u : fv.by)
      idx.push_back(static_cast<std::size_t>(std::find(cur.domain.begin(), cur.domain.end(), u) -
                                             cur.domain.begin()));
    std::vector<Tuple> keys;
    for (const auto& r : cur.rows) {
      Tuple key;
      for (std::size_t i : idx) key.push_back(r.values[i]);
      if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
    }
    std::size_t a = structure_.universe.size();
    std::size_t total = 1;
    for (std::size_t i = 0; i < keys.size(); ++i) {
      total *= a;
      if (total > opts_.max_branches) throw EngineFallback("existential enumeration budget");
    }
    for (std::size_t code = 0; code < total; ++code) {
      std::map<Tuple, Value> g;
      std::size_t c = code;
      for (const auto& key : keys) {
        g[key] = structure_.universe[c % a];
        c /= a;
      }
      SymTeam next;
      next.domain = cur.domain;
      next.domain.push_back(fv.v);
      for (const auto& r : cur.rows) {
        Tuple key;
        for (std::size_t i : idx) key.push_back(r.values[i]);
        Tuple v = r.values;
        v.push_back(g.at(key));
        next.rows.push_back({std::move(v), r.weight});
      }
      go(k + 1, next);
    }
  };
  go(0, t);
  return a_or(std::move(branches));
}

SolverVerdict Engine::decide_constraints(const ArithFormula& c) {
  ExistsOptions eo;
  eo.try_relaxation_model = opts_.try_relaxation_model;
  if (!opts_.solver.command.empty()) {
    SolverConfig cfg = opts_.solver;
    eo.residue = [cfg](const ArithSentence& s) { return run_external(s, cfg); };
  }
  return decide_existential(c, vars_, eo);
}

ArithFormula Engine::eval_negation(const Formula& f, const SymTeam& t) {
  if (!t.concrete()) throw EngineFallback("classical negation over a split team");
  SolverVerdict v = decide_constraints(eval(f->kids[0], t));
  if (v.unknown()) throw EngineFallback("undecided subformula under classical negation: " + v.reason);
  return truth(!v.sat());
}

ArithFormula Engine::eval(const Formula& f, const SymTeam& t) {
  if (is_pure_fo(f)) return eval_flat(f, t);
  switch (f->kind) {
    case Kind::And: {
      ArithFormula a = eval(f->kids[0], t);
      if (a.kind == ArithFormula::Kind::False) return a;
      return a_and({std::move(a), eval(f->kids[1], t)});
    }
    case Kind::Or:
      return eval_or(f, t);
    case Kind::Exists:
      return eval_exists(f, t);
    case Kind::Forall:
      return eval_forall(f, t);
    case Kind::ClassicalNeg:
      return eval_negation(f, t);
    default:
      return eval_atom(f, t);
  }
}

SolverVerdict Engine::decide(const ProbabilisticTeam& team, const Formula& f) {
  Formula g = expand_sugar(f);
  for (const auto& v : free_vars(g))
    if (!team.has_variable(v)) throw DomainError("free variable " + v + " is not in the team domain");
  SymTeam t;
  t.domain = team.domain();
  for (const auto& r : team.rows())
    if (!is_zero(r.weight)) t.rows.push_back({r.values, LinExpr::of_const(r.weight)});
  ArithFormula c = eval(g, t);
  return decide_constraints(c);
}

}  // namespace pts
