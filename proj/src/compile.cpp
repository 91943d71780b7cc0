#include "pts/compile.hpp"

#include <algorithm>

#include "pts/errors.hpp"
#include "pts/literal.hpp"

namespace pts {

std::string weight_name(const std::string& stage, const Tuple& index) {
  std::string out = "w_" + stage;
  if (index.empty()) return out;
  bool short_values = std::all_of(index.begin(), index.end(),
                                  [](const Value& v) { return v.size() == 1; });
  out += '_';
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (i && !short_values) out += '_';
    out += index[i];
  }
  return out;
}

Compiler::Compiler(const Structure& structure, VarTable& vars) : structure_(structure), vars_(vars) {
  if (structure_.universe.empty()) throw InputError("structure has an empty universe");
}

std::size_t Compiler::index_size(std::size_t arity) const {
  std::size_t n = 1;
  for (std::size_t i = 0; i < arity; ++i) {
    n *= structure_.universe.size();
    if (n > (1u << 22)) throw InputError("weight family too large to compile");
  }
  return n;
}

Tuple Compiler::tuple_of(std::size_t index, std::size_t arity) const {
  Tuple t(arity);
  std::size_t a = structure_.universe.size();
  for (std::size_t k = arity; k-- > 0;) {
    t[k] = structure_.universe[index % a];
    index /= a;
  }
  return t;
}

WeightFamily Compiler::fresh_family(const std::vector<Variable>& vars, const std::string& stage) {
  WeightFamily fam;
  fam.vars = vars;
  std::size_t n = index_size(vars.size());
  for (std::size_t i = 0; i < n; ++i)
    fam.weights.push_back(t_var(vars_.add_unique(weight_name(stage, tuple_of(i, vars.size())))));
  return fam;
}

std::vector<VarId> Compiler::ids(const WeightFamily& fam) const {
  std::vector<VarId> out;
  for (const auto& w : fam.weights)
    if (w.kind == ArithTerm::Kind::Var) out.push_back(w.var);
  return out;
}

std::string Compiler::next_stage(const char* tag) {
  return std::string(tag) + std::to_string(stage_counter_);
}

namespace {

std::vector<std::size_t> positions(const std::vector<Variable>& domain,
                                   const std::vector<Variable>& vars) {
  std::vector<std::size_t> out;
  for (const auto& v : vars) {
    auto it = std::find(domain.begin(), domain.end(), v);
    if (it == domain.end()) throw DomainError("variable " + v + " is not in the team domain");
    out.push_back(static_cast<std::size_t>(it - domain.begin()));
  }
  return out;
}

std::vector<Variable> distinct(std::vector<Variable> vs) {
  std::vector<Variable> out;
  for (auto& v : vs)
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(std::move(v));
  return out;
}

std::vector<Variable> concat(std::vector<Variable> a, const std::vector<Variable>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

ArithFormula nonneg(const std::vector<ArithTerm>& ws) {
  std::vector<ArithFormula> out;
  for (const auto& w : ws) out.push_back(a_leq(t_const(0), w));
  return a_and(std::move(out));
}

}  // namespace

std::vector<ArithTerm> Compiler::marginal(const WeightFamily& fam,
                                          const std::vector<Variable>& vars) const {
  auto pos = positions(fam.vars, vars);
  std::size_t a = structure_.universe.size();
  std::vector<std::vector<ArithTerm>> parts(index_size(vars.size()));
  for (std::size_t i = 0; i < fam.weights.size(); ++i) {
    // Digits of i, most significant first.
    std::vector<std::size_t> digits(fam.vars.size());
    std::size_t c = i;
    for (std::size_t k = fam.vars.size(); k-- > 0;) {
      digits[k] = c % a;
      c /= a;
    }
    std::size_t j = 0;
    for (std::size_t p : pos) j = j * a + digits[p];
    parts[j].push_back(fam.weights[i]);
  }
  std::vector<ArithTerm> out;
  for (auto& p : parts) out.push_back(t_add(std::move(p)));
  return out;
}

ArithFormula Compiler::literal(const Formula& f, const WeightFamily& fam) {
  BoundLiteral lit(to_literal(f), structure_, fam.vars);
  std::vector<ArithFormula> out;
  for (std::size_t i = 0; i < fam.weights.size(); ++i)
    if (!lit.holds(tuple_of(i, fam.vars.size()))) out.push_back(a_eq(fam.weights[i], t_const(0)));
  return a_and(std::move(out));
}

ArithFormula Compiler::identity(const Formula& f, const WeightFamily& fam) {
  if (f->x.size() != f->y.size()) throw InputError("marginal identity needs tuples of equal length");
  auto mx = marginal(fam, f->x), my = marginal(fam, f->y);
  std::vector<ArithFormula> out;
  for (std::size_t i = 0; i < mx.size(); ++i) out.push_back(a_eq(mx[i], my[i]));
  return a_and(std::move(out));
}

ArithFormula Compiler::independence(const Formula& f, const WeightFamily& fam) {
  // Var(xyz) as a set; every marginal below is read off one assignment s of it.
  auto all = distinct(concat(concat(f->x, f->y), f->z));
  auto xy = distinct(concat(f->x, f->y)), xz = distinct(concat(f->x, f->z)), x = distinct(f->x);
  auto m_all = marginal(fam, all), m_xy = marginal(fam, xy), m_xz = marginal(fam, xz),
       m_x = marginal(fam, x);
  auto sub_index = [&](std::size_t idx, const std::vector<Variable>& part) {
    Tuple t = tuple_of(idx, all.size());
    std::size_t j = 0, a = structure_.universe.size();
    for (const auto& v : part) {
      std::size_t p = static_cast<std::size_t>(std::find(all.begin(), all.end(), v) - all.begin());
      std::size_t d = static_cast<std::size_t>(
          std::find(structure_.universe.begin(), structure_.universe.end(), t[p]) -
          structure_.universe.begin());
      j = j * a + d;
    }
    return j;
  };
  std::vector<ArithFormula> out;
  for (std::size_t i = 0; i < m_all.size(); ++i)
    out.push_back(a_eq(t_mul({m_xy[sub_index(i, xy)], m_xz[sub_index(i, xz)]}),
                       t_mul({m_all[i], m_x[sub_index(i, x)]})));
  return a_and(std::move(out));
}

ArithFormula Compiler::dependence(const std::vector<Variable>& x, const std::vector<Variable>& y,
                                  const WeightFamily& fam) {
  // Two xy-patterns that agree on x but not on y cannot both carry weight.
  auto xs = distinct(x);
  auto xy = distinct(concat(xs, y));
  auto m = marginal(fam, xy);
  std::vector<ArithFormula> out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    Tuple ti = tuple_of(i, xy.size());
    for (std::size_t j = i + 1; j < m.size(); ++j) {
      Tuple tj = tuple_of(j, xy.size());
      if (!std::equal(ti.begin(), ti.begin() + static_cast<long>(xs.size()), tj.begin())) continue;
      out.push_back(a_or({a_eq(m[i], t_const(0)), a_eq(m[j], t_const(0))}));
    }
  }
  return a_and(std::move(out));
}

ArithFormula Compiler::split(const Formula& f, const WeightFamily& fam) {
  ++stage_counter_;
  WeightFamily t = fresh_family(fam.vars, next_stage("t"));
  WeightFamily r = fresh_family(fam.vars, next_stage("r"));
  std::vector<ArithFormula> parts{nonneg(t.weights), nonneg(r.weights)};
  for (std::size_t i = 0; i < fam.weights.size(); ++i)
    parts.push_back(a_eq(fam.weights[i], t_add({t.weights[i], r.weights[i]})));
  parts.push_back(star(f->kids[0], t));
  parts.push_back(star(f->kids[1], r));
  std::vector<VarId> bound = ids(t);
  for (VarId v : ids(r)) bound.push_back(v);
  return a_exists(std::move(bound), a_and(std::move(parts)));
}

ArithFormula Compiler::quantifier(const Formula& f, const WeightFamily& fam) {
  const Variable& v = f->name;
  // An existing column for v is marginalized away and v moves to the end.
  WeightFamily base;
  for (const auto& u : fam.vars)
    if (u != v) base.vars.push_back(u);
  base.weights = base.vars.size() == fam.vars.size() ? fam.weights : marginal(fam, base.vars);
  std::size_t a = structure_.universe.size();
  if (f->kind == Kind::Forall) {
    // Every branch gets the share w/|A|; no new variables, so classical
    // negation above a universal adds no quantifier alternation.
    WeightFamily t;
    t.vars = concat(base.vars, {v});
    ArithTerm share = t_const(make_rational(1, static_cast<long>(a)));
    for (const auto& w : base.weights)
      for (std::size_t k = 0; k < a; ++k) t.weights.push_back(t_mul({share, w}));
    return star(f->kids[0], t);
  }
  ++stage_counter_;
  WeightFamily t = fresh_family(concat(base.vars, {v}), next_stage("t"));
  std::vector<ArithFormula> parts{nonneg(t.weights)};
  for (std::size_t i = 0; i < base.weights.size(); ++i) {
    std::vector<ArithTerm> branch(t.weights.begin() + static_cast<long>(i * a),
                                  t.weights.begin() + static_cast<long>((i + 1) * a));
    parts.push_back(a_eq(base.weights[i], t_add(std::move(branch))));
  }
  parts.push_back(star(f->kids[0], t));
  return a_exists(ids(t), a_and(std::move(parts)));
}

ArithFormula Compiler::star(const Formula& f, const WeightFamily& fam) {
  switch (f->kind) {
    case Kind::VarEq:
    case Kind::VarNeq:
    case Kind::Rel:
    case Kind::NegRel:
    case Kind::PropLit:
      return literal(f, fam);
    case Kind::MarginalIdentity:
      return identity(f, fam);
    case Kind::MarginalEquiv:
      throw PreconditionError("=~* cannot be compiled directly; rewrite it to =~ and dep first");
    case Kind::CondIndep:
      return independence(f, fam);
    case Kind::Dep:
      return dependence(f->x, f->y, fam);
    case Kind::Constancy:
      return dependence({}, f->x, fam);
    case Kind::And:
      return a_and({star(f->kids[0], fam), star(f->kids[1], fam)});
    case Kind::Or:
      return split(f, fam);
    case Kind::Exists:
    case Kind::Forall:
      return quantifier(f, fam);
    case Kind::ClassicalNeg:
      return a_not(star(f->kids[0], fam));
    default:
      throw PreconditionError("sugar must be expanded before compiling");
  }
}

std::vector<Variable> proposition_tuple(const Formula& f, const std::vector<Variable>& declared) {
  auto fv = free_vars(f);
  if (declared.empty()) return {fv.begin(), fv.end()};
  for (const auto& v : fv)
    if (std::find(declared.begin(), declared.end(), v) == declared.end())
      throw InputError("variable " + v + " is not among the declared variables");
  return declared;
}

namespace {

ArithTerm sum(const std::vector<ArithTerm>& ws) { return t_add(ws); }

}  // namespace

ArithFormula compile_star(const Formula& f, const std::vector<Variable>& props, VarTable& vars) {
  Structure b = Structure::binary();
  Compiler c(b, vars);
  WeightFamily s = c.fresh_family(props, "s");
  return c.star(expand_sugar(f), s);
}

ArithSentence compile_sat(const Formula& f, const std::vector<Variable>& props) {
  Formula g = expand_sugar(f);
  auto p = proposition_tuple(g, props);
  Structure b = Structure::binary();
  ArithSentence out;
  Compiler c(b, out.vars);
  WeightFamily s = c.fresh_family(p, "s");
  ArithFormula body = a_and({nonneg(s.weights), a_not(a_eq(sum(s.weights), t_const(0))), c.star(g, s)});
  out.phi = a_exists(c.ids(s), std::move(body));
  return out;
}

ArithSentence compile_validity(const Formula& f, const std::vector<Variable>& props,
                               bool include_empty) {
  Formula g = expand_sugar(f);
  auto p = proposition_tuple(g, props);
  Structure b = Structure::binary();
  ArithSentence out;
  Compiler c(b, out.vars);
  WeightFamily s = c.fresh_family(p, "s");
  std::vector<ArithFormula> pre{nonneg(s.weights)};
  if (!include_empty) pre.push_back(a_not(a_eq(sum(s.weights), t_const(0))));
  out.phi = a_forall(c.ids(s), a_implies(a_and(std::move(pre)), c.star(g, s)));
  return out;
}

ArithSentence compile_implication(const std::vector<Formula>& sigma, const Formula& target,
                                  const std::vector<Variable>& props) {
  if (props.empty()) throw InputError("implication needs a declared variable tuple");
  ArithSentence out;
  Structure b = Structure::binary();
  Compiler c(b, out.vars);
  WeightFamily s = c.fresh_family(props, "s");
  std::vector<ArithFormula> pre{nonneg(s.weights), a_not(a_eq(sum(s.weights), t_const(0)))};
  for (const auto& g : sigma) {
    Formula e = expand_sugar(g);
    proposition_tuple(e, props);
    pre.push_back(c.star(e, s));
  }
  Formula t = expand_sugar(target);
  proposition_tuple(t, props);
  out.phi = a_forall(c.ids(s), a_implies(a_and(std::move(pre)), c.star(t, s)));
  return out;
}

ArithSentence compile_team_check(const Structure& structure, const ProbabilisticTeam& team,
                                 const Formula& f, bool strict_vocabulary) {
  Formula g = expand_sugar(f);
  for (const auto& v : free_vars(g))
    if (!team.has_variable(v)) throw DomainError("free variable " + v + " is not in the team domain");
  for (const auto& r : team.rows())
    for (const auto& v : r.values)
      if (!structure.has_value(v))
        throw DomainError("team value " + v + " is outside the structure universe");
  ArithSentence out;
  Compiler c(structure, out.vars);
  WeightFamily s;
  s.vars = team.domain();
  std::vector<VarId> pinned;
  std::vector<ArithFormula> pins;
  std::size_t n = c.index_size(s.vars.size());
  for (std::size_t i = 0; i < n; ++i) {
    Tuple t = c.tuple_of(i, s.vars.size());
    Rational w = team.weight_of(t);
    if (!strict_vocabulary || w.get_den() == 1) {
      s.weights.push_back(strict_vocabulary ? strict_integer(w.get_num()) : t_const(w));
      continue;
    }
    // q * c = p pins c to p/q without rational constants.
    VarId v = out.vars.add_unique(weight_name("s", t));
    pinned.push_back(v);
    pins.push_back(a_eq(t_mul({strict_integer(w.get_den()), t_var(v)}), strict_integer(w.get_num())));
    s.weights.push_back(t_var(v));
  }
  pins.push_back(c.star(g, s));
  out.phi = a_exists(std::move(pinned), a_and(std::move(pins)));
  return out;
}

}  // namespace pts
