#include "pts/atoms.hpp"

#include <algorithm>
#include <map>

#include "pts/errors.hpp"

namespace pts {

namespace {

Tuple project(const Tuple& values, const std::vector<std::size_t>& idx) {
  Tuple out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(values[i]);
  return out;
}

std::vector<Variable> concat(const std::vector<Variable>& a, const std::vector<Variable>& b) {
  std::vector<Variable> out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

std::string join(const Tuple& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + t[i];
  return s + ")";
}

}  // namespace

std::string describe_witness(const AtomVerdict& v) {
  std::string s;
  for (std::size_t i = 0; i < v.witness.size(); ++i) s += (i ? " " : "") + join(v.witness[i]);
  return s;
}

AtomVerdict eval_marginal_identity(const ProbabilisticTeam& team, const std::vector<Variable>& x,
                                   const std::vector<Variable>& y) {
  if (x.size() != y.size())
    throw InputError("marginal identity needs equal-length tuples (" + std::to_string(x.size()) +
                     " vs " + std::to_string(y.size()) + ")");
  auto mx = marginal(team, x);
  auto my = marginal(team, y);
  // Both maps are sorted; report the first tuple where they differ.
  auto ix = mx.begin();
  auto iy = my.begin();
  while (ix != mx.end() || iy != my.end()) {
    if (iy == my.end() || (ix != mx.end() && ix->first < iy->first)) return {false, {ix->first}};
    if (ix == mx.end() || iy->first < ix->first) return {false, {iy->first}};
    if (ix->second != iy->second) return {false, {ix->first}};
    ++ix;
    ++iy;
  }
  return {};
}

AtomVerdict eval_marginal_equivalence(const ProbabilisticTeam& team,
                                      const std::vector<Variable>& x,
                                      const std::vector<Variable>& y) {
  auto collect = [&](const std::vector<Variable>& vars) {
    std::vector<Rational> ws;
    for (auto& [t, w] : marginal(team, vars)) ws.push_back(w);
    std::sort(ws.begin(), ws.end());
    return ws;
  };
  return {collect(x) == collect(y), {}};
}

AtomVerdict eval_conditional_independence(const ProbabilisticTeam& team,
                                          const std::vector<Variable>& x,
                                          const std::vector<Variable>& y,
                                          const std::vector<Variable>& z) {
  auto xy = concat(x, y), xz = concat(x, z), xyz = concat(xy, z);
  auto mx = marginal(team, x), mxy = marginal(team, xy), mxz = marginal(team, xz),
       mxyz = marginal(team, xyz);
  auto lookup = [](const std::map<Tuple, Rational>& m, const Tuple& t) -> Rational {
    auto it = m.find(t);
    return it == m.end() ? Rational(0) : it->second;
  };
  // Every assignment s over Var(xyz) with a nonzero side arises from an
  // occurring xy-value and an occurring xz-value that agree on shared variables.
  for (const auto& [u, wu] : mxy) {
    for (const auto& [v, wv] : mxz) {
      std::map<Variable, Value> s;
      bool consistent = true;
      for (std::size_t i = 0; i < xy.size() && consistent; ++i) {
        auto [it, fresh] = s.emplace(xy[i], u[i]);
        consistent = fresh || it->second == u[i];
      }
      for (std::size_t i = 0; i < xz.size() && consistent; ++i) {
        auto [it, fresh] = s.emplace(xz[i], v[i]);
        consistent = fresh || it->second == v[i];
      }
      if (!consistent) continue;
      Tuple sx, sxyz;
      for (const auto& var : x) sx.push_back(s[var]);
      for (const auto& var : xyz) sxyz.push_back(s[var]);
      if (wu * wv != lookup(mxyz, sxyz) * lookup(mx, sx)) return {false, {sxyz}};
    }
  }
  return {};
}

AtomVerdict eval_dependence(const ProbabilisticTeam& team, const std::vector<Variable>& x,
                            const std::vector<Variable>& y) {
  auto ix = team.indices_of(x), iy = team.indices_of(y);
  std::map<Tuple, Tuple> seen;
  for (const auto& r : team.rows()) {
    if (sgn(r.weight) <= 0) continue;
    Tuple kx = project(r.values, ix), vy = project(r.values, iy);
    auto [it, fresh] = seen.emplace(kx, vy);
    if (!fresh && it->second != vy) {
      Tuple a = kx, b = kx;
      a.insert(a.end(), it->second.begin(), it->second.end());
      b.insert(b.end(), vy.begin(), vy.end());
      return {false, {a, b}};
    }
  }
  return {};
}

BoundLiteral::BoundLiteral(const Literal& lit, const Structure& s,
                           const std::vector<Variable>& domain)
    : kind_(lit.kind) {
  if (kind_ == Literal::Kind::Rel || kind_ == Literal::Kind::NegRel) {
    auto it = s.relations.find(lit.relation);
    if (it == s.relations.end()) throw DomainError("unknown relation '" + lit.relation + "'");
    rel_ = &it->second;
    if (rel_->arity != lit.args.size())
      throw InputError("relation '" + lit.relation + "' has arity " +
                       std::to_string(rel_->arity));
  } else if (lit.args.size() != 2) {
    throw InputError("equality literal needs two terms");
  }
  for (const auto& t : lit.args) {
    if (t.constant) {
      auto it = s.constants.find(t.name);
      if (it == s.constants.end()) throw DomainError("unknown constant '#" + t.name + "'");
      slots_.push_back(-1);
      consts_.push_back(it->second);
    } else {
      auto it = std::find(domain.begin(), domain.end(), t.name);
      if (it == domain.end()) throw DomainError("unknown variable '" + t.name + "'");
      slots_.push_back(it - domain.begin());
      consts_.emplace_back();
    }
  }
}

bool BoundLiteral::holds(const Tuple& row) const {
  auto arg = [&](std::size_t i) -> const Value& {
    return slots_[i] < 0 ? consts_[i] : row[static_cast<std::size_t>(slots_[i])];
  };
  switch (kind_) {
    case Literal::Kind::Eq:
      return arg(0) == arg(1);
    case Literal::Kind::Neq:
      return arg(0) != arg(1);
    case Literal::Kind::Rel:
    case Literal::Kind::NegRel: {
      Tuple t;
      for (std::size_t i = 0; i < slots_.size(); ++i) t.push_back(arg(i));
      bool in = rel_->tuples.count(t) > 0;
      return kind_ == Literal::Kind::Rel ? in : !in;
    }
  }
  return false;
}

AtomVerdict eval_fo_literal(const Structure& structure, const ProbabilisticTeam& team,
                            const Literal& lit) {
  BoundLiteral bound(lit, structure, team.domain());
  for (const auto& r : team.rows())
    if (sgn(r.weight) > 0 && !bound.holds(r.values)) return {false, {r.values}};
  return {};
}

}  // namespace pts
