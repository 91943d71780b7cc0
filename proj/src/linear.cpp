#include "pts/linear.hpp"

#include <set>

#include "pts/errors.hpp"

namespace pts {

LinExpr LinExpr::of_const(const Rational& c) {
  LinExpr e;
  e.constant = c;
  return e;
}

LinExpr LinExpr::of_var(VarId v, const Rational& c) {
  LinExpr e;
  e.add_term(v, c);
  return e;
}

void LinExpr::add_term(VarId v, const Rational& c) {
  if (is_zero(c)) return;
  auto [it, fresh] = coef.try_emplace(v, c);
  if (!fresh) {
    it->second += c;
    if (is_zero(it->second)) coef.erase(it);
  }
}

LinExpr& LinExpr::operator+=(const LinExpr& o) {
  for (const auto& [v, c] : o.coef) add_term(v, c);
  constant += o.constant;
  return *this;
}

LinExpr& LinExpr::operator-=(const LinExpr& o) {
  for (const auto& [v, c] : o.coef) add_term(v, -c);
  constant -= o.constant;
  return *this;
}

LinExpr& LinExpr::operator*=(const Rational& k) {
  if (is_zero(k)) {
    coef.clear();
    constant = 0;
    return *this;
  }
  for (auto& [v, c] : coef) c *= k;
  constant *= k;
  return *this;
}

void LinExpr::substitute(VarId v, const LinExpr& e) {
  auto it = coef.find(v);
  if (it == coef.end()) return;
  Rational c = it->second;
  coef.erase(it);
  for (const auto& [u, d] : e.coef) add_term(u, c * d);
  constant += c * e.constant;
}

Rational LinExpr::eval(const std::map<VarId, Rational>& values) const {
  Rational out = constant;
  for (const auto& [v, c] : coef) {
    auto it = values.find(v);
    if (it != values.end()) out += c * it->second;
  }
  return out;
}

LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }
LinExpr operator*(LinExpr a, const Rational& k) { return a *= k; }

ArithTerm to_term(const LinExpr& e) {
  std::vector<ArithTerm> parts;
  for (const auto& [v, c] : e.coef)
    parts.push_back(c == 1 ? t_var(v) : t_mul({t_const(c), t_var(v)}));
  if (!is_zero(e.constant) || parts.empty()) parts.push_back(t_const(e.constant));
  return t_add(std::move(parts));
}

namespace {

std::optional<LinExpr> as_linear(const ArithTerm& t) {
  switch (t.kind) {
    case ArithTerm::Kind::Const:
      return LinExpr::of_const(t.value);
    case ArithTerm::Kind::Var:
      return LinExpr::of_var(t.var);
    case ArithTerm::Kind::Add: {
      LinExpr out;
      for (const auto& a : t.args) {
        auto l = as_linear(a);
        if (!l) return std::nullopt;
        out += *l;
      }
      return out;
    }
    case ArithTerm::Kind::Mul: {
      LinExpr out = LinExpr::of_const(1);
      bool live = false;
      for (const auto& a : t.args) {
        auto l = as_linear(a);
        if (!l) return std::nullopt;
        if (l->is_constant()) {
          out *= l->constant;
        } else {
          if (live) return std::nullopt;
          live = true;
          out = *l * out.constant;
        }
      }
      return out;
    }
  }
  return std::nullopt;
}

using Products = std::vector<PolyConstraint::Product>;

Products expand(const ArithTerm& t) {
  if (auto l = as_linear(t)) return {{1, {*l}}};
  if (t.kind == ArithTerm::Kind::Add) {
    Products out;
    for (const auto& a : t.args) {
      auto p = expand(a);
      out.insert(out.end(), p.begin(), p.end());
    }
    return out;
  }
  Products acc{{1, {}}};
  for (const auto& a : t.args) {
    Products next;
    for (const auto& p : acc)
      for (const auto& q : expand(a)) {
        PolyConstraint::Product r{p.coef * q.coef, p.factors};
        r.factors.insert(r.factors.end(), q.factors.begin(), q.factors.end());
        next.push_back(std::move(r));
      }
    acc = std::move(next);
  }
  return acc;
}

}  // namespace

void fold_products(PolyConstraint& c) {
  std::vector<PolyConstraint::Product> kept;
  for (auto& p : c.products) {
    std::vector<LinExpr> live;
    Rational k = p.coef;
    for (auto& f : p.factors) {
      if (f.is_constant())
        k *= f.constant;
      else
        live.push_back(std::move(f));
    }
    if (is_zero(k)) continue;
    if (live.empty())
      c.lin.constant += k;
    else if (live.size() == 1)
      c.lin += live[0] * k;
    else
      kept.push_back({k, std::move(live)});
  }
  c.products = std::move(kept);
}

std::optional<PolyConstraint> to_constraint(const ArithTerm& lhs, const ArithTerm& rhs, Rel rel) {
  PolyConstraint c;
  c.rel = rel;
  for (auto& p : expand(lhs)) c.products.push_back(std::move(p));
  for (auto& p : expand(rhs)) {
    p.coef = -p.coef;
    c.products.push_back(std::move(p));
  }
  fold_products(c);
  return c;
}

ArithFormula to_formula(const PolyConstraint& c) {
  std::vector<ArithTerm> parts;
  for (const auto& p : c.products) {
    std::vector<ArithTerm> fs;
    if (p.coef != 1) fs.push_back(t_const(p.coef));
    for (const auto& f : p.factors) fs.push_back(to_term(f));
    parts.push_back(t_mul(std::move(fs)));
  }
  parts.push_back(to_term(c.lin));
  ArithTerm lhs = t_add(std::move(parts));
  switch (c.rel) {
    case Rel::Eq:
      return a_eq(lhs, t_const(0));
    case Rel::Le:
      return a_leq(lhs, t_const(0));
    case Rel::Lt:
      return a_lt(lhs, t_const(0));
    case Rel::Ne:
      return a_not(a_eq(lhs, t_const(0)));
  }
  return a_true();
}

bool holds_constant(const LinExpr& e, Rel rel) {
  int s = sgn(e.constant);
  switch (rel) {
    case Rel::Eq:
      return s == 0;
    case Rel::Le:
      return s <= 0;
    case Rel::Lt:
      return s < 0;
    case Rel::Ne:
      return s != 0;
  }
  return false;
}

LinExpr EqSystem::reduce(const LinExpr& e) const {
  LinExpr out;
  out.constant = e.constant;
  for (const auto& [v, c] : e.coef) {
    auto it = pivots_.find(v);
    if (it == pivots_.end()) {
      out.add_term(v, c);
    } else {
      for (const auto& [u, d] : it->second.coef) out.add_term(u, c * d);
      out.constant += c * it->second.constant;
    }
  }
  return out;
}

void EqSystem::reduce_in_place(PolyConstraint& c) const {
  c.lin = reduce(c.lin);
  for (auto& p : c.products)
    for (auto& f : p.factors) f = reduce(f);
  fold_products(c);
}

bool EqSystem::add(const LinExpr& e) {
  if (!consistent_) return false;
  LinExpr r = reduce(e);
  if (r.is_constant()) {
    if (!is_zero(r.constant)) consistent_ = false;
    return consistent_;
  }
  // Eliminate the most recently introduced variable.
  auto last = std::prev(r.coef.end());
  VarId v = last->first;
  Rational c = last->second;
  r.coef.erase(last);
  r *= Rational(-1) / c;
  auto users = users_.find(v);
  if (users != users_.end()) {
    for (VarId p : users->second) {
      auto& expr = pivots_.at(p);
      if (!expr.coef.count(v)) continue;
      expr.substitute(v, r);
      for (const auto& [u, d] : r.coef) users_[u].push_back(p);
    }
    users_.erase(users);
  }
  for (const auto& [u, d] : r.coef) users_[u].push_back(v);
  pivots_[v] = std::move(r);
  return true;
}

}  // namespace pts
