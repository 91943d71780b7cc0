#include "pts/arith.hpp"

#include <algorithm>
#include <set>

#include "pts/errors.hpp"

namespace pts {

VarId VarTable::add(const std::string& name) {
  if (index_.count(name)) throw InputError("variable '" + name + "' declared twice");
  VarId id = static_cast<VarId>(names_.size());
  names_.push_back(name);
  index_[name] = id;
  return id;
}

VarId VarTable::add_unique(const std::string& name) {
  if (!index_.count(name)) return add(name);
  for (int k = 1;; ++k) {
    std::string n = name + "_" + std::to_string(k);
    if (!index_.count(n)) return add(n);
  }
}

VarId VarTable::id(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw DomainError("unknown arithmetic variable '" + name + "'");
  return it->second;
}

ArithTerm t_const(const Rational& r) {
  ArithTerm t;
  t.kind = ArithTerm::Kind::Const;
  t.value = r;
  return t;
}

ArithTerm t_var(VarId v) {
  ArithTerm t;
  t.kind = ArithTerm::Kind::Var;
  t.var = v;
  return t;
}

ArithTerm t_add(std::vector<ArithTerm> args) {
  ArithTerm t;
  t.kind = ArithTerm::Kind::Add;
  for (auto& a : args) {
    if (a.kind == ArithTerm::Kind::Add)
      for (auto& b : a.args) t.args.push_back(std::move(b));
    else if (!(a.kind == ArithTerm::Kind::Const && is_zero(a.value)))
      t.args.push_back(std::move(a));
  }
  if (t.args.empty()) return t_const(0);
  if (t.args.size() == 1) return std::move(t.args[0]);
  return t;
}

ArithTerm t_mul(std::vector<ArithTerm> args) {
  if (args.size() == 1) return std::move(args[0]);
  ArithTerm t;
  t.kind = ArithTerm::Kind::Mul;
  t.args = std::move(args);
  return t;
}

ArithTerm t_sub(ArithTerm a, ArithTerm b) {
  return t_add({std::move(a), t_mul({t_const(-1), std::move(b)})});
}

namespace {

ArithFormula leaf(ArithFormula::Kind k) {
  ArithFormula f;
  f.kind = k;
  return f;
}

}  // namespace

ArithFormula a_true() { return leaf(ArithFormula::Kind::True); }
ArithFormula a_false() { return leaf(ArithFormula::Kind::False); }

ArithFormula a_eq(ArithTerm l, ArithTerm r) {
  ArithFormula f = leaf(ArithFormula::Kind::Eq);
  f.lhs = std::move(l);
  f.rhs = std::move(r);
  return f;
}

ArithFormula a_leq(ArithTerm l, ArithTerm r) {
  ArithFormula f = leaf(ArithFormula::Kind::Leq);
  f.lhs = std::move(l);
  f.rhs = std::move(r);
  return f;
}

ArithFormula a_lt(ArithTerm l, ArithTerm r) { return a_not(a_leq(std::move(r), std::move(l))); }

ArithFormula a_not(ArithFormula g) {
  if (g.kind == ArithFormula::Kind::True) return a_false();
  if (g.kind == ArithFormula::Kind::False) return a_true();
  ArithFormula f = leaf(ArithFormula::Kind::Not);
  f.kids.push_back(std::move(g));
  return f;
}

ArithFormula a_and(std::vector<ArithFormula> kids) {
  ArithFormula f = leaf(ArithFormula::Kind::And);
  for (auto& k : kids) {
    if (k.kind == ArithFormula::Kind::True) continue;
    if (k.kind == ArithFormula::Kind::False) return a_false();
    if (k.kind == ArithFormula::Kind::And)
      for (auto& g : k.kids) f.kids.push_back(std::move(g));
    else
      f.kids.push_back(std::move(k));
  }
  if (f.kids.empty()) return a_true();
  if (f.kids.size() == 1) return std::move(f.kids[0]);
  return f;
}

ArithFormula a_or(std::vector<ArithFormula> kids) {
  ArithFormula f = leaf(ArithFormula::Kind::Or);
  for (auto& k : kids) {
    if (k.kind == ArithFormula::Kind::False) continue;
    if (k.kind == ArithFormula::Kind::True) return a_true();
    if (k.kind == ArithFormula::Kind::Or)
      for (auto& g : k.kids) f.kids.push_back(std::move(g));
    else
      f.kids.push_back(std::move(k));
  }
  if (f.kids.empty()) return a_false();
  if (f.kids.size() == 1) return std::move(f.kids[0]);
  return f;
}

ArithFormula a_exists(std::vector<VarId> vars, ArithFormula body) {
  if (vars.empty()) return body;
  ArithFormula f = leaf(ArithFormula::Kind::Exists);
  f.vars = std::move(vars);
  f.kids.push_back(std::move(body));
  return f;
}

ArithFormula a_forall(std::vector<VarId> vars, ArithFormula body) {
  if (vars.empty()) return body;
  ArithFormula f = leaf(ArithFormula::Kind::Forall);
  f.vars = std::move(vars);
  f.kids.push_back(std::move(body));
  return f;
}

ArithFormula a_implies(ArithFormula a, ArithFormula b) {
  std::vector<ArithFormula> kids;
  kids.push_back(a_not(std::move(a)));
  kids.push_back(std::move(b));
  return a_or(std::move(kids));
}

bool has_mul(const ArithTerm& t) {
  if (t.kind == ArithTerm::Kind::Mul) return true;
  for (const auto& a : t.args)
    if (has_mul(a)) return true;
  return false;
}

namespace {

bool is_constant_term(const ArithTerm& t) {
  if (t.kind == ArithTerm::Kind::Var) return false;
  for (const auto& a : t.args)
    if (!is_constant_term(a)) return false;
  return true;
}

}  // namespace

bool is_nonlinear(const ArithTerm& t) {
  if (t.kind == ArithTerm::Kind::Mul) {
    int live = 0;
    for (const auto& a : t.args)
      if (!is_constant_term(a)) ++live;
    if (live > 1) return true;
  }
  for (const auto& a : t.args)
    if (is_nonlinear(a)) return true;
  return false;
}

bool is_nonlinear(const ArithFormula& f) {
  if (f.kind == ArithFormula::Kind::Eq || f.kind == ArithFormula::Kind::Leq)
    return is_nonlinear(f.lhs) || is_nonlinear(f.rhs);
  for (const auto& k : f.kids)
    if (is_nonlinear(k)) return true;
  return false;
}

bool has_mul(const ArithFormula& f) {
  if (f.kind == ArithFormula::Kind::Eq || f.kind == ArithFormula::Kind::Leq)
    return has_mul(f.lhs) || has_mul(f.rhs);
  for (const auto& k : f.kids)
    if (has_mul(k)) return true;
  return false;
}

bool is_quantifier_free(const ArithFormula& f) {
  if (f.kind == ArithFormula::Kind::Exists || f.kind == ArithFormula::Kind::Forall) return false;
  for (const auto& k : f.kids)
    if (!is_quantifier_free(k)) return false;
  return true;
}

std::size_t formula_size(const ArithFormula& f) {
  std::size_t n = 1;
  for (const auto& k : f.kids) n += formula_size(k);
  return n;
}

namespace {

void term_vars(const ArithTerm& t, std::set<VarId>& out) {
  if (t.kind == ArithTerm::Kind::Var) out.insert(t.var);
  for (const auto& a : t.args) term_vars(a, out);
}

void formula_free(const ArithFormula& f, std::set<VarId>& out) {
  switch (f.kind) {
    case ArithFormula::Kind::Eq:
    case ArithFormula::Kind::Leq:
      term_vars(f.lhs, out);
      term_vars(f.rhs, out);
      return;
    case ArithFormula::Kind::Exists:
    case ArithFormula::Kind::Forall: {
      std::set<VarId> inner;
      formula_free(f.kids[0], inner);
      for (VarId v : f.vars) inner.erase(v);
      out.insert(inner.begin(), inner.end());
      return;
    }
    default:
      for (const auto& k : f.kids) formula_free(k, out);
  }
}

}  // namespace

std::vector<VarId> free_arith_vars(const ArithFormula& f) {
  std::set<VarId> out;
  formula_free(f, out);
  return {out.begin(), out.end()};
}

std::string to_string(const ArithTerm& t, const VarTable& vars) {
  switch (t.kind) {
    case ArithTerm::Kind::Const:
      return to_string(t.value);
    case ArithTerm::Kind::Var:
      return vars.name(t.var);
    case ArithTerm::Kind::Add:
    case ArithTerm::Kind::Mul: {
      std::string op = t.kind == ArithTerm::Kind::Add ? " + " : " * ";
      std::string out = "(";
      for (std::size_t i = 0; i < t.args.size(); ++i) {
        if (i) out += op;
        out += to_string(t.args[i], vars);
      }
      return out + ")";
    }
  }
  return "";
}

std::string to_string(const ArithFormula& f, const VarTable& vars) {
  auto list = [&](const char* op) {
    std::string out = "(";
    for (std::size_t i = 0; i < f.kids.size(); ++i) {
      if (i) out += op;
      out += to_string(f.kids[i], vars);
    }
    return out + ")";
  };
  auto quant = [&](const char* q) {
    std::string out = q;
    for (VarId v : f.vars) out += " " + vars.name(v);
    return out + ". " + to_string(f.kids[0], vars);
  };
  switch (f.kind) {
    case ArithFormula::Kind::True:
      return "true";
    case ArithFormula::Kind::False:
      return "false";
    case ArithFormula::Kind::Eq:
      return to_string(f.lhs, vars) + " = " + to_string(f.rhs, vars);
    case ArithFormula::Kind::Leq:
      return to_string(f.lhs, vars) + " <= " + to_string(f.rhs, vars);
    case ArithFormula::Kind::Not:
      return "not " + to_string(f.kids[0], vars);
    case ArithFormula::Kind::And:
      return list(" and ");
    case ArithFormula::Kind::Or:
      return list(" or ");
    case ArithFormula::Kind::Exists:
      return quant("exists");
    case ArithFormula::Kind::Forall:
      return quant("forall");
  }
  return "";
}

ArithTerm strict_integer(const mpz_class& n) {
  if (n < 0) throw InputError("strict_integer expects a nonnegative integer");
  if (n == 0) return t_const(0);
  if (n == 1) return t_const(1);
  ArithTerm two = t_add({t_const(1), t_const(1)});
  // Built from the most significant bit down: acc = acc*2 + bit.
  std::string bits = n.get_str(2);
  ArithTerm acc = t_const(1);
  for (std::size_t i = 1; i < bits.size(); ++i) {
    ArithTerm doubled = t_mul({two, acc});
    acc = bits[i] == '1' ? t_add({doubled, t_const(1)}) : doubled;
  }
  return acc;
}

}  // namespace pts
