#include "pts/formula.hpp"

#include <algorithm>

#include "pts/errors.hpp"

namespace pts {

namespace {

Formula make(Node n) { return std::make_shared<const Node>(std::move(n)); }

Node node(Kind k) {
  Node n;
  n.kind = k;
  return n;
}

}  // namespace

Formula f_eq(Term a, Term b) {
  Node n = node(Kind::VarEq);
  n.terms = {std::move(a), std::move(b)};
  return make(std::move(n));
}

Formula f_neq(Term a, Term b) {
  Node n = node(Kind::VarNeq);
  n.terms = {std::move(a), std::move(b)};
  return make(std::move(n));
}

Formula f_rel(std::string rel, std::vector<Term> args) {
  Node n = node(Kind::Rel);
  n.name = std::move(rel);
  n.terms = std::move(args);
  return make(std::move(n));
}

Formula f_negrel(std::string rel, std::vector<Term> args) {
  Node n = node(Kind::NegRel);
  n.name = std::move(rel);
  n.terms = std::move(args);
  return make(std::move(n));
}

Formula f_prop(std::string p, bool positive) {
  Node n = node(Kind::PropLit);
  n.name = std::move(p);
  n.positive = positive;
  return make(std::move(n));
}

Formula f_mi(std::vector<Variable> x, std::vector<Variable> y) {
  if (x.size() != y.size())
    throw InputError("marginal identity needs equal-length tuples; not a well formed formula");
  Node n = node(Kind::MarginalIdentity);
  n.x = std::move(x);
  n.y = std::move(y);
  return make(std::move(n));
}

Formula f_me(std::vector<Variable> x, std::vector<Variable> y) {
  Node n = node(Kind::MarginalEquiv);
  n.x = std::move(x);
  n.y = std::move(y);
  return make(std::move(n));
}

Formula f_ci(std::vector<Variable> cond, std::vector<Variable> y, std::vector<Variable> z) {
  Node n = node(Kind::CondIndep);
  n.x = std::move(cond);
  n.y = std::move(y);
  n.z = std::move(z);
  return make(std::move(n));
}

Formula f_dep(std::vector<Variable> x, std::vector<Variable> y) {
  Node n = node(Kind::Dep);
  n.x = std::move(x);
  n.y = std::move(y);
  return make(std::move(n));
}

Formula f_const(std::vector<Variable> x) {
  Node n = node(Kind::Constancy);
  n.x = std::move(x);
  return make(std::move(n));
}

Formula f_and(Formula a, Formula b) {
  Node n = node(Kind::And);
  n.kids = {std::move(a), std::move(b)};
  return make(std::move(n));
}

Formula f_or(Formula a, Formula b) {
  Node n = node(Kind::Or);
  n.kids = {std::move(a), std::move(b)};
  return make(std::move(n));
}

Formula f_exists(Variable v, Formula body) {
  Node n = node(Kind::Exists);
  n.name = std::move(v);
  n.kids = {std::move(body)};
  return make(std::move(n));
}

Formula f_forall(Variable v, Formula body) {
  Node n = node(Kind::Forall);
  n.name = std::move(v);
  n.kids = {std::move(body)};
  return make(std::move(n));
}

Formula f_neg(Formula body) {
  Node n = node(Kind::ClassicalNeg);
  n.kids = {std::move(body)};
  return make(std::move(n));
}

Formula f_tuple_eq(std::vector<Term> left, std::vector<Term> right) {
  if (left.size() != right.size() || left.empty())
    throw InputError("tuple equality needs nonempty equal-length tuples");
  Node n = node(Kind::TupleEq);
  n.terms = std::move(left);
  n.terms.insert(n.terms.end(), right.begin(), right.end());
  return make(std::move(n));
}

Formula f_tuple_neq(std::vector<Term> left, std::vector<Term> right) {
  if (left.size() != right.size() || left.empty())
    throw InputError("tuple disequality needs nonempty equal-length tuples");
  Node n = node(Kind::TupleNeq);
  n.terms = std::move(left);
  n.terms.insert(n.terms.end(), right.begin(), right.end());
  return make(std::move(n));
}

Formula f_bounded_exists(Variable v, std::vector<Term> set, Formula body) {
  if (set.empty()) throw InputError("bounded quantifier needs a nonempty set");
  Node n = node(Kind::BoundedExists);
  n.name = std::move(v);
  n.terms = std::move(set);
  n.kids = {std::move(body)};
  return make(std::move(n));
}

Formula f_bounded_forall(Variable v, std::vector<Term> set, Formula body) {
  if (set.empty()) throw InputError("bounded quantifier needs a nonempty set");
  Node n = node(Kind::BoundedForall);
  n.name = std::move(v);
  n.terms = std::move(set);
  n.kids = {std::move(body)};
  return make(std::move(n));
}

Formula f_const_exists(std::vector<Variable> vars, Formula body) {
  if (vars.empty()) throw InputError("constancy quantifier needs variables");
  Node n = node(Kind::ConstExists);
  n.x = std::move(vars);
  n.kids = {std::move(body)};
  return make(std::move(n));
}

Formula f_implies(Formula guard, Formula body) {
  Node n = node(Kind::Implies);
  n.kids = {std::move(guard), std::move(body)};
  return make(std::move(n));
}

Formula f_iff(Formula a, Formula b) {
  Node n = node(Kind::Iff);
  n.kids = {std::move(a), std::move(b)};
  return make(std::move(n));
}

Formula and_all(const std::vector<Formula>& fs) {
  if (fs.empty()) throw InputError("and_all of nothing");
  Formula out = fs.back();
  for (auto it = fs.rbegin() + 1; it != fs.rend(); ++it) out = f_and(*it, out);
  return out;
}

Formula or_all(const std::vector<Formula>& fs) {
  if (fs.empty()) throw InputError("or_all of nothing");
  Formula out = fs.back();
  for (auto it = fs.rbegin() + 1; it != fs.rend(); ++it) out = f_or(*it, out);
  return out;
}

Formula exists_all(const std::vector<Variable>& vs, Formula body) {
  for (auto it = vs.rbegin(); it != vs.rend(); ++it) body = f_exists(*it, body);
  return body;
}

Formula forall_all(const std::vector<Variable>& vs, Formula body) {
  for (auto it = vs.rbegin(); it != vs.rend(); ++it) body = f_forall(*it, body);
  return body;
}

std::vector<Term> var_terms(const std::vector<Variable>& vs) {
  std::vector<Term> out;
  for (const auto& v : vs) out.push_back(var_term(v));
  return out;
}

bool equal(const Formula& a, const Formula& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->terms != b->terms || a->name != b->name || a->x != b->x ||
      a->y != b->y || a->z != b->z || a->positive != b->positive ||
      a->kids.size() != b->kids.size())
    return false;
  for (std::size_t i = 0; i < a->kids.size(); ++i)
    if (!equal(a->kids[i], b->kids[i])) return false;
  return true;
}

bool is_sugar(Kind k) {
  switch (k) {
    case Kind::TupleEq:
    case Kind::TupleNeq:
    case Kind::BoundedExists:
    case Kind::BoundedForall:
    case Kind::ConstExists:
    case Kind::Implies:
    case Kind::Iff:
      return true;
    default:
      return false;
  }
}

bool is_literal(Kind k) {
  return k == Kind::VarEq || k == Kind::VarNeq || k == Kind::Rel || k == Kind::NegRel ||
         k == Kind::PropLit;
}

bool is_dependency_atom(Kind k) {
  return k == Kind::MarginalIdentity || k == Kind::MarginalEquiv || k == Kind::CondIndep ||
         k == Kind::Dep || k == Kind::Constancy;
}

namespace {

void add_terms(const std::vector<Term>& ts, std::set<Variable>& out) {
  for (const auto& t : ts)
    if (!t.constant) out.insert(t.name);
}

void collect_free(const Formula& f, std::set<Variable>& out) {
  switch (f->kind) {
    case Kind::VarEq:
    case Kind::VarNeq:
    case Kind::Rel:
    case Kind::NegRel:
    case Kind::TupleEq:
    case Kind::TupleNeq:
      add_terms(f->terms, out);
      return;
    case Kind::PropLit:
      out.insert(f->name);
      return;
    case Kind::MarginalIdentity:
    case Kind::MarginalEquiv:
    case Kind::CondIndep:
    case Kind::Dep:
    case Kind::Constancy:
      out.insert(f->x.begin(), f->x.end());
      out.insert(f->y.begin(), f->y.end());
      out.insert(f->z.begin(), f->z.end());
      return;
    case Kind::And:
    case Kind::Or:
    case Kind::ClassicalNeg:
    case Kind::Implies:
    case Kind::Iff:
      for (const auto& k : f->kids) collect_free(k, out);
      return;
    case Kind::Exists:
    case Kind::Forall:
    case Kind::BoundedExists:
    case Kind::BoundedForall: {
      std::set<Variable> inner;
      collect_free(f->kids[0], inner);
      inner.erase(f->name);
      out.insert(inner.begin(), inner.end());
      add_terms(f->terms, out);
      return;
    }
    case Kind::ConstExists: {
      std::set<Variable> inner;
      collect_free(f->kids[0], inner);
      for (const auto& v : f->x) inner.erase(v);
      out.insert(inner.begin(), inner.end());
      return;
    }
  }
}

void collect_all(const Formula& f, std::set<Variable>& out) {
  add_terms(f->terms, out);
  if (f->kind == Kind::PropLit || f->kind == Kind::Exists || f->kind == Kind::Forall ||
      f->kind == Kind::BoundedExists || f->kind == Kind::BoundedForall)
    out.insert(f->name);
  out.insert(f->x.begin(), f->x.end());
  out.insert(f->y.begin(), f->y.end());
  out.insert(f->z.begin(), f->z.end());
  for (const auto& k : f->kids) collect_all(k, out);
}

}  // namespace

std::set<Variable> free_vars(const Formula& f) {
  std::set<Variable> out;
  collect_free(f, out);
  return out;
}

std::set<Variable> all_vars(const Formula& f) {
  std::set<Variable> out;
  collect_all(f, out);
  return out;
}

std::size_t node_count(const Formula& f) {
  std::size_t n = 1;
  for (const auto& k : f->kids) n += node_count(k);
  return n;
}

std::size_t depth(const Formula& f) {
  std::size_t d = 0;
  for (const auto& k : f->kids) d = std::max(d, depth(k) + 1);
  return d;
}

bool contains_kind(const Formula& f, Kind k) {
  if (f->kind == k) return true;
  for (const auto& c : f->kids)
    if (contains_kind(c, k)) return true;
  return false;
}

bool is_pure_fo(const Formula& f) {
  if (is_dependency_atom(f->kind) || f->kind == Kind::ClassicalNeg || is_sugar(f->kind))
    return false;
  for (const auto& c : f->kids)
    if (!is_pure_fo(c)) return false;
  return true;
}

Formula literal_dual(const Formula& f) {
  switch (f->kind) {
    case Kind::VarEq:
      return f_neq(f->terms[0], f->terms[1]);
    case Kind::VarNeq:
      return f_eq(f->terms[0], f->terms[1]);
    case Kind::Rel:
      return f_negrel(f->name, f->terms);
    case Kind::NegRel:
      return f_rel(f->name, f->terms);
    case Kind::PropLit:
      return f_prop(f->name, !f->positive);
    case Kind::TupleEq: {
      std::size_t n = f->terms.size() / 2;
      return f_tuple_neq({f->terms.begin(), f->terms.begin() + n},
                         {f->terms.begin() + n, f->terms.end()});
    }
    case Kind::TupleNeq: {
      std::size_t n = f->terms.size() / 2;
      return f_tuple_eq({f->terms.begin(), f->terms.begin() + n},
                        {f->terms.begin() + n, f->terms.end()});
    }
    case Kind::And:
      return f_or(literal_dual(f->kids[0]), literal_dual(f->kids[1]));
    case Kind::Or:
      return f_and(literal_dual(f->kids[0]), literal_dual(f->kids[1]));
    default:
      throw UnsupportedSugarError(
          "guard must be a quantifier-free combination of literals");
  }
}

Formula expand_sugar(const Formula& f) {
  auto kid = [&](std::size_t i) { return expand_sugar(f->kids[i]); };
  switch (f->kind) {
    case Kind::And:
      return f_and(kid(0), kid(1));
    case Kind::Or:
      return f_or(kid(0), kid(1));
    case Kind::Exists:
      return f_exists(f->name, kid(0));
    case Kind::Forall:
      return f_forall(f->name, kid(0));
    case Kind::ClassicalNeg:
      return f_neg(kid(0));
    case Kind::TupleEq:
    case Kind::TupleNeq: {
      std::size_t n = f->terms.size() / 2;
      std::vector<Formula> parts;
      for (std::size_t i = 0; i < n; ++i)
        parts.push_back(f->kind == Kind::TupleEq ? f_eq(f->terms[i], f->terms[n + i])
                                                 : f_neq(f->terms[i], f->terms[n + i]));
      return f->kind == Kind::TupleEq ? and_all(parts) : or_all(parts);
    }
    case Kind::BoundedExists: {
      std::vector<Formula> in;
      for (const auto& t : f->terms) in.push_back(f_eq(var_term(f->name), t));
      return f_exists(f->name, f_and(or_all(in), kid(0)));
    }
    case Kind::BoundedForall: {
      std::vector<Formula> in, out;
      for (const auto& t : f->terms) {
        in.push_back(f_eq(var_term(f->name), t));
        out.push_back(f_neq(var_term(f->name), t));
      }
      return f_forall(f->name, f_or(and_all(out), f_and(or_all(in), kid(0))));
    }
    case Kind::ConstExists: {
      std::vector<Formula> parts;
      for (const auto& v : f->x) parts.push_back(f_const({v}));
      for (std::size_t i = 0; i < f->x.size(); ++i)
        for (std::size_t j = i + 1; j < f->x.size(); ++j)
          parts.push_back(f_neq(var_term(f->x[i]), var_term(f->x[j])));
      parts.push_back(kid(0));
      return exists_all(f->x, and_all(parts));
    }
    case Kind::Implies:
      return f_or(expand_sugar(literal_dual(f->kids[0])), kid(1));
    case Kind::Iff: {
      // Both sides must be literal combinations so their complements exist.
      auto a = kid(0), b = kid(1);
      return f_or(f_and(a, b), f_and(literal_dual(a), literal_dual(b)));
    }
    default:
      return f;
  }
}

Literal to_literal(const Formula& f) {
  Literal lit;
  switch (f->kind) {
    case Kind::VarEq:
      lit.kind = Literal::Kind::Eq;
      lit.args = f->terms;
      break;
    case Kind::VarNeq:
      lit.kind = Literal::Kind::Neq;
      lit.args = f->terms;
      break;
    case Kind::Rel:
      lit.kind = Literal::Kind::Rel;
      lit.relation = f->name;
      lit.args = f->terms;
      break;
    case Kind::NegRel:
      lit.kind = Literal::Kind::NegRel;
      lit.relation = f->name;
      lit.args = f->terms;
      break;
    case Kind::PropLit:
      lit.kind = f->positive ? Literal::Kind::Rel : Literal::Kind::NegRel;
      lit.relation = "P";
      lit.args = {var_term(f->name)};
      break;
    default:
      throw PreconditionError("not a literal");
  }
  return lit;
}

}  // namespace pts
