#include <algorithm>
#include <set>

#include "pts/errors.hpp"
#include "pts/linear.hpp"
#include "pts/simplex.hpp"
#include "pts/solver.hpp"

namespace pts {

std::string to_string(SolverVerdict::Status s) {
  switch (s) {
    case SolverVerdict::Status::Sat:
      return "sat";
    case SolverVerdict::Status::Unsat:
      return "unsat";
    case SolverVerdict::Status::Unknown:
      return "unknown";
  }
  return "unknown";
}

namespace {

struct BudgetExceeded {};

// Negation normal form over polynomial constraints. An And without kids is
// true, an Or without kids is false.
struct CNode {
  enum class Kind { Atom, And, Or };
  Kind kind = Kind::And;
  PolyConstraint atom;
  std::vector<CNode> kids;
};

CNode atom_node(PolyConstraint c) {
  CNode n;
  n.kind = CNode::Kind::Atom;
  n.atom = std::move(c);
  return n;
}

CNode junction(CNode::Kind k, std::vector<CNode> kids) {
  CNode n;
  n.kind = k;
  n.kids = std::move(kids);
  return n;
}

PolyConstraint negated_sides(PolyConstraint c) {
  for (auto& p : c.products) p.coef = -p.coef;
  c.lin *= -1;
  return c;
}

// e != 0 as e < 0 or -e < 0 when linear.
CNode split_ne(const PolyConstraint& c) {
  PolyConstraint lo = c, hi = negated_sides(c);
  lo.rel = hi.rel = Rel::Lt;
  return junction(CNode::Kind::Or, {atom_node(std::move(lo)), atom_node(std::move(hi))});
}

CNode make_atom(PolyConstraint c) {
  if (c.rel == Rel::Ne && c.is_linear()) return split_ne(c);
  return atom_node(std::move(c));
}

CNode negate_atom(const PolyConstraint& c) {
  switch (c.rel) {
    case Rel::Eq: {
      PolyConstraint n = c;
      n.rel = Rel::Ne;
      return make_atom(std::move(n));
    }
    case Rel::Ne: {
      PolyConstraint n = c;
      n.rel = Rel::Eq;
      return atom_node(std::move(n));
    }
    case Rel::Le: {
      PolyConstraint n = negated_sides(c);
      n.rel = Rel::Lt;
      return atom_node(std::move(n));
    }
    case Rel::Lt: {
      PolyConstraint n = negated_sides(c);
      n.rel = Rel::Le;
      return atom_node(std::move(n));
    }
  }
  return atom_node(c);
}

CNode negate(const CNode& n) {
  switch (n.kind) {
    case CNode::Kind::Atom:
      return negate_atom(n.atom);
    case CNode::Kind::And:
    case CNode::Kind::Or: {
      std::vector<CNode> kids;
      for (const auto& k : n.kids) kids.push_back(negate(k));
      return junction(n.kind == CNode::Kind::And ? CNode::Kind::Or : CNode::Kind::And,
                      std::move(kids));
    }
  }
  return n;
}

CNode convert(const ArithFormula& f, bool neg) {
  using K = ArithFormula::Kind;
  switch (f.kind) {
    case K::True:
      return junction(neg ? CNode::Kind::Or : CNode::Kind::And, {});
    case K::False:
      return junction(neg ? CNode::Kind::And : CNode::Kind::Or, {});
    case K::Eq:
    case K::Leq: {
      auto c = to_constraint(f.lhs, f.rhs, f.kind == K::Eq ? Rel::Eq : Rel::Le);
      if (!c) throw FragmentError("unsupported term shape");
      return neg ? negate_atom(*c) : make_atom(std::move(*c));
    }
    case K::Not:
      return convert(f.kids[0], !neg);
    case K::And:
    case K::Or: {
      bool conj = (f.kind == K::And) != neg;
      std::vector<CNode> kids;
      for (const auto& k : f.kids) kids.push_back(convert(k, neg));
      return junction(conj ? CNode::Kind::And : CNode::Kind::Or, std::move(kids));
    }
    case K::Exists:
    case K::Forall:
      throw PreconditionError("quantifier inside a quantifier-free matrix");
  }
  return junction(CNode::Kind::And, {});
}

// ---------------------------------------------------------------------------
// Existential search.

struct State {
  EqSystem eqs;
  std::vector<PolyConstraint> atoms;
  std::vector<CNode> ors;
  bool infeasible = false;
};

void add_node(State& s, CNode n) {
  switch (n.kind) {
    case CNode::Kind::Atom:
      s.atoms.push_back(std::move(n.atom));
      return;
    case CNode::Kind::And:
      for (auto& k : n.kids) add_node(s, std::move(k));
      return;
    case CNode::Kind::Or:
      if (n.kids.empty())
        s.infeasible = true;
      else if (n.kids.size() == 1)
        add_node(s, std::move(n.kids[0]));
      else
        s.ors.push_back(std::move(n));
      return;
  }
}

// 1 true, 0 false, -1 open.
int quick_eval(const CNode& n, const EqSystem& eqs) {
  switch (n.kind) {
    case CNode::Kind::Atom: {
      PolyConstraint c = n.atom;
      eqs.reduce_in_place(c);
      if (c.is_linear() && c.lin.is_constant()) return holds_constant(c.lin, c.rel) ? 1 : 0;
      return -1;
    }
    case CNode::Kind::And: {
      int out = 1;
      for (const auto& k : n.kids) {
        int v = quick_eval(k, eqs);
        if (v == 0) return 0;
        if (v < 0) out = -1;
      }
      return out;
    }
    case CNode::Kind::Or: {
      int out = 0;
      for (const auto& k : n.kids) {
        int v = quick_eval(k, eqs);
        if (v == 1) return 1;
        if (v < 0) out = -1;
      }
      return out;
    }
  }
  return -1;
}

bool propagate(State& s) {
  bool changed = true;
  while (changed && !s.infeasible) {
    changed = false;
    std::vector<PolyConstraint> kept;
    auto pending = std::move(s.atoms);
    s.atoms.clear();
    for (auto& a : pending) {
      s.eqs.reduce_in_place(a);
      if (a.is_linear()) {
        if (a.lin.is_constant()) {
          if (!holds_constant(a.lin, a.rel)) return s.infeasible = true, false;
          continue;
        }
        if (a.rel == Rel::Eq) {
          if (!s.eqs.add(a.lin)) return s.infeasible = true, false;
          changed = true;
          continue;
        }
        if (a.rel == Rel::Ne) {
          s.ors.push_back(split_ne(a));
          continue;
        }
      }
      kept.push_back(std::move(a));
    }
    // Atoms added while walking (none today) would sit in s.atoms.
    for (auto& a : s.atoms) kept.push_back(std::move(a));
    s.atoms = std::move(kept);

    std::vector<CNode> ors = std::move(s.ors);
    s.ors.clear();
    for (auto& o : ors) {
      std::vector<CNode> live;
      bool satisfied = false;
      for (auto& k : o.kids) {
        int v = quick_eval(k, s.eqs);
        if (v == 1) {
          satisfied = true;
          break;
        }
        if (v < 0) live.push_back(std::move(k));
      }
      if (satisfied) continue;
      if (live.empty()) return s.infeasible = true, false;
      if (live.size() == 1) {
        add_node(s, std::move(live[0]));
        changed = true;
      } else {
        o.kids = std::move(live);
        s.ors.push_back(std::move(o));
      }
    }
    if (s.infeasible) return false;
  }
  return !s.infeasible;
}

struct LpResult {
  bool feasible = false;
  std::map<VarId, Rational> values;  // all variables, pivots included
};

LpResult check_linear(const State& s) {
  Simplex lp;
  std::map<VarId, int> index;
  auto idx = [&](VarId v) {
    auto it = index.find(v);
    if (it != index.end()) return it->second;
    int i = lp.add_var();
    index[v] = i;
    return i;
  };
  for (const auto& a : s.atoms) {
    if (!a.is_linear()) continue;
    const LinExpr& e = a.lin;
    bool strict = a.rel == Rel::Lt;
    if (e.coef.size() == 1) {
      auto [v, c] = *e.coef.begin();
      Rational bound = -e.constant / c;
      if (sgn(c) > 0)
        lp.set_upper(idx(v), bound, strict);
      else
        lp.set_lower(idx(v), bound, strict);
      continue;
    }
    std::map<int, Rational> row;
    for (const auto& [v, c] : e.coef) row[idx(v)] = c;
    int r = lp.add_row(row);
    lp.set_upper(r, -e.constant, strict);
  }
  for (const auto& a : s.atoms)
    if (!a.is_linear()) {
      for (const auto& p : a.products)
        for (const auto& f : p.factors)
          for (const auto& [v, c] : f.coef) idx(v);
      for (const auto& [v, c] : a.lin.coef) idx(v);
    }
  for (const auto& [p, e] : s.eqs.pivots())
    for (const auto& [v, c] : e.coef) idx(v);
  LpResult out;
  out.feasible = lp.check();
  if (!out.feasible) return out;
  auto m = lp.model();
  for (const auto& [v, i] : index) out.values[v] = m[i];
  for (const auto& [p, e] : s.eqs.pivots()) out.values[p] = e.eval(out.values);
  return out;
}

Rational eval_product_sum(const PolyConstraint& c, const std::map<VarId, Rational>& values) {
  Rational out = c.lin.eval(values);
  for (const auto& p : c.products) {
    Rational prod = p.coef;
    for (const auto& f : p.factors) prod *= f.eval(values);
    out += prod;
  }
  return out;
}

bool holds_at(const PolyConstraint& c, const std::map<VarId, Rational>& values) {
  return holds_constant(LinExpr::of_const(eval_product_sum(c, values)), c.rel);
}

std::map<std::string, Rational> named(const VarTable& vars,
                                      const std::map<VarId, Rational>& values) {
  std::map<std::string, Rational> out;
  for (std::size_t v = 0; v < vars.size(); ++v) {
    auto it = values.find(static_cast<VarId>(v));
    out[vars.name(static_cast<VarId>(v))] = it == values.end() ? Rational(0) : it->second;
  }
  return out;
}

class Search {
 public:
  Search(const VarTable& vars, const ExistsOptions& opts) : vars_(vars), opts_(opts) {}

  SolverVerdict run(State s) {
    if (++nodes_ > opts_.max_branches) throw BudgetExceeded{};
    if (!propagate(s)) return unsat();
    LpResult lp = check_linear(s);
    if (!lp.feasible) return unsat();
    if (!s.ors.empty()) {
      std::size_t best = 0;
      for (std::size_t i = 1; i < s.ors.size(); ++i)
        if (s.ors[i].kids.size() < s.ors[best].kids.size()) best = i;
      CNode choice = std::move(s.ors[best]);
      s.ors.erase(s.ors.begin() + static_cast<long>(best));
      SolverVerdict out = unsat();
      for (auto& k : choice.kids) {
        State t = s;
        add_node(t, std::move(k));
        SolverVerdict v = run(std::move(t));
        if (v.sat()) return v;
        if (v.unknown()) out = v;
      }
      return out;
    }
    bool nonlinear = std::any_of(s.atoms.begin(), s.atoms.end(),
                                 [](const PolyConstraint& a) { return !a.is_linear(); });
    if (!nonlinear) return sat(lp.values, "linear");
    if (opts_.try_relaxation_model &&
        std::all_of(s.atoms.begin(), s.atoms.end(),
                    [&](const PolyConstraint& a) { return holds_at(a, lp.values); }))
      return sat(lp.values, "relaxation model");
    if (!opts_.residue) {
      SolverVerdict v;
      v.reason = "solver-missing";
      return v;
    }
    return residue(s);
  }

 private:
  SolverVerdict unsat() {
    SolverVerdict v;
    v.status = SolverVerdict::Status::Unsat;
    v.reason = "internal";
    return v;
  }

  SolverVerdict sat(const std::map<VarId, Rational>& values, const std::string& how) {
    SolverVerdict v;
    v.status = SolverVerdict::Status::Sat;
    v.model = named(vars_, values);
    v.reason = how;
    return v;
  }

  SolverVerdict residue(const State& s) {
    std::vector<ArithFormula> parts;
    for (const auto& a : s.atoms) parts.push_back(to_formula(a));
    ArithSentence sub;
    sub.vars = vars_;
    ArithFormula conj = a_and(std::move(parts));
    sub.phi = a_exists(free_arith_vars(conj), std::move(conj));
    SolverVerdict v = opts_.residue(sub);
    if (v.sat() && v.model) {
      std::map<VarId, Rational> values;
      for (const auto& [name, val] : *v.model)
        if (vars_.contains(name)) values[vars_.id(name)] = val;
      for (const auto& [p, e] : s.eqs.pivots()) values[p] = e.eval(values);
      v.model = named(vars_, values);
    }
    return v;
  }

  const VarTable& vars_;
  const ExistsOptions& opts_;
  std::size_t nodes_ = 0;
};

// ---------------------------------------------------------------------------
// Fourier-Motzkin.

using Conj = std::vector<PolyConstraint>;  // linear, rel in {Eq, Le, Lt}

void normalize(PolyConstraint& c) {
  if (c.lin.coef.empty()) return;
  Rational lead = c.lin.coef.begin()->second;
  if (c.rel != Rel::Eq) lead = abs(lead);
  c.lin *= Rational(1) / lead;
}

struct AtomLess {
  bool operator()(const PolyConstraint& a, const PolyConstraint& b) const {
    if (a.rel != b.rel) return a.rel < b.rel;
    return a.lin < b.lin;
  }
};

// Drops true constants and duplicates; nullopt when a constant atom is false.
std::optional<Conj> tidy(Conj c) {
  std::set<PolyConstraint, AtomLess> seen;
  Conj out;
  for (auto& a : c) {
    if (a.lin.is_constant()) {
      if (!holds_constant(a.lin, a.rel)) return std::nullopt;
      continue;
    }
    normalize(a);
    if (seen.insert(a).second) out.push_back(std::move(a));
  }
  return out;
}

bool feasible(const Conj& c) {
  State s;
  for (const auto& a : c) s.atoms.push_back(a);
  if (!propagate(s)) return false;
  return check_linear(s).feasible;
}

constexpr std::size_t kDnfLimit = 200000;

std::vector<Conj> to_dnf(const CNode& n) {
  switch (n.kind) {
    case CNode::Kind::Atom: {
      if (!n.atom.is_linear()) throw FragmentError("nonlinear constraint in linear_qe");
      if (n.atom.rel == Rel::Ne) return to_dnf(split_ne(n.atom));
      auto t = tidy({n.atom});
      if (!t) return {};
      return {*t};
    }
    case CNode::Kind::Or: {
      std::vector<Conj> out;
      for (const auto& k : n.kids) {
        auto d = to_dnf(k);
        out.insert(out.end(), d.begin(), d.end());
        if (out.size() > kDnfLimit) throw BudgetExceeded{};
      }
      return out;
    }
    case CNode::Kind::And: {
      std::vector<Conj> acc{Conj{}};
      for (const auto& k : n.kids) {
        auto d = to_dnf(k);
        std::vector<Conj> next;
        for (const auto& a : acc)
          for (const auto& b : d) {
            Conj m = a;
            m.insert(m.end(), b.begin(), b.end());
            auto t = tidy(std::move(m));
            if (!t) continue;
            if (t->size() > 4 && !feasible(*t)) continue;
            next.push_back(std::move(*t));
            if (next.size() > kDnfLimit) throw BudgetExceeded{};
          }
        acc = std::move(next);
        if (acc.empty()) break;
      }
      return acc;
    }
  }
  return {};
}

Conj eliminate(Conj c, VarId x) {
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i].rel != Rel::Eq || !c[i].lin.coef.count(x)) continue;
    LinExpr def = c[i].lin;
    Rational a = def.coef.at(x);
    def.coef.erase(x);
    def *= Rational(-1) / a;
    Conj out;
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (j == i) continue;
      PolyConstraint d = c[j];
      d.lin.substitute(x, def);
      out.push_back(std::move(d));
    }
    return out;
  }
  Conj out, lower, upper;
  for (auto& a : c) {
    auto it = a.lin.coef.find(x);
    if (it == a.lin.coef.end())
      out.push_back(std::move(a));
    else if (sgn(it->second) > 0)
      upper.push_back(std::move(a));
    else
      lower.push_back(std::move(a));
  }
  for (const auto& l : lower)
    for (const auto& u : upper) {
      Rational al = -l.lin.coef.at(x), au = u.lin.coef.at(x);
      PolyConstraint m;
      m.lin = l.lin * au + u.lin * al;
      m.lin.coef.erase(x);
      m.rel = (l.rel == Rel::Lt || u.rel == Rel::Lt) ? Rel::Lt : Rel::Le;
      out.push_back(std::move(m));
    }
  return out;
}

CNode from_dnf(const std::vector<Conj>& d) {
  std::vector<CNode> disj;
  for (const auto& c : d) {
    std::vector<CNode> atoms;
    for (const auto& a : c) atoms.push_back(atom_node(a));
    disj.push_back(junction(CNode::Kind::And, std::move(atoms)));
  }
  return junction(CNode::Kind::Or, std::move(disj));
}

CNode exists_elim(const CNode& body, const std::vector<VarId>& vars) {
  std::vector<Conj> out;
  for (auto c : to_dnf(body)) {
    std::optional<Conj> t = std::move(c);
    for (VarId v : vars) {
      t = tidy(eliminate(std::move(*t), v));
      if (!t) break;
    }
    if (!t) continue;
    if (!t->empty() && !feasible(*t)) continue;
    if (t->empty()) return junction(CNode::Kind::And, {});
    out.push_back(std::move(*t));
  }
  return from_dnf(out);
}

CNode qe(const ArithFormula& f, bool neg) {
  using K = ArithFormula::Kind;
  switch (f.kind) {
    case K::Exists:
    case K::Forall: {
      // forall v. b is not exists v. not b.
      CNode inner = qe(f.kids[0], f.kind == K::Forall);
      CNode elim = exists_elim(inner, f.vars);
      bool flip = (f.kind == K::Forall) != neg;
      return flip ? negate(elim) : elim;
    }
    case K::Not:
      return qe(f.kids[0], !neg);
    case K::And:
    case K::Or: {
      bool conj = (f.kind == K::And) != neg;
      std::vector<CNode> kids;
      for (const auto& k : f.kids) kids.push_back(qe(k, neg));
      return junction(conj ? CNode::Kind::And : CNode::Kind::Or, std::move(kids));
    }
    default:
      return convert(f, neg);
  }
}

// Keeps the outermost existential quantifiers (collected into evars) and
// eliminates every other quantifier, leaving a quantifier-free matrix.
CNode eliminate_inner(const ArithFormula& f, bool neg, std::vector<VarId>& evars) {
  using K = ArithFormula::Kind;
  switch (f.kind) {
    case K::Exists:
    case K::Forall:
      if ((f.kind == K::Exists) == !neg) {
        evars.insert(evars.end(), f.vars.begin(), f.vars.end());
        return eliminate_inner(f.kids[0], neg, evars);
      }
      return qe(f, neg);
    case K::Not:
      return eliminate_inner(f.kids[0], !neg, evars);
    case K::And:
    case K::Or: {
      bool conj = (f.kind == K::And) != neg;
      std::vector<CNode> kids;
      for (const auto& k : f.kids) kids.push_back(eliminate_inner(k, neg, evars));
      return junction(conj ? CNode::Kind::And : CNode::Kind::Or, std::move(kids));
    }
    default:
      return convert(f, neg);
  }
}

bool has_quantifier(const ArithFormula& f) {
  if (f.kind == ArithFormula::Kind::Exists || f.kind == ArithFormula::Kind::Forall) return true;
  return std::any_of(f.kids.begin(), f.kids.end(), has_quantifier);
}

// Whether the first quantifier met under f (under negation when neg is set)
// is universal.
bool outer_universal(const ArithFormula& f, bool neg) {
  using K = ArithFormula::Kind;
  switch (f.kind) {
    case K::Exists:
      return neg;
    case K::Forall:
      return !neg;
    case K::Not:
      return outer_universal(f.kids[0], !neg);
    case K::And:
    case K::Or:
      for (const auto& k : f.kids)
        if (has_quantifier(k)) return outer_universal(k, neg);
      return false;
    default:
      return false;
  }
}

}  // namespace

// Pulls positive existential quantifiers to the front; fails on anything that
// would need a universal after negation normal form.
bool pull_existentials(const ArithFormula& f, bool neg, std::vector<VarId>& vars,
                       ArithFormula& out) {
  using K = ArithFormula::Kind;
  switch (f.kind) {
    case K::Exists:
    case K::Forall: {
      bool existential = (f.kind == K::Exists) != neg;
      if (!existential) return false;
      vars.insert(vars.end(), f.vars.begin(), f.vars.end());
      return pull_existentials(f.kids[0], neg, vars, out);
    }
    case K::Not:
      return pull_existentials(f.kids[0], !neg, vars, out);
    case K::And:
    case K::Or: {
      std::vector<ArithFormula> kids;
      for (const auto& k : f.kids) {
        ArithFormula g;
        if (!pull_existentials(k, neg, vars, g)) return false;
        kids.push_back(std::move(g));
      }
      bool conj = (f.kind == K::And) != neg;
      out = conj ? a_and(std::move(kids)) : a_or(std::move(kids));
      return true;
    }
    default:
      out = neg ? a_not(f) : f;
      return true;
  }
}

SolverVerdict decide_existential(const ArithFormula& matrix, const VarTable& vars,
                                 const ExistsOptions& opts) {
  State s;
  add_node(s, convert(matrix, false));
  Search search(vars, opts);
  try {
    return search.run(std::move(s));
  } catch (const BudgetExceeded&) {
    SolverVerdict v;
    v.reason = "budget";
    return v;
  }
}

SolverVerdict linear_qe(const ArithSentence& s) {
  if (is_nonlinear(s.phi)) throw FragmentError("linear_qe needs a multiplication-free sentence");
  if (!free_arith_vars(s.phi).empty()) throw PreconditionError("linear_qe needs a closed sentence");
  SolverVerdict v;
  std::vector<VarId> evars;
  ArithFormula matrix;
  try {
    if (pull_existentials(s.phi, false, evars, matrix)) {
      v = decide_existential(matrix, s.vars);
      v.reason = "linear: existential search";
      return v;
    }
    evars.clear();
    // Universal closure: decide the existential negation and flip.
    if (pull_existentials(s.phi, true, evars, matrix)) {
      v = decide_existential(matrix, s.vars);
        if (!v.unknown()) v.status = v.sat() ? SolverVerdict::Status::Unsat : SolverVerdict::Status::Sat;
      v.reason = "linear: refuted negation search";
      return v;
    }
    // Inner blocks by elimination, the outer block by search (on the negation
    // when it is universal).
    evars.clear();
    bool flip = outer_universal(s.phi, false);
    State st;
    add_node(st, eliminate_inner(s.phi, flip, evars));
    ExistsOptions opts;
    Search search(s.vars, opts);
    v = search.run(std::move(st));
    if (flip && !v.unknown()) {
      v.status = v.sat() ? SolverVerdict::Status::Unsat : SolverVerdict::Status::Sat;
      if (v.sat()) v.model.reset();
    }
    v.reason = "linear: quantifier elimination";
  } catch (const BudgetExceeded&) {
    v.status = SolverVerdict::Status::Unknown;
    v.reason = "budget";
  }
  return v;
}

}  // namespace pts
