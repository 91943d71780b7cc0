#include "pts/rewrite.hpp"

#include "pts/errors.hpp"
#include "pts/syntax.hpp"

namespace pts {

void FreshNameSource::reserve(const Formula& f) {
  for (const auto& v : all_vars(f)) reserved_.insert(v);
}

Variable FreshNameSource::next(const std::string& hint) {
  for (;;) {
    Variable v = "$" + hint + std::to_string(counter_++);
    if (reserved_.insert(v).second) return v;
  }
}

std::vector<Variable> FreshNameSource::tuple(const std::string& hint, std::size_t n) {
  std::vector<Variable> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(next(hint));
  return out;
}

TargetLogic parse_target(const std::string& text) {
  if (text == "FO(~)") return TargetLogic::Identity;
  if (text == "FO(~*)") return TargetLogic::Equivalence;
  if (text == "FO(~,dep)") return TargetLogic::IdentityDep;
  if (text == "FO(indep)") return TargetLogic::Independence;
  if (text == "FO(ci)") return TargetLogic::CondIndependence;
  if (text == "QPL") return TargetLogic::Qpl;
  throw InputError("unknown target logic " + text +
                   " (expected FO(~), FO(~*), FO(~,dep), FO(indep), FO(ci) or QPL)");
}

std::string to_string(TargetLogic t) {
  switch (t) {
    case TargetLogic::Identity:
      return "FO(~)";
    case TargetLogic::Equivalence:
      return "FO(~*)";
    case TargetLogic::IdentityDep:
      return "FO(~,dep)";
    case TargetLogic::Independence:
      return "FO(indep)";
    case TargetLogic::CondIndependence:
      return "FO(ci)";
    case TargetLogic::Qpl:
      return "QPL";
  }
  return "?";
}

bool atom_allowed(TargetLogic t, Kind k, bool conditional) {
  switch (k) {
    case Kind::MarginalIdentity:
      return t == TargetLogic::Identity || t == TargetLogic::IdentityDep || t == TargetLogic::Qpl;
    case Kind::MarginalEquiv:
      return t == TargetLogic::Equivalence;
    case Kind::Dep:
    case Kind::Constancy:
      return t == TargetLogic::IdentityDep || t == TargetLogic::Qpl;
    case Kind::CondIndep:
      return t == TargetLogic::CondIndependence || t == TargetLogic::Qpl ||
             (t == TargetLogic::Independence && !conditional);
    default:
      return true;
  }
}

namespace {

std::vector<Variable> cat(std::vector<Variable> a, const std::vector<Variable>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

Formula teq(const std::vector<Variable>& a, const std::vector<Variable>& b) {
  return expand_sugar(f_tuple_eq(var_terms(a), var_terms(b)));
}

Formula tneq(const std::vector<Variable>& a, const std::vector<Variable>& b) {
  return expand_sugar(f_tuple_neq(var_terms(a), var_terms(b)));
}

Formula eq(const Variable& a, const Variable& b) { return f_eq(var_term(a), var_term(b)); }

void require_nonempty(const std::vector<Variable>& t, const char* what) {
  if (t.empty()) throw InputError(std::string(what) + " with an empty tuple is not supported");
}

}  // namespace

Formula dep_to_ci(const Formula& f) {
  if (f->kind == Kind::Dep) return f_ci(f->x, f->y, f->y);
  if (f->kind == Kind::Constancy) return f_ci({}, f->x, f->x);
  throw PreconditionError("dep_to_ci expects a dependence atom");
}

Formula dep_to_equiv(const Formula& f, FreshNameSource& fresh) {
  std::vector<Variable> x, y;
  if (f->kind == Kind::Dep) {
    x = f->x;
    y = f->y;
  } else if (f->kind == Kind::Constancy) {
    y = f->x;
  } else {
    throw PreconditionError("dep_to_equiv expects a dependence atom");
  }
  require_nonempty(y, "dependence");
  // (y) =~* () would be the direct image of constancy; instead a uniformly
  // quantified u determines y exactly when y is constant.
  Variable u;
  if (x.empty()) {
    u = fresh.next("u");
    x = {u};
  }
  std::vector<Formula> chain;
  std::vector<Variable> prefix = x;
  for (const auto& yi : y) {
    chain.push_back(f_me(cat(prefix, {yi}), prefix));
    prefix.push_back(yi);
  }
  Formula out = and_all(chain);
  return u.empty() ? out : f_forall(u, out);
}

Formula equiv_to_identity_dep(const Formula& f, FreshNameSource& fresh) {
  if (f->kind != Kind::MarginalEquiv) throw PreconditionError("expected an =~* atom");
  require_nonempty(f->x, "=~*");
  require_nonempty(f->y, "=~*");
  auto z = fresh.tuple("z", f->x.size());
  return exists_all(z, and_all({f_dep(f->y, z), f_dep(z, f->y), f_mi(f->x, z)}));
}

Formula identity_to_equiv(const Formula& f, FreshNameSource& fresh) {
  if (f->kind != Kind::MarginalIdentity) throw PreconditionError("expected an =~ atom");
  require_nonempty(f->x, "=~");
  const auto &x = f->x, &y = f->y;
  auto z = fresh.tuple("z", x.size());
  Formula outside = f_and(tneq(z, x), tneq(z, y));
  Formula inside = f_and(f_or(teq(z, x), teq(z, y)), f_and(f_me(z, x), f_me(z, y)));
  return forall_all(z, f_or(outside, inside));
}

Formula identity_to_marg_indep(const Formula& f, FreshNameSource& fresh) {
  if (f->kind != Kind::MarginalIdentity) throw PreconditionError("expected an =~ atom");
  require_nonempty(f->x, "=~");
  const auto &x = f->x, &y = f->y;
  Variable c1 = fresh.next("c"), c2 = fresh.next("c");
  auto z = fresh.tuple("z", x.size());
  Variable d = fresh.next("d"), a = fresh.next("a"), b = fresh.next("b");
  std::vector<Term> cs{var_term(c1), var_term(c2)};

  Formula theta = f_or(f_and(eq(d, c1), teq(z, x)), f_and(eq(d, c2), teq(z, y)));
  Formula pick = f_or(f_and(eq(a, b), eq(d, c1)), f_and(f_neq(var_term(a), var_term(b)), eq(d, c2)));
  Formula phi = f_and(f_ci({}, z, {d}),
                      f_bounded_forall(a, cs, f_bounded_exists(b, cs, f_and(f_ci({}, {a}, {b}), pick))));
  Formula inner = f_or(teq(x, y),
                       f_and(tneq(x, y), f_or(f_and(tneq(z, x), tneq(z, y)), f_and(theta, phi))));
  Formula psi = f_const_exists({c1, c2}, forall_all(z, f_exists(d, inner)));
  return expand_sugar(psi);
}

Formula ci_to_marg_indep(const Formula& f, const Structure& structure, FreshNameSource& fresh) {
  if (f->kind != Kind::CondIndep) throw PreconditionError("expected a ci atom");
  if (!structure.constants.count("zero"))
    throw ConfigError("this translation needs a structure constant named \"zero\"");
  const auto &x0 = f->x, &x1 = f->y, &x2 = f->z;
  auto y0 = fresh.tuple("y", x0.size()), y1 = fresh.tuple("y", x1.size()),
       y2 = fresh.tuple("y", x2.size());
  auto y = cat(cat(y0, y1), y2);
  auto z0 = fresh.tuple("z", x0.size()), z1 = fresh.tuple("z", x0.size() + x1.size()),
       z2 = fresh.tuple("z", x0.size() + x2.size()),
       z3 = fresh.tuple("z", x0.size() + x1.size() + x2.size());
  Variable alpha = fresh.next("al"), beta = fresh.next("be");
  Term zero = const_term("zero");

  std::vector<Formula> parts;
  // Conjuncts over an empty tuple hold trivially and are left out.
  auto indep = [&](const std::vector<Variable>& l, const std::vector<Variable>& r) {
    if (!l.empty() && !r.empty()) parts.push_back(f_ci({}, l, r));
  };
  indep(y, z0);
  indep(cat(y, z0), z1);
  indep(cat(cat(y, z0), z1), z2);
  indep(cat(cat(cat(y, z0), z1), z2), z3);
  auto ident = [&](const std::vector<Variable>& l, const std::vector<Variable>& r) {
    if (!l.empty()) parts.push_back(f_mi(l, r));
  };
  ident(x0, z0);
  ident(cat(x0, x1), z1);
  ident(cat(x0, x2), z2);
  ident(cat(cat(x0, x1), x2), z3);
  auto guard = [&](const std::vector<std::pair<std::vector<Variable>, std::vector<Variable>>>& eqs) {
    std::vector<Formula> g;
    for (const auto& [l, r] : eqs)
      if (!l.empty()) g.push_back(teq(l, r));
    return g.empty() ? f_eq(zero, zero) : and_all(g);
  };
  parts.push_back(f_iff(f_eq(var_term(alpha), zero), guard({{z0, y0}, {z3, y}})));
  parts.push_back(f_iff(f_eq(var_term(beta), zero), guard({{z1, cat(y0, y1)}, {z2, cat(y0, y2)}})));
  parts.push_back(f_mi(cat(y, {alpha}), cat(y, {beta})));

  auto ex = cat(cat(cat(cat(z0, z1), z2), z3), {alpha, beta});
  return expand_sugar(forall_all(y, exists_all(ex, and_all(parts))));
}

bool within(const Formula& f, TargetLogic target) {
  if (is_dependency_atom(f->kind)) return atom_allowed(target, f->kind, !f->x.empty());
  if (f->kind == Kind::ClassicalNeg && target != TargetLogic::Qpl) return false;
  for (const auto& k : f->kids)
    if (!within(k, target)) return false;
  return true;
}

namespace {

[[noreturn]] void no_path(const Formula& atom, TargetLogic target, const std::string& why) {
  throw NoPathError(print(atom) + " has no translation into " + to_string(target) + ": " + why);
}

const char* kUnionClosure =
    "FO(~) is closed under scaled unions of teams, and this atom is not (a team constant at 0 "
    "mixed with one constant at 1 breaks it)";
const char* kOpenGap =
    "conditional independence is not known to be expressible with =~ and dep, and no translation "
    "is implemented";

class Lowering {
 public:
  Lowering(TargetLogic target, const Structure& structure, FreshNameSource& fresh)
      : target_(target), structure_(structure), fresh_(fresh) {}

  Formula run(const Formula& f) {
    switch (f->kind) {
      case Kind::And:
        return f_and(run(f->kids[0]), run(f->kids[1]));
      case Kind::Or:
        return f_or(run(f->kids[0]), run(f->kids[1]));
      case Kind::Exists:
        return f_exists(f->name, run(f->kids[0]));
      case Kind::Forall:
        return f_forall(f->name, run(f->kids[0]));
      case Kind::ClassicalNeg:
        return f_neg(run(f->kids[0]));
      default:
        break;
    }
    if (!is_dependency_atom(f->kind) || atom_allowed(target_, f->kind, !f->x.empty())) return f;
    return run(step(f));
  }

 private:
  bool indep_target() const {
    return target_ == TargetLogic::Independence || target_ == TargetLogic::CondIndependence;
  }

  void need_two_elements(const Formula& atom) const {
    if (structure_.universe.size() < 2)
      no_path(atom, target_, "expressing =~ with independence needs at least two elements");
  }

  // One translation step; the result is lowered again by run.
  Formula step(const Formula& f) {
    switch (f->kind) {
      case Kind::Dep:
      case Kind::Constancy:
        if (target_ == TargetLogic::Identity) no_path(f, target_, kUnionClosure);
        if (target_ == TargetLogic::Equivalence) return dep_to_equiv(f, fresh_);
        return dep_to_ci(f);
      case Kind::MarginalIdentity:
        if (target_ == TargetLogic::Equivalence) return identity_to_equiv(f, fresh_);
        need_two_elements(f);
        return identity_to_marg_indep(f, fresh_);
      case Kind::MarginalEquiv:
        if (target_ == TargetLogic::Identity) no_path(f, target_, kUnionClosure);
        return equiv_to_identity_dep(f, fresh_);
      case Kind::CondIndep:
        if (target_ == TargetLogic::Identity)
          no_path(f, target_, "FO(~) is closed under scaled unions of teams and independence is not");
        if (!indep_target()) no_path(f, target_, kOpenGap);
        need_two_elements(f);
        return ci_to_marg_indep(f, structure_, fresh_);
      default:
        return f;
    }
  }

  TargetLogic target_;
  const Structure& structure_;
  FreshNameSource& fresh_;
};

}  // namespace

Formula lower(const Formula& f, TargetLogic target, const Structure& structure,
              FreshNameSource& fresh) {
  Formula g = expand_sugar(f);
  fresh.reserve(g);
  if (target != TargetLogic::Qpl && contains_kind(g, Kind::ClassicalNeg))
    throw NoPathError("classical negation is only available in QPL");
  return Lowering(target, structure, fresh).run(g);
}

Formula lower(const Formula& f, TargetLogic target, const Structure& structure) {
  FreshNameSource fresh(f);
  return lower(f, target, structure, fresh);
}

}  // namespace pts
