#include "pts/smtlib.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace pts {

namespace {

std::string numeral(const mpz_class& n) {
  if (n < 0) return "(- " + mpz_class(-n).get_str() + ")";
  return n.get_str();
}

std::string constant(const Rational& r) {
  if (r.get_den() == 1) return numeral(r.get_num());
  std::string frac = "(/ " + mpz_class(abs(r.get_num())).get_str() + " " + r.get_den().get_str() + ")";
  return sgn(r) < 0 ? "(- " + frac + ")" : frac;
}

void term(std::ostream& out, const ArithTerm& t, const VarTable& vars) {
  switch (t.kind) {
    case ArithTerm::Kind::Const:
      out << constant(t.value);
      return;
    case ArithTerm::Kind::Var:
      out << smt_symbol(vars.name(t.var));
      return;
    case ArithTerm::Kind::Add:
    case ArithTerm::Kind::Mul:
      if (t.args.empty()) {
        out << (t.kind == ArithTerm::Kind::Add ? "0" : "1");
        return;
      }
      if (t.args.size() == 1) {
        term(out, t.args[0], vars);
        return;
      }
      out << (t.kind == ArithTerm::Kind::Add ? "(+" : "(*");
      for (const auto& a : t.args) {
        out << ' ';
        term(out, a, vars);
      }
      out << ')';
      return;
  }
}

void binder(std::ostream& out, const std::vector<VarId>& vs, const VarTable& vars) {
  out << '(';
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (i) out << ' ';
    out << '(' << smt_symbol(vars.name(vs[i])) << " Real)";
  }
  out << ')';
}

void formula(std::ostream& out, const ArithFormula& f, const VarTable& vars) {
  using K = ArithFormula::Kind;
  switch (f.kind) {
    case K::True:
      out << "true";
      return;
    case K::False:
      out << "false";
      return;
    case K::Eq:
    case K::Leq:
      out << (f.kind == K::Eq ? "(= " : "(<= ");
      term(out, f.lhs, vars);
      out << ' ';
      term(out, f.rhs, vars);
      out << ')';
      return;
    case K::Not:
      out << "(not ";
      formula(out, f.kids[0], vars);
      out << ')';
      return;
    case K::And:
    case K::Or:
      if (f.kids.empty()) {
        out << (f.kind == K::And ? "true" : "false");
        return;
      }
      if (f.kids.size() == 1) {
        formula(out, f.kids[0], vars);
        return;
      }
      out << (f.kind == K::And ? "(and" : "(or");
      for (const auto& k : f.kids) {
        out << ' ';
        formula(out, k, vars);
      }
      out << ')';
      return;
    case K::Exists:
    case K::Forall:
      out << (f.kind == K::Exists ? "(exists " : "(forall ");
      binder(out, f.vars, vars);
      out << ' ';
      formula(out, f.kids[0], vars);
      out << ')';
      return;
  }
}

}  // namespace

std::string smt_symbol(const std::string& name) {
  static const std::string extra = "~!@$%^&*_-+=<>.?/";
  bool simple = !name.empty() && !std::isdigit(static_cast<unsigned char>(name[0]));
  for (char c : name)
    if (!std::isalnum(static_cast<unsigned char>(c)) && extra.find(c) == std::string::npos)
      simple = false;
  return simple ? name : "|" + name + "|";
}

std::string emit_smtlib(const ArithSentence& s, bool get_model) {
  std::ostringstream out;
  out << "(set-logic " << (is_nonlinear(s.phi) ? "NRA" : "LRA") << ")\n";
  std::set<VarId> declared;
  const ArithFormula* body = &s.phi;
  while (body->kind == ArithFormula::Kind::Exists) {
    declared.insert(body->vars.begin(), body->vars.end());
    body = &body->kids[0];
  }
  for (VarId v : free_arith_vars(*body)) declared.insert(v);
  for (VarId v : declared) out << "(declare-const " << smt_symbol(s.vars.name(v)) << " Real)\n";
  out << "(assert ";
  formula(out, *body, s.vars);
  out << ")\n(check-sat)\n";
  if (get_model && !declared.empty()) out << "(get-model)\n";
  return out.str();
}

}  // namespace pts
