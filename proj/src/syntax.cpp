#include "pts/syntax.hpp"

#include <cctype>
#include <optional>

#include "pts/errors.hpp"

namespace pts {

namespace {

enum class Tok {
  Ident,
  Const,
  LParen,
  RParen,
  LBrace,
  RBrace,
  Comma,
  Semi,
  Dot,
  Amp,
  Bar,
  Tilde,
  Bang,
  Eq,
  Neq,
  Approx,
  ApproxStar,
  Arrow,
  Iff,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$' || c == '\'';
}

std::vector<Token> lex(std::string_view s, bool allow_reserved) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (s[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto starts = [&](std::string_view p) { return s.substr(i, p.size()) == p; };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    int l = line, cl = col;
    auto push = [&](Tok k, std::size_t n) {
      out.push_back({k, std::string(s.substr(i, n)), l, cl});
      advance(n);
    };
    if (ident_start(c) || c == '#') {
      std::size_t j = i + 1;
      while (j < s.size() && ident_char(s[j])) ++j;
      std::string text(s.substr(i, j - i));
      if (c == '#') {
        if (text.size() == 1) throw SyntaxError("expected constant name after '#'", l, cl);
        out.push_back({Tok::Const, text.substr(1), l, cl});
      } else {
        if (!allow_reserved && text.find('$') != std::string::npos)
          throw SyntaxError("names containing '$' are reserved", l, cl);
        out.push_back({Tok::Ident, text, l, cl});
      }
      advance(j - i);
      continue;
    }
    if (c == '#' || std::isdigit(static_cast<unsigned char>(c))) {
      // Bare digits are not identifiers; constants are written #name.
      throw SyntaxError(std::string("unexpected '") + c + "' (constants are written #name)", l, cl);
    }
    if (starts("=~*")) push(Tok::ApproxStar, 3);
    else if (starts("=~")) push(Tok::Approx, 2);
    else if (starts("!=")) push(Tok::Neq, 2);
    else if (starts("<->")) push(Tok::Iff, 3);
    else if (starts("->")) push(Tok::Arrow, 2);
    else if (c == '=') push(Tok::Eq, 1);
    else if (c == '(') push(Tok::LParen, 1);
    else if (c == ')') push(Tok::RParen, 1);
    else if (c == '{') push(Tok::LBrace, 1);
    else if (c == '}') push(Tok::RBrace, 1);
    else if (c == ',') push(Tok::Comma, 1);
    else if (c == ';') push(Tok::Semi, 1);
    else if (c == '.') push(Tok::Dot, 1);
    else if (c == '&') push(Tok::Amp, 1);
    else if (c == '|') push(Tok::Bar, 1);
    else if (c == '~') push(Tok::Tilde, 1);
    else if (c == '!') push(Tok::Bang, 1);
    else throw SyntaxError(std::string("unexpected character '") + c + "'", l, cl);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

bool is_keyword(const std::string& s) {
  return s == "E" || s == "A" || s == "Ec" || s == "in" || s == "ci" || s == "dep" ||
         s == "const";
}

class Parser {
 public:
  Parser(std::vector<Token> toks, Mode mode) : toks_(std::move(toks)), mode_(mode) {}

  Formula run() {
    Formula f = formula();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
    return f;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Mode mode_;

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }
  [[noreturn]] void fail(const std::string& msg, const Token* at = nullptr) const {
    const Token& t = at ? *at : peek();
    throw SyntaxError(msg, t.line, t.col);
  }
  const Token& expect(Tok k, const char* what) {
    if (peek().kind != k)
      fail(std::string("expected ") + what +
           (peek().kind == Tok::End ? " at end of input" : ", found '" + peek().text + "'"));
    return next();
  }
  bool is_kw(const char* kw, std::size_t ahead = 0) const {
    return peek(ahead).kind == Tok::Ident && peek(ahead).text == kw;
  }

  std::string variable() {
    const Token& t = peek();
    if (t.kind != Tok::Ident || is_keyword(t.text)) fail("expected a variable");
    ++pos_;
    return t.text;
  }

  Term term() {
    const Token& t = peek();
    if (t.kind == Tok::Const) {
      ++pos_;
      return const_term(t.text);
    }
    return var_term(variable());
  }

  Formula formula() {
    Formula left = disjunction();
    if (peek().kind == Tok::Arrow || peek().kind == Tok::Iff) {
      bool iff = next().kind == Tok::Iff;
      Formula right = disjunction();
      left = iff ? f_iff(left, right) : f_implies(left, right);
      if (peek().kind == Tok::Arrow || peek().kind == Tok::Iff)
        fail("'->' and '<->' do not chain; add parentheses");
    }
    return left;
  }

  Formula disjunction() {
    Formula f = conjunction();
    while (accept(Tok::Bar)) f = f_or(f, conjunction());
    return f;
  }

  Formula conjunction() {
    Formula f = unary();
    while (accept(Tok::Amp)) f = f_and(f, unary());
    return f;
  }

  Formula unary() {
    const Token& t = peek();
    if (t.kind == Tok::Tilde) {
      if (mode_ == Mode::FO) fail("classical negation '~' is only allowed in QPL mode");
      ++pos_;
      return f_neg(unary());
    }
    if (t.kind == Tok::Bang) {
      const Token& bang = next();
      Formula inner = unary();
      if (!is_literal(inner->kind) && inner->kind != Kind::TupleEq &&
          inner->kind != Kind::TupleNeq)
        fail("'!' applies only to literals (formulas are in negation normal form)", &bang);
      return literal_dual(inner);
    }
    if (is_kw("E") || is_kw("A") || is_kw("Ec")) return quantifier();
    return primary();
  }

  Formula quantifier() {
    std::string q = next().text;
    if (q == "Ec") {
      std::vector<Variable> vs{variable()};
      while (accept(Tok::Comma)) vs.push_back(variable());
      expect(Tok::Dot, "'.'");
      return f_const_exists(std::move(vs), formula());
    }
    std::string v = variable();
    if (is_kw("in")) {
      ++pos_;
      expect(Tok::LBrace, "'{'");
      std::vector<Term> set{term()};
      while (accept(Tok::Comma)) set.push_back(term());
      expect(Tok::RBrace, "'}'");
      expect(Tok::Dot, "'.'");
      Formula body = formula();
      return q == "E" ? f_bounded_exists(v, std::move(set), body)
                      : f_bounded_forall(v, std::move(set), body);
    }
    expect(Tok::Dot, "'.'");
    Formula body = formula();
    return q == "E" ? f_exists(v, body) : f_forall(v, body);
  }

  // '(' terms ')' with possibly zero terms; nullopt (and no consumption) if
  // the parenthesis does not hold a plain term list.
  std::optional<std::vector<Term>> try_tuple() {
    std::size_t save = pos_;
    if (!accept(Tok::LParen)) return std::nullopt;
    std::vector<Term> ts;
    if (!accept(Tok::RParen)) {
      while (true) {
        const Token& t = peek();
        if (t.kind == Tok::Const) {
          ++pos_;
          ts.push_back(const_term(t.text));
        } else if (t.kind == Tok::Ident && !is_keyword(t.text) &&
                   peek(1).kind != Tok::LParen) {
          ++pos_;
          ts.push_back(var_term(t.text));
        } else {
          pos_ = save;
          return std::nullopt;
        }
        if (accept(Tok::RParen)) break;
        if (!accept(Tok::Comma)) {
          pos_ = save;
          return std::nullopt;
        }
      }
    }
    return ts;
  }

  std::vector<Variable> as_vars(const std::vector<Term>& ts, const Token& at) {
    std::vector<Variable> out;
    for (const auto& t : ts) {
      if (t.constant) fail("dependency atoms take variables, not constants", &at);
      out.push_back(t.name);
    }
    return out;
  }

  // Right-hand side of a tuple atom: a parenthesized tuple or a single term.
  std::vector<Term> rhs_tuple() {
    if (auto t = try_tuple()) return *t;
    return {term()};
  }

  Formula tuple_atom(const std::vector<Term>& left, const Token& left_tok) {
    const Token& op = next();
    std::vector<Term> right = rhs_tuple();
    switch (op.kind) {
      case Tok::Approx:
      case Tok::ApproxStar: {
        auto x = as_vars(left, left_tok), y = as_vars(right, op);
        if (x.empty() || y.empty()) fail("empty tuple in marginal atom", &op);
        if (op.kind == Tok::ApproxStar) return f_me(std::move(x), std::move(y));
        if (x.size() != y.size())
          fail("arity mismatch in '=~' (" + std::to_string(x.size()) + " vs " +
                   std::to_string(y.size()) + "): not a well formed formula",
               &op);
        return f_mi(std::move(x), std::move(y));
      }
      case Tok::Eq:
      case Tok::Neq:
        if (mode_ == Mode::QPL) fail("equality is not part of the QPL grammar", &op);
        if (left.size() != right.size() || left.empty())
          fail("tuple (dis)equality needs nonempty equal-length tuples", &op);
        return op.kind == Tok::Eq ? f_tuple_eq(left, right) : f_tuple_neq(left, right);
      default:
        fail("expected '=~', '=~*', '=' or '!='", &op);
    }
  }

  std::vector<Variable> slot() {
    if (auto t = try_tuple()) return as_vars(*t, peek());
    std::vector<Variable> vs;
    if (peek().kind == Tok::Semi || peek().kind == Tok::RParen) return vs;
    vs.push_back(variable());
    while (accept(Tok::Comma)) vs.push_back(variable());
    return vs;
  }

  Formula primary() {
    const Token& t = peek();
    if (t.kind == Tok::LParen) {
      if (auto tup = try_tuple()) {
        Tok k = peek().kind;
        if (k == Tok::Approx || k == Tok::ApproxStar || k == Tok::Eq || k == Tok::Neq)
          return tuple_atom(*tup, t);
        // A parenthesized single variable can be a proposition: "(p)".
        if (tup->size() == 1 && !(*tup)[0].constant && mode_ == Mode::QPL)
          return f_prop((*tup)[0].name, true);
        fail("expected a relation symbol after tuple");
      }
      ++pos_;
      Formula f = formula();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (t.kind == Tok::Const) {
      ++pos_;
      Term left = const_term(t.text);
      if (peek().kind != Tok::Eq && peek().kind != Tok::Neq) fail("expected '=' or '!='");
      if (mode_ == Mode::QPL) fail("equality is not part of the QPL grammar");
      bool eq = next().kind == Tok::Eq;
      Term right = term();
      return eq ? f_eq(left, right) : f_neq(left, right);
    }
    if (t.kind != Tok::Ident) fail("expected a formula");
    if ((t.text == "ci" || t.text == "dep" || t.text == "const") &&
        peek(1).kind == Tok::LParen) {
      ++pos_;
      ++pos_;
      if (t.text == "const") {
        auto x = slot();
        expect(Tok::RParen, "')'");
        if (x.empty()) fail("const needs variables", &t);
        return f_const(std::move(x));
      }
      if (t.text == "dep") {
        auto x = slot();
        if (accept(Tok::RParen)) {
          if (x.empty()) fail("dep needs variables", &t);
          return f_const(std::move(x));
        }
        expect(Tok::Semi, "';'");
        auto y = slot();
        expect(Tok::RParen, "')'");
        if (y.empty()) fail("dep needs a nonempty dependent tuple", &t);
        return f_dep(std::move(x), std::move(y));
      }
      auto x = slot();
      expect(Tok::Semi, "';'");
      auto y = slot();
      expect(Tok::Semi, "';'");
      auto z = slot();
      expect(Tok::RParen, "')'");
      if (y.empty() || z.empty()) fail("ci needs nonempty independent tuples", &t);
      return f_ci(std::move(x), std::move(y), std::move(z));
    }
    if (is_keyword(t.text)) fail("unexpected keyword '" + t.text + "'");
    ++pos_;
    if (peek().kind == Tok::LParen) {
      if (mode_ == Mode::QPL) fail("relations are not part of the QPL grammar", &t);
      ++pos_;
      std::vector<Term> args;
      if (!accept(Tok::RParen)) {
        args.push_back(term());
        while (accept(Tok::Comma)) args.push_back(term());
        expect(Tok::RParen, "')'");
      }
      return f_rel(t.text, std::move(args));
    }
    Tok k = peek().kind;
    if (k == Tok::Approx || k == Tok::ApproxStar) return tuple_atom({var_term(t.text)}, t);
    if (k == Tok::Eq || k == Tok::Neq) {
      if (mode_ == Mode::QPL) fail("equality is not part of the QPL grammar");
      bool eq = next().kind == Tok::Eq;
      if (peek().kind == Tok::LParen) fail("tuple equality needs a parenthesized left side");
      Term right = term();
      return eq ? f_eq(var_term(t.text), right) : f_neq(var_term(t.text), right);
    }
    if (mode_ == Mode::QPL) return f_prop(t.text, true);
    fail("expected an atom after '" + t.text + "'", &t);
  }
};

std::string term_str(const Term& t) { return t.constant ? "#" + t.name : t.name; }

std::string list(const std::vector<Variable>& vs) {
  std::string s;
  for (std::size_t i = 0; i < vs.size(); ++i) s += (i ? "," : "") + vs[i];
  return s;
}

std::string terms_str(std::vector<Term>::const_iterator b, std::vector<Term>::const_iterator e) {
  std::string s = "(";
  for (auto it = b; it != e; ++it) s += (it == b ? "" : ",") + term_str(*it);
  return s + ")";
}

std::string tuple(const std::vector<Variable>& vs) { return "(" + list(vs) + ")"; }

// Binding strength: 0 quantifier, 1 implication, 2 or, 3 and, 4 prefix/atom.
int level(Kind k) {
  switch (k) {
    case Kind::Exists:
    case Kind::Forall:
    case Kind::BoundedExists:
    case Kind::BoundedForall:
    case Kind::ConstExists:
      return 0;
    case Kind::Implies:
    case Kind::Iff:
      return 1;
    case Kind::Or:
      return 2;
    case Kind::And:
      return 3;
    default:
      return 4;
  }
}

std::string render(const Formula& f, int need);

std::string wrap(const Formula& f, int need) {
  std::string s = render(f, need);
  return level(f->kind) < need ? "(" + s + ")" : s;
}

std::string render(const Formula& f, int /*need*/) {
  switch (f->kind) {
    case Kind::VarEq:
      return term_str(f->terms[0]) + " = " + term_str(f->terms[1]);
    case Kind::VarNeq:
      return term_str(f->terms[0]) + " != " + term_str(f->terms[1]);
    case Kind::Rel:
    case Kind::NegRel: {
      std::string s = f->kind == Kind::NegRel ? "!" : "";
      return s + f->name + terms_str(f->terms.begin(), f->terms.end());
    }
    case Kind::PropLit:
      return (f->positive ? "" : "!") + f->name;
    case Kind::MarginalIdentity:
      return tuple(f->x) + " =~ " + tuple(f->y);
    case Kind::MarginalEquiv:
      return tuple(f->x) + " =~* " + tuple(f->y);
    case Kind::CondIndep:
      return "ci(" + (f->x.empty() ? "" : list(f->x) + " ") + "; " + list(f->y) + " ; " +
             list(f->z) + ")";
    case Kind::Dep:
      return "dep(" + (f->x.empty() ? "" : list(f->x) + " ") + "; " + list(f->y) + ")";
    case Kind::Constancy:
      return "const(" + list(f->x) + ")";
    case Kind::And:
      return wrap(f->kids[0], 3) + " & " + wrap(f->kids[1], 4);
    case Kind::Or:
      return wrap(f->kids[0], 2) + " | " + wrap(f->kids[1], 3);
    case Kind::Implies:
      return wrap(f->kids[0], 2) + " -> " + wrap(f->kids[1], 2);
    case Kind::Iff:
      return wrap(f->kids[0], 2) + " <-> " + wrap(f->kids[1], 2);
    case Kind::ClassicalNeg:
      return "~" + wrap(f->kids[0], 4);
    case Kind::Exists:
      return "E " + f->name + ". " + render(f->kids[0], 0);
    case Kind::Forall:
      return "A " + f->name + ". " + render(f->kids[0], 0);
    case Kind::BoundedExists:
    case Kind::BoundedForall: {
      std::string set;
      for (std::size_t i = 0; i < f->terms.size(); ++i)
        set += (i ? "," : "") + term_str(f->terms[i]);
      return std::string(f->kind == Kind::BoundedExists ? "E " : "A ") + f->name + " in {" +
             set + "}. " + render(f->kids[0], 0);
    }
    case Kind::ConstExists:
      return "Ec " + list(f->x) + ". " + render(f->kids[0], 0);
    case Kind::TupleEq:
    case Kind::TupleNeq: {
      auto mid = f->terms.begin() + static_cast<long>(f->terms.size() / 2);
      return terms_str(f->terms.begin(), mid) + (f->kind == Kind::TupleEq ? " = " : " != ") +
             terms_str(mid, f->terms.end());
    }
  }
  return "";
}

}  // namespace

Formula parse(std::string_view text, const ParseOptions& opts) {
  try {
    return Parser(lex(text, opts.allow_reserved), opts.mode).run();
  } catch (const InputError& e) {
    // Constructor-level well-formedness checks surface as syntax errors.
    throw SyntaxError(e.what(), 1, 1);
  }
}

std::string print(const Formula& f) { return render(f, 0); }

}  // namespace pts
