#include <gtest/gtest.h>

#include <fstream>

#include "pts/errors.hpp"
#include "pts/syntax.hpp"

namespace pts {
namespace {

std::vector<std::string> corpus(const std::string& name) {
  std::ifstream in(std::string(PTS_DATA_DIR) + "/corpus/" + name);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);)
    if (!line.empty() && line.rfind("//", 0) != 0) out.push_back(line);
  return out;
}

TEST(Parse, GrammarProductions) {
  auto mi = parse("(x,y) =~ (u,v)");
  EXPECT_TRUE(equal(mi, f_mi({"x", "y"}, {"u", "v"})));
  auto q = parse("E q. ci(; p ; q) & dep(x ; y)");
  EXPECT_TRUE(equal(q, f_exists("q", f_and(f_ci({}, {"p"}, {"q"}), f_dep({"x"}, {"y"})))));
  EXPECT_TRUE(equal(parse("ci(t,c ; g ; a)"), f_ci({"t", "c"}, {"g"}, {"a"})));
  EXPECT_TRUE(equal(parse("ci(; x ; (y,z))"), f_ci({}, {"x"}, {"y", "z"})));
  EXPECT_TRUE(equal(parse("dep(x)"), f_const({"x"})));
  EXPECT_TRUE(equal(parse("x =~* (x,y)"), f_me({"x"}, {"x", "y"})));
  EXPECT_TRUE(equal(parse("!R(x, #c)"), f_negrel("R", {var_term("x"), const_term("c")})));
  EXPECT_TRUE(equal(parse("!p", Mode::QPL), f_prop("p", false)));
  EXPECT_TRUE(equal(parse("!(x = y)"), f_neq(var_term("x"), var_term("y"))));
}

TEST(Parse, Precedence) {
  auto f = parse("a = b | c = d & e = f");
  ASSERT_EQ(f->kind, Kind::Or);
  EXPECT_EQ(f->kids[1]->kind, Kind::And);
  auto g = parse("a = b & E x. x = a | x = b");
  ASSERT_EQ(g->kind, Kind::And);
  EXPECT_EQ(g->kids[1]->kind, Kind::Exists);
  EXPECT_EQ(g->kids[1]->kids[0]->kind, Kind::Or);
  auto h = parse("~p & q", Mode::QPL);
  ASSERT_EQ(h->kind, Kind::And);
  EXPECT_EQ(h->kids[0]->kind, Kind::ClassicalNeg);
}

TEST(Parse, Errors) {
  try {
    parse("(x,y) =~ (u)");
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.line(), 1);
    EXPECT_EQ(e.column(), 7);
    EXPECT_NE(std::string(e.what()).find("not a well formed formula"), std::string::npos);
  }
  EXPECT_THROW(parse("~(x = y)"), SyntaxError);
  EXPECT_THROW(parse("p", Mode::FO), SyntaxError);
  EXPECT_THROW(parse("x = y", Mode::QPL), SyntaxError);
  EXPECT_THROW(parse("$z = x"), SyntaxError);
  EXPECT_NO_THROW(parse("$z = x", ParseOptions{Mode::FO, true}));
  try {
    parse("x = y &\n  & y = z");
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_EQ(e.column(), 3);
  }
  for (const auto& line : corpus("invalid.txt")) EXPECT_THROW(parse(line), SyntaxError) << line;
}

void round_trip(const std::string& text, Mode mode) {
  auto f = parse(text, mode);
  auto printed = print(f);
  auto again = parse(printed, ParseOptions{mode, true});
  EXPECT_TRUE(equal(f, again)) << text << "\n  printed: " << printed;
  EXPECT_EQ(print(again), printed);
}

TEST(Print, CorpusRoundTrips) {
  auto fo = corpus("fo.txt");
  ASSERT_GE(fo.size(), 20u);
  for (const auto& line : fo) round_trip(line, Mode::FO);
  for (const auto& line : corpus("qpl.txt")) round_trip(line, Mode::QPL);
}

TEST(Print, CanonicalForms) {
  EXPECT_EQ(print(parse("dep(x;y)")), "dep(x ; y)");
  EXPECT_EQ(print(parse("ci(;p;q)")), "ci(; p ; q)");
  EXPECT_EQ(print(parse("(x,y)=~*(x)")), "(x,y) =~* (x)");
  EXPECT_EQ(print(parse("x=y&(y=z|z=x)")), "x = y & (y = z | z = x)");
  EXPECT_EQ(print(f_and(f_exists("u", f_eq(var_term("u"), var_term("x"))), f_eq(var_term("x"), var_term("y")))),
            "(E u. u = x) & x = y");
  // right-nested chains keep their shape through the printer
  auto nested = f_and(f_eq(var_term("a"), var_term("b")),
                      f_and(f_eq(var_term("b"), var_term("c")), f_eq(var_term("c"), var_term("d"))));
  EXPECT_TRUE(equal(parse(print(nested)), nested));
}

TEST(FreeVars, Examples) {
  EXPECT_EQ(free_vars(f_mi({"x", "y"}, {"y", "z"})), (std::set<Variable>{"x", "y", "z"}));
  EXPECT_EQ(free_vars(parse("E x. dep(x ; y)")), std::set<Variable>{"y"});
  EXPECT_TRUE(free_vars(parse("E x. A y. x = y")).empty());
  EXPECT_EQ(free_vars(parse("E b in {c1,c2}. b = d")), (std::set<Variable>{"c1", "c2", "d"}));
  EXPECT_EQ(free_vars(parse("x = #zero")), std::set<Variable>{"x"});
}

TEST(Sugar, Expansions) {
  EXPECT_EQ(print(expand_sugar(parse("(x,y) != (u,v)"))), "x != u | y != v");
  EXPECT_EQ(print(expand_sugar(parse("E b in {c1,c2}. b = d"))),
            "E b. (b = c1 | b = c2) & b = d");
  EXPECT_EQ(print(expand_sugar(parse("A a in {c1,c2}. a = d"))),
            "A a. a != c1 & a != c2 | (a = c1 | a = c2) & a = d");
  EXPECT_EQ(print(expand_sugar(parse("Ec c1,c2. c1 = x"))),
            "E c1. E c2. const(c1) & (const(c2) & (c1 != c2 & c1 = x))");
  EXPECT_EQ(print(expand_sugar(parse("(q = #1 | r = #1) -> (y,q) = (x,r)"))),
            "q != #1 & r != #1 | y = x & q = r");
  EXPECT_EQ(print(expand_sugar(parse("a = #zero <-> (z = y & w = v)"))),
            "a = #zero & (z = y & w = v) | a != #zero & (z != y | w != v)");
  EXPECT_THROW(expand_sugar(parse("ci(; x ; y) -> x = y")), UnsupportedSugarError);
}

TEST(Sugar, IdempotentAndFreeVariablePreserving) {
  for (const auto& line : corpus("fo.txt")) {
    auto f = parse(line);
    auto e = expand_sugar(f);
    EXPECT_TRUE(equal(expand_sugar(e), e)) << line;
    EXPECT_EQ(free_vars(e), free_vars(f)) << line;
    std::function<bool(const Formula&)> sugar_free = [&](const Formula& g) {
      if (is_sugar(g->kind)) return false;
      for (const auto& k : g->kids)
        if (!sugar_free(k)) return false;
      return true;
    };
    EXPECT_TRUE(sugar_free(e)) << line;
  }
}

}  // namespace
}  // namespace pts
