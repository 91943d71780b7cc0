#include <gtest/gtest.h>

#include <filesystem>

#include "pts/atoms.hpp"
#include "pts/checker.hpp"
#include "pts/engine.hpp"
#include "pts/errors.hpp"
#include "pts/generate.hpp"
#include "pts/syntax.hpp"
#include "pts/team_io.hpp"

namespace pts {
namespace {

ProbabilisticTeam load_team(const std::string& name) {
  return team_from_json(read_json_file(std::string(PTS_DATA_DIR) + "/" + name));
}

Structure load_structure(const std::string& name) {
  return structure_from_json(read_json_file(std::string(PTS_DATA_DIR) + "/" + name));
}

Verdict::Value run(const Structure& s, const ProbabilisticTeam& t, const char* f,
                   Strategy strat = Strategy::Auto, Mode mode = Mode::FO) {
  return check(s, t, parse(f, mode), strat).value;
}

constexpr auto T = Verdict::Value::True;
constexpr auto F = Verdict::Value::False;
constexpr auto U = Verdict::Value::Unknown;

TEST(EvalFlat, Fig1) {
  auto team = load_team("fig1.json");
  Structure s = Structure::from_team(team);
  EXPECT_TRUE(eval_flat(s, team, parse("x != y")).is_true());
  EXPECT_TRUE(eval_flat(s, team, parse("E u. u = x")).is_true());
  Verdict v = eval_flat(s, team, parse("x = y | y = z"));
  EXPECT_TRUE(v.is_false());
  EXPECT_EQ(v.witness, "(a,b,c)");
  EXPECT_THROW(eval_flat(s, team, parse("dep(x ; y)")), StrategyError);
}

TEST(EvalFlat, PropositionEncoding) {
  ProbabilisticTeam team({"p"}, {{{"1"}, make_rational(1, 3)}, {{"0"}, 0}});
  EXPECT_TRUE(eval_flat(Structure::binary(), team, parse("p", Mode::QPL)).is_true());
  EXPECT_TRUE(eval_flat(Structure::binary(), team, parse("!p", Mode::QPL)).is_false());
}

TEST(Check, Example1) {
  auto team = load_team("fig1.json");
  Structure s = Structure::from_team(team);
  EXPECT_EQ(run(s, team, "(y) =~ (z) & x != y"), T);
  EXPECT_EQ(run(s, team, "(x,y) =~* (y)"), T);
  EXPECT_EQ(run(s, team, "(x) =~* (y)"), T);
  EXPECT_EQ(run(s, team, "(x) =~ (y)"), F);
}

TEST(Check, AlarmCsi) {
  auto team = load_team("alarm.json");
  Structure s = load_structure("alarm_structure.json");
  for (Strategy st : {Strategy::Auto, Strategy::Direct, Strategy::WitnessSearch})
    EXPECT_EQ(run(s, team, "t = #T | (t = #F & ci(; g ; c))", st), T) << to_string(st);
  EXPECT_EQ(run(s, team, "ci(t, c ; g ; a)"), T);
  EXPECT_EQ(run(s, team, "ci(; g ; c)"), F);
}

TEST(Check, ExcludedMiddleOnBinaryTeams) {
  Rng rng(3);
  for (int i = 0; i < 30; ++i) {
    auto team = random_team({"0", "1"}, {"p", "q"}, 4, rng);
    EXPECT_EQ(run(Structure::binary(), team, "p | !p", Strategy::Auto, Mode::QPL), T);
    EXPECT_EQ(run(Structure::binary(), team, "p | !p", Strategy::WitnessSearch, Mode::QPL), T);
  }
}

TEST(Check, ClassicalNegation) {
  auto team = load_team("fig1.json");
  Structure s = Structure::from_team(team);
  EXPECT_EQ(check(s, team, f_neg(parse("(x) =~ (y)"))).value, T);
  EXPECT_EQ(check(s, team, f_neg(parse("(y) =~ (z) | x = y"))).value, F);
}

TEST(Check, RejectsUnknownVariables) {
  auto team = load_team("fig1.json");
  Structure s = Structure::from_team(team);
  EXPECT_THROW(check(s, team, parse("dep(x ; w)")), DomainError);
}

TEST(WitnessSearch, IdentityExtension) {
  auto team = load_team("fig1.json");
  Structure s = Structure::from_team(team);
  Verdict v = witness_search(s, team, parse("E v. ((y) =~ (v) & dep(z ; v))"));
  EXPECT_TRUE(v.is_true());
  EXPECT_FALSE(v.witness.empty());
}

TEST(WitnessSearch, NonDiracWitnessIsUnknown) {
  // v must be uniform and independent of x: no Dirac extension does that.
  ProbabilisticTeam team({"x"}, {{{"0"}, make_rational(1, 2)}, {{"1"}, make_rational(1, 2)}});
  Formula f = parse("E v. (ci(; x ; v) & (x) =~ (v))");
  Structure s = Structure::binary();
  EXPECT_EQ(witness_search(s, team, f).value, U);
  EXPECT_EQ(check(s, team, f).value, T);
}

// Engine and compiled path are independent implementations of the same
// clauses; on linear fragments both are exact and must agree.
TEST(Check, EngineAgreesWithCompiledPath) {
  Rng rng(20);
  FormulaGenOptions go;
  go.vars = {"x", "y"};
  go.kinds = kGenEquality | kGenIdentity | kGenEquiv | kGenDep | kGenConst | kGenAnd | kGenOr |
             kGenExists | kGenForall;
  go.max_depth = 3;
  go.max_tuple = 1;
  int agreements = 0;
  for (int trial = 0; trial < 300; ++trial) {
    Structure s;
    s.universe = trial % 2 ? std::vector<Value>{"0", "1"} : std::vector<Value>{"0", "1", "2"};
    auto team = random_team(s.universe, {"x", "y"}, 4, rng);
    Formula f = random_formula(go, rng);
    Verdict a = check(s, team, f, Strategy::Auto);
    Verdict c = check(s, team, f, Strategy::Compile);
    ASSERT_FALSE(a.is_unknown()) << print(f) << "\n" << a.reason;
    ASSERT_FALSE(c.is_unknown()) << print(f) << "\n" << c.reason;
    ASSERT_EQ(a.value, c.value) << print(f);
    ++agreements;
  }
  EXPECT_EQ(agreements, 300);
}

TEST(Check, NegationAgreesWithCompiledPath) {
  Rng rng(21);
  FormulaGenOptions go;
  go.vars = {"x"};
  go.kinds = kGenEquality | kGenIdentity | kGenDep | kGenAnd | kGenOr | kGenExists | kGenForall |
             kGenNeg;
  go.max_depth = 2;
  int negations = 0;
  for (int trial = 0; trial < 300; ++trial) {
    auto team = random_team({"0", "1"}, {"x"}, 2, rng);
    Formula f = random_formula(go, rng);
    negations += contains_kind(f, Kind::ClassicalNeg);
    Verdict a = check(Structure::binary(), team, f, Strategy::Auto);
    Verdict c = check(Structure::binary(), team, f, Strategy::Compile);
    ASSERT_FALSE(a.is_unknown() || c.is_unknown()) << print(f);
    ASSERT_EQ(a.value, c.value) << print(f);
  }
  EXPECT_GT(negations, 50);
}

TEST(Check, ForallMatchesCompiledEncoding) {
  Rng rng(5);
  FormulaGenOptions go;
  go.vars = {"x"};
  go.kinds = kGenEquality | kGenIdentity | kGenDep | kGenAnd | kGenForall;
  go.max_depth = 3;
  for (int trial = 0; trial < 100; ++trial) {
    auto team = random_team({"0", "1"}, {"x"}, 3, rng);
    Formula f = f_forall("u", random_formula(go, rng));
    Formula g = expand_sugar(f);
    EXPECT_EQ(check(Structure::binary(), team, g, Strategy::Auto).value,
              check(Structure::binary(), team, g, Strategy::Compile).value)
        << print(f);
  }
}

TEST(Check, WitnessSearchIsSound) {
  Rng rng(8);
  FormulaGenOptions go;
  go.vars = {"x", "y"};
  go.kinds = kGenEquality | kGenIdentity | kGenDep | kGenAnd | kGenOr | kGenExists;
  go.max_depth = 2;
  int found = 0;
  for (int trial = 0; trial < 100; ++trial) {
    auto team = random_team({"0", "1"}, {"x", "y"}, 3, rng);
    Formula f = random_formula(go, rng);
    Verdict w = check(Structure::binary(), team, f, Strategy::WitnessSearch);
    if (w.is_true()) {
      ++found;
      EXPECT_TRUE(check(Structure::binary(), team, f, Strategy::Compile).is_true()) << print(f);
    }
  }
  EXPECT_GT(found, 20);
}

TEST(Strategy, Names) {
  for (Strategy s : {Strategy::Auto, Strategy::Flat, Strategy::Direct, Strategy::Compile,
                     Strategy::WitnessSearch})
    EXPECT_EQ(parse_strategy(to_string(s)), s);
  EXPECT_THROW(parse_strategy("fast"), ConfigError);
}

TEST(Engine, Determiners) {
  auto d = determiners(parse("dep(x ; y) & E w. (y = w & dep(w ; x))"), "y");
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0], std::set<Variable>{"x"});
  EXPECT_EQ(determiners(parse("const(y)"), "y").size(), 1u);
  EXPECT_TRUE(determiners(parse("(x) =~ (y)"), "y").empty());
}

TEST(Engine, FlatGuard) {
  EXPECT_EQ(flat_guard(parse("dep(x ; y)")), nullptr);
  EXPECT_EQ(print(flat_guard(parse("x = y & dep(x ; y)"))), "x = y");
  EXPECT_EQ(flat_guard(parse("x = y | dep(x ; y)")), nullptr);
}

}  // namespace
}  // namespace pts
