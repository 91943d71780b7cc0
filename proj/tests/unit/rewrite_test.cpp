#include <gtest/gtest.h>

#include <filesystem>
#include <functional>

#include "pts/checker.hpp"
#include "pts/errors.hpp"
#include "pts/generate.hpp"
#include "pts/rewrite.hpp"
#include "pts/syntax.hpp"
#include "pts/team_io.hpp"

namespace pts {
namespace {

ProbabilisticTeam load_team(const std::string& name) {
  return team_from_json(read_json_file(std::string(PTS_DATA_DIR) + "/" + name));
}

Structure binary_with_zero() {
  return structure_from_json(read_json_file(std::string(PTS_DATA_DIR) + "/binary.json"));
}

CheckOptions with_solver() {
  CheckOptions o;
#ifdef PTS_Z3_PATH
  o.solver.command = std::string(PTS_Z3_PATH) + " -smt2 {}";
#endif
  return o;
}

bool have_solver() { return !with_solver().solver.command.empty(); }

Verdict::Value verdict(const Structure& s, const ProbabilisticTeam& t, const Formula& f,
                       const CheckOptions& o = {}) {
  Verdict v = check(s, t, f, Strategy::Auto, o);
  EXPECT_FALSE(v.is_unknown()) << print(f) << "\n" << v.reason;
  return v.value;
}

bool contains_atom(const Formula& f, std::initializer_list<Kind> kinds) {
  for (Kind k : kinds)
    if (contains_kind(f, k)) return true;
  return false;
}

TEST(Fresh, NamesAvoidReservedOnes) {
  FreshNameSource fresh(f_dep({"$z0"}, {"y"}));
  EXPECT_EQ(fresh.next("z"), "$z1");
  EXPECT_EQ(fresh.tuple("u", 2), (std::vector<Variable>{"$u2", "$u3"}));
}

TEST(Target, RoundTrip) {
  for (auto t : {TargetLogic::Identity, TargetLogic::Equivalence, TargetLogic::IdentityDep,
                 TargetLogic::Independence, TargetLogic::CondIndependence, TargetLogic::Qpl})
    EXPECT_EQ(parse_target(to_string(t)), t);
  EXPECT_THROW(parse_target("FO(dep)"), InputError);
}

TEST(DepToCi, Shapes) {
  EXPECT_EQ(print(dep_to_ci(parse("dep(x ; y)"))), "ci(x ; y ; y)");
  EXPECT_EQ(print(dep_to_ci(parse("const(x)"))), "ci(; x ; x)");
  EXPECT_EQ(print(dep_to_ci(parse("dep(x, y ; z)"))), "ci(x,y ; z ; z)");
}

TEST(DepToEquiv, Shapes) {
  FreshNameSource fresh;
  EXPECT_EQ(print(dep_to_equiv(parse("dep(x ; y)"), fresh)), "(x,y) =~* (x)");
  EXPECT_EQ(print(dep_to_equiv(parse("dep(x ; y, z)"), fresh)), "(x,y) =~* (x) & (x,y,z) =~* (x,y)");
  Formula c = dep_to_equiv(parse("const(y)"), fresh);
  EXPECT_EQ(c->kind, Kind::Forall);
  EXPECT_EQ(free_vars(c), std::set<Variable>{"y"});
}

// Every team with at most three rows over a binary domain.
void for_each_small_team(const std::vector<Variable>& vars,
                         const std::function<void(const ProbabilisticTeam&)>& fn) {
  std::size_t n = std::size_t{1} << vars.size();
  std::vector<Rational> weights{make_rational(1, 1), make_rational(1, 2), make_rational(2, 3)};
  auto tuple_of = [&](std::size_t i) {
    Tuple t;
    for (std::size_t b = vars.size(); b-- > 0;) t.push_back((i >> b) & 1 ? "1" : "0");
    return t;
  };
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < n; ++i)
      if ((mask >> i) & 1) rows.push_back(i);
    if (rows.size() > 3) continue;
    // Weight patterns: all combinations of the three weights.
    std::size_t combos = 1;
    for (std::size_t i = 0; i < rows.size(); ++i) combos *= weights.size();
    for (std::size_t c = 0; c < combos; ++c) {
      std::vector<Row> rs;
      std::size_t code = c;
      for (std::size_t i : rows) {
        rs.push_back({tuple_of(i), weights[code % weights.size()]});
        code /= weights.size();
      }
      fn(ProbabilisticTeam(vars, std::move(rs)));
    }
  }
}

TEST(DepToEquiv, ExhaustivelyEquivalentOnSmallBinaryTeams) {
  Structure s = Structure::binary();
  std::size_t teams = 0;
  for (const char* text : {"dep(x ; y)", "dep(x ; y, z)", "const(y)", "dep(; y, z)", "dep(x, y ; z)"}) {
    Formula f = parse(text);
    FreshNameSource fresh(f);
    Formula g = dep_to_equiv(f, fresh);
    for_each_small_team({"x", "y", "z"}, [&](const ProbabilisticTeam& t) {
      ++teams;
      ASSERT_EQ(verdict(s, t, f), verdict(s, t, g)) << text;
    });
  }
  EXPECT_GT(teams, 5000u);
}

TEST(EquivToIdentityDep, Fig1AndFailingTeam) {
  auto fig1 = load_team("fig1.json");
  Structure s = Structure::from_team(fig1);
  FreshNameSource fresh;
  Formula f = parse("(x) =~* (y)");
  Formula g = equiv_to_identity_dep(f, fresh);
  EXPECT_EQ(print(g), "E $z0. dep(y ; $z0) & (dep($z0 ; y) & (x) =~ ($z0))");
  EXPECT_EQ(verdict(s, fig1, f), Verdict::Value::True);
  EXPECT_EQ(verdict(s, fig1, g), Verdict::Value::True);

  ProbabilisticTeam bad({"x", "y"}, {{{"0", "0"}, make_rational(1, 3)},
                                     {{"0", "1"}, make_rational(1, 6)},
                                     {{"1", "1"}, make_rational(1, 2)}});
  EXPECT_EQ(verdict(Structure::binary(), bad, f), Verdict::Value::False);
  EXPECT_EQ(verdict(Structure::binary(), bad, g), Verdict::Value::False);
}

TEST(IdentityToEquiv, ShapeAndFig1) {
  FreshNameSource fresh;
  Formula g = identity_to_equiv(parse("(x) =~ (y)"), fresh);
  EXPECT_EQ(print(g),
            "A $z0. $z0 != x & $z0 != y | ($z0 = x | $z0 = y) & (($z0) =~* (x) & ($z0) =~* (y))");
  auto fig1 = load_team("fig1.json");
  Structure s = Structure::from_team(fig1);
  for (const char* text : {"(y) =~ (z)", "(x) =~ (y)"}) {
    Formula f = parse(text);
    FreshNameSource fr(f);
    EXPECT_EQ(verdict(s, fig1, f), verdict(s, fig1, identity_to_equiv(f, fr))) << text;
  }
}

TEST(IdentityToMargIndep, UsesOnlyIndependenceAndFirstOrder) {
  Formula f = parse("(x) =~ (y)");
  Formula g = lower(f, TargetLogic::Independence, Structure::binary());
  EXPECT_FALSE(contains_atom(g, {Kind::MarginalIdentity, Kind::MarginalEquiv, Kind::Dep, Kind::Constancy}));
  EXPECT_TRUE(contains_kind(g, Kind::CondIndep));
  EXPECT_TRUE(within(g, TargetLogic::Independence));
  EXPECT_EQ(free_vars(g), free_vars(f));
}

TEST(IdentityToMargIndep, Semantics) {
  auto fig1 = load_team("fig1.json");
  Structure s = Structure::from_team(fig1);
  for (const char* text : {"(y) =~ (z)", "(x) =~ (y)"}) {
    Formula f = parse(text);
    Formula g = lower(f, TargetLogic::Independence, s);
    EXPECT_EQ(verdict(s, fig1, f), verdict(s, fig1, g)) << text;
  }
  // Two elements, x=0 weighted differently from y=0.
  ProbabilisticTeam t({"x", "y"}, {{{"0", "1"}, make_rational(1, 3)}, {{"1", "0"}, make_rational(2, 3)}});
  Formula f = parse("(x) =~ (y)");
  EXPECT_EQ(verdict(Structure::binary(), t, f), Verdict::Value::False);
  EXPECT_EQ(verdict(Structure::binary(), t, lower(f, TargetLogic::Independence, Structure::binary())),
            Verdict::Value::False);
}

TEST(CiToMargIndep, Shape) {
  FreshNameSource fresh;
  Formula g = ci_to_marg_indep(parse("ci(x ; y, u ; z)"), binary_with_zero(), fresh);
  // forall over |x|+|y u|+|z| = 4 variables, then 1 + 3 + 2 + 4 + 2 existentials.
  std::size_t foralls = 0, exists = 0;
  Formula cur = g;
  while (cur->kind == Kind::Forall) {
    ++foralls;
    cur = cur->kids[0];
  }
  while (cur->kind == Kind::Exists) {
    ++exists;
    cur = cur->kids[0];
  }
  EXPECT_EQ(foralls, 4u);
  EXPECT_EQ(exists, 12u);
  EXPECT_EQ(free_vars(g), (std::set<Variable>{"u", "x", "y", "z"}));
  EXPECT_THROW(ci_to_marg_indep(parse("ci(; x ; y)"), Structure::binary(), fresh), ConfigError);
}

TEST(CiToMargIndep, Semantics) {
  if (!have_solver()) GTEST_SKIP() << "needs an external solver";
  Structure s = binary_with_zero();
  Formula f = parse("ci(; p ; q)");
  FreshNameSource fresh(f);
  Formula g = ci_to_marg_indep(f, s, fresh);
  ProbabilisticTeam uniform({"p", "q"}, {{{"0", "0"}, make_rational(1, 4)},
                                         {{"0", "1"}, make_rational(1, 4)},
                                         {{"1", "0"}, make_rational(1, 4)},
                                         {{"1", "1"}, make_rational(1, 4)}});
  ProbabilisticTeam correlated({"p", "q"}, {{{"0", "0"}, make_rational(1, 2)},
                                            {{"1", "1"}, make_rational(1, 2)}});
  EXPECT_EQ(verdict(s, uniform, f), Verdict::Value::True);
  EXPECT_EQ(verdict(s, uniform, g, with_solver()), Verdict::Value::True);
  EXPECT_EQ(verdict(s, correlated, f), Verdict::Value::False);
  EXPECT_EQ(verdict(s, correlated, g, with_solver()), Verdict::Value::False);
}

TEST(Lower, PassTable) {
  Structure s = binary_with_zero();
  EXPECT_EQ(print(lower(parse("dep(x ; y)"), TargetLogic::Equivalence, s)), "(x,y) =~* (x)");
  EXPECT_THROW(lower(parse("const(x)"), TargetLogic::Identity, s), NoPathError);
  EXPECT_THROW(lower(parse("(x) =~* (y)"), TargetLogic::Identity, s), NoPathError);
  EXPECT_THROW(lower(parse("ci(x ; y ; z)"), TargetLogic::IdentityDep, s), NoPathError);
  EXPECT_THROW(lower(f_neg(parse("dep(x ; y)")), TargetLogic::CondIndependence, s), NoPathError);
  Structure one;
  one.universe = {"0"};
  EXPECT_THROW(lower(parse("(x) =~ (y)"), TargetLogic::Independence, one), NoPathError);
  try {
    lower(parse("const(x)"), TargetLogic::Identity, s);
  } catch (const NoPathError& e) {
    EXPECT_NE(std::string(e.what()).find("scaled unions"), std::string::npos);
  }
}

TEST(Lower, OutputWithinTargetIdempotentAndCaptureFree) {
  Structure s = binary_with_zero();
  const std::vector<std::string> inputs{"dep(x ; y) | (x) =~ (y)", "E u. (ci(x ; y ; u) & (u) =~* (x))",
                                        "A u. (const(u) | dep(u ; x, y))", "(x, y) =~ (y, x)"};
  for (auto t : {TargetLogic::Equivalence, TargetLogic::IdentityDep, TargetLogic::Independence,
                 TargetLogic::CondIndependence, TargetLogic::Qpl}) {
    for (const auto& text : inputs) {
      Formula f = parse(text);
      Formula g;
      try {
        g = lower(f, t, s);
      } catch (const NoPathError&) {
        continue;
      }
      EXPECT_TRUE(within(g, t)) << text << " -> " << to_string(t);
      EXPECT_EQ(free_vars(g), free_vars(f)) << text;
      EXPECT_TRUE(equal(lower(g, t, s), g)) << text;
    }
  }
}

TEST(Lower, LinearSizeBetweenIdentityAndEquivalence) {
  // Output size grows linearly with the tuple length.
  for (std::size_t m = 1; m <= 8; ++m) {
    std::vector<Variable> x, y;
    for (std::size_t i = 0; i < m; ++i) {
      x.push_back("x" + std::to_string(i));
      y.push_back("y" + std::to_string(i));
    }
    Formula mi = f_mi(x, y), me = f_me(x, y);
    FreshNameSource fresh;
    EXPECT_LE(node_count(identity_to_equiv(mi, fresh)), 16 * m + 8) << m;
    EXPECT_LE(node_count(equiv_to_identity_dep(me, fresh)), 2 * m + 8) << m;
  }
}

TEST(Lower, RandomSoundnessSolverFree) {
  // Rewrites into FO(~*) and FO(~,dep) stay linear and can be checked without
  // a solver.
  Rng rng(31);
  FormulaGenOptions go;
  go.vars = {"x", "y"};
  go.kinds = kGenEquality | kGenIdentity | kGenEquiv | kGenDep | kGenConst | kGenAnd | kGenOr | kGenExists;
  go.max_depth = 2;
  go.max_tuple = 1;
  for (int trial = 0; trial < 120; ++trial) {
    Structure s;
    s.universe = trial % 2 ? std::vector<Value>{"0", "1"} : std::vector<Value>{"0", "1", "2"};
    auto team = random_team(s.universe, {"x", "y"}, 4, rng);
    Formula f = random_formula(go, rng);
    for (auto t : {TargetLogic::Equivalence, TargetLogic::IdentityDep}) {
      Formula g;
      try {
        g = lower(f, t, s);
      } catch (const NoPathError&) {
        continue;
      }
      ASSERT_EQ(verdict(s, team, f), verdict(s, team, g)) << print(f) << " -> " << print(g);
    }
  }
}

}  // namespace
}  // namespace pts
