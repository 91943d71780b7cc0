#include <gtest/gtest.h>

#include "pts/atoms.hpp"
#include "pts/compile.hpp"
#include "pts/errors.hpp"
#include "pts/smtlib.hpp"
#include "pts/solver.hpp"
#include "pts/syntax.hpp"
#include "pts/team_io.hpp"

namespace pts {
namespace {

Formula qpl(const char* text) { return parse(text, Mode::QPL); }

SolverVerdict decide(const ArithSentence& s) { return solve(s, SolverConfig{}); }

TEST(Compile, LiteralCase) {
  VarTable vt;
  ArithFormula f = compile_star(qpl("p"), {"p"}, vt);
  EXPECT_EQ(to_string(f, vt), "w_s_0 = 0");
  EXPECT_EQ(vt.size(), 2u);
}

TEST(Compile, SatValidityFixtures) {
  EXPECT_TRUE(decide(compile_sat(qpl("p"), {})).sat());
  EXPECT_TRUE(decide(compile_sat(qpl("p & ~p"), {})).unsat());
  EXPECT_TRUE(decide(compile_sat(qpl("(p) =~ (q)"), {})).sat());
  EXPECT_TRUE(decide(compile_validity(qpl("p | !p"), {})).sat());
  EXPECT_TRUE(decide(compile_validity(qpl("p"), {})).unsat());
  EXPECT_TRUE(decide(compile_validity(qpl("(p) =~ (p)"), {})).sat());
  EXPECT_TRUE(decide(compile_sat(qpl("p & !p"), {})).unsat());
  // Only the empty team satisfies p & !p, so its classical negation is valid
  // exactly when the empty team is left out.
  EXPECT_TRUE(decide(compile_validity(qpl("~(p & !p)"), {})).sat());
  EXPECT_TRUE(decide(compile_validity(qpl("~(p & !p)"), {}, true)).unsat());
}

TEST(Compile, SatModelIsADiracTeam) {
  SolverVerdict v = decide(compile_sat(qpl("p"), {}));
  ASSERT_TRUE(v.model);
  EXPECT_EQ(v.model->at("w_s_0"), 0);
  EXPECT_GT(v.model->at("w_s_1"), 0);
}

TEST(Compile, QuantifierCases) {
  // forall q. p over free p: both branches carry half of each weight and
  // the literal zeroes p=0 in each; no new variables.
  VarTable vt;
  ArithFormula f = compile_star(qpl("A q. p"), {"p"}, vt);
  EXPECT_EQ(to_string(f, vt), "((1/2 * w_s_0) = 0 and (1/2 * w_s_0) = 0)");
  EXPECT_EQ(vt.size(), 2u);
  EXPECT_TRUE(decide(compile_validity(qpl("A q. (q | !q)"), {})).sat());
  EXPECT_TRUE(decide(compile_sat(qpl("A q. q"), {"p"})).unsat());
  EXPECT_TRUE(decide(compile_validity(qpl("E q. q"), {"p"})).sat());
  // Marginal identity of a uniform fresh proposition with itself negated.
  EXPECT_TRUE(decide(compile_validity(qpl("A q. E r. (q) =~ (r) & dep(q ; r)"), {"p"})).sat());
}

TEST(Compile, OnlyIndependenceIntroducesProducts) {
  for (const char* text : {"p | (p) =~ (q)", "E r. dep(p ; r) & ~(q)=~(r)", "A r. const(p) | q"}) {
    EXPECT_FALSE(is_nonlinear(compile_sat(qpl(text), {}).phi)) << text;
  }
  EXPECT_TRUE(is_nonlinear(compile_sat(qpl("ci(; p ; q)"), {}).phi));
  EXPECT_NE(emit_smtlib(compile_sat(qpl("p"), {})).find("(set-logic LRA)"), std::string::npos);
  EXPECT_NE(emit_smtlib(compile_sat(qpl("ci(; p ; q)"), {})).find("(set-logic NRA)"),
            std::string::npos);
}

// Every variable introduced for a disjunction or quantifier is constrained
// nonnegative.
void collect_nonneg(const ArithFormula& f, std::set<VarId>& out) {
  if (f.kind == ArithFormula::Kind::Leq && f.lhs.kind == ArithTerm::Kind::Const &&
      f.lhs.value == 0 && f.rhs.kind == ArithTerm::Kind::Var)
    out.insert(f.rhs.var);
  for (const auto& k : f.kids) collect_nonneg(k, out);
}

void collect_bound(const ArithFormula& f, std::set<VarId>& out) {
  if (f.kind == ArithFormula::Kind::Exists || f.kind == ArithFormula::Kind::Forall)
    out.insert(f.vars.begin(), f.vars.end());
  for (const auto& k : f.kids) collect_bound(k, out);
}

TEST(Compile, NonnegativityIsAlwaysPresent) {
  for (const char* text : {"p | q", "E q. (p | q)", "A r. E q. ((p) =~ (q) | r)", "~(p | q) & (q | p)"}) {
    ArithSentence s = compile_sat(qpl(text), {});
    std::set<VarId> nn, bound;
    collect_nonneg(s.phi, nn);
    collect_bound(s.phi, bound);
    for (VarId v : bound) EXPECT_TRUE(nn.count(v)) << text << " " << s.vars.name(v);
  }
}

TEST(Compile, VariableCountFollowsTheCaseTable) {
  // n free propositions: 2^n s-variables; a disjunction adds 2 * 2^n; a
  // existential over a fresh proposition adds 2^(n+1); a universal adds none.
  auto count = [](const char* text, std::vector<Variable> props) {
    return compile_sat(qpl(text), props).vars.size();
  };
  EXPECT_EQ(count("p", {"p", "q"}), 4u);
  EXPECT_EQ(count("p | q", {"p", "q"}), 4u + 8u);
  EXPECT_EQ(count("E r. p", {"p", "q"}), 4u + 8u);
  EXPECT_EQ(count("E r. (p | r)", {"p", "q"}), 4u + 8u + 16u);
  EXPECT_EQ(count("A r. E u. p", {"p"}), 2u + 8u);
  // Re-quantifying a free proposition keeps the arity.
  EXPECT_EQ(count("E p. p", {"p", "q"}), 4u + 4u);
}

TEST(Compile, DeclaredTupleIsChecked) {
  EXPECT_THROW(compile_sat(qpl("p & q"), {"p"}), InputError);
  EXPECT_THROW(compile_implication({qpl("ci(; p ; q)")}, qpl("ci(; q ; r)"), {"p", "q"}), InputError);
  EXPECT_THROW(compile_sat(qpl("(p) =~* (q)"), {}), PreconditionError);
}

TEST(Compile, LinearImplications) {
  // dep is linear after compilation: const(p) entails dep(q ; p).
  EXPECT_TRUE(decide(compile_implication({qpl("const(p)")}, qpl("dep(q ; p)"), {"p", "q"})).sat());
  EXPECT_TRUE(decide(compile_implication({qpl("dep(q ; p)")}, qpl("const(p)"), {"p", "q"})).unsat());
  EXPECT_TRUE(decide(compile_implication({qpl("(p) =~ (q)"), qpl("(q) =~ (r)")}, qpl("(p) =~ (r)"),
                                         {"p", "q", "r"}))
                  .sat());
}

ProbabilisticTeam fig1() { return team_from_json(read_json_file(PTS_DATA_DIR "/fig1.json")); }

TEST(Compile, TeamCheckAgreesWithAtoms) {
  auto t = fig1();
  Structure s = Structure::from_team(t);
  for (auto [text, expect] : std::vector<std::pair<const char*, bool>>{
           {"(y) =~ (z)", true}, {"(x) =~ (y)", false}, {"ci(; y ; z)", false},
           {"dep(x ; y)", true}, {"const(x)", false}, {"x != y", true}}) {
    Formula f = parse(text);
    for (bool strict : {false, true}) {
      ArithSentence a = compile_team_check(s, t, f, strict);
      SolverVerdict v = decide(a);
      ASSERT_FALSE(v.unknown()) << text;
      EXPECT_EQ(v.sat(), expect) << text << " strict=" << strict;
    }
  }
}

TEST(Compile, TeamCheckOnAlarmJoint) {
  auto t = team_from_json(read_json_file(PTS_DATA_DIR "/alarm.json"));
  Structure s = structure_from_json(read_json_file(PTS_DATA_DIR "/alarm_structure.json"));
  EXPECT_TRUE(decide(compile_team_check(s, t, parse("ci(t,c ; g ; a)"))).sat());
  EXPECT_TRUE(decide(compile_team_check(s, t, parse("ci(; g ; a)"))).unsat());
}

TEST(Compile, ScalingInvariance) {
  auto t = fig1();
  Structure s = Structure::from_team(t);
  auto doubled = scale(t, 2);
  for (const char* text : {"(y) =~ (z)", "(x) =~ (y)", "dep(x ; y)", "x = y | (y) =~ (z)"}) {
    auto a = decide(compile_team_check(s, t, parse(text)));
    auto b = decide(compile_team_check(s, doubled, parse(text)));
    EXPECT_EQ(a.status, b.status) << text;
  }
}

TEST(Compile, WeightNames) {
  EXPECT_EQ(weight_name("s", {"0", "1"}), "w_s_01");
  EXPECT_EQ(weight_name("t2", {"ab", "c"}), "w_t2_ab_c");
  EXPECT_EQ(weight_name("s", {}), "w_s");
}

}  // namespace
}  // namespace pts
