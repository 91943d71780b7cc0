#include <gtest/gtest.h>
#include <unistd.h>

#include "pts/smtlib.hpp"
#include "pts/solver.hpp"

#ifndef PTS_Z3_PATH
#define PTS_Z3_PATH ""
#endif

namespace pts {
namespace {

TEST(SolverOutput, ParsesStatusAndModel) {
  SolverVerdict v = parse_solver_output(
      "sat\n(\n  (define-fun w_s_1 () Real\n    (/ 1.0 2.0))\n  (define-fun w_s_0 () Real\n"
      "    (- 3.0))\n  (define-fun r () Real (root-obj (+ (^ x 2) (- 2)) 1))\n)\n");
  ASSERT_TRUE(v.sat());
  ASSERT_TRUE(v.model);
  EXPECT_EQ(v.model->at("w_s_1"), make_rational(1, 2));
  EXPECT_EQ(v.model->at("w_s_0"), -3);
  EXPECT_FALSE(v.model->count("r"));
  EXPECT_TRUE(parse_solver_output("unsat\n").unsat());
  EXPECT_EQ(parse_solver_output("unknown\n").reason, "solver-said-unknown");
  SolverVerdict err = parse_solver_output("(error \"line 1: bad\")\n");
  EXPECT_TRUE(err.unknown());
  EXPECT_EQ(err.reason.rfind("solver-error", 0), 0u);
}

TEST(Process, CapturesOutputAndTimesOut) {
  ProcessResult r = run_process("echo hi; echo err 1>&2; exit 3", 5);
  EXPECT_TRUE(r.started);
  EXPECT_FALSE(r.timed_out);
  EXPECT_EQ(r.exit_code, 3);
  EXPECT_EQ(r.output, "hi\nerr\n");
  r = run_process("sleep 5", 0.3);
  EXPECT_TRUE(r.timed_out);
}

ArithSentence product_sentence() {
  ArithSentence s;
  VarId x = s.vars.add("x"), y = s.vars.add("y");
  s.phi = a_exists({x, y}, a_and({a_eq(t_mul({t_var(x), t_var(y)}), t_const(1)),
                                  a_leq(t_const(0), t_var(x))}));
  return s;
}

TEST(Smtlib, LogicAndDeterminism) {
  ArithSentence s;
  VarId a = s.vars.add("w_s_0"), b = s.vars.add("w_s_1");
  s.phi = a_exists({a, b}, a_eq(t_add({t_var(a), t_var(b)}), t_const(make_rational(-1, 3))));
  std::string text = emit_smtlib(s, true);
  EXPECT_EQ(text,
            "(set-logic LRA)\n(declare-const w_s_0 Real)\n(declare-const w_s_1 Real)\n"
            "(assert (= (+ w_s_0 w_s_1) (- (/ 1 3))))\n(check-sat)\n(get-model)\n");
  EXPECT_EQ(text, emit_smtlib(s, true));
  EXPECT_NE(emit_smtlib(product_sentence()).find("(set-logic NRA)"), std::string::npos);
  EXPECT_EQ(smt_symbol("a b"), "|a b|");
}

TEST(Solve, RoutingWithoutSolver) {
  ArithSentence lin;
  VarId x = lin.vars.add("x");
  lin.phi = a_forall({x}, a_leq(t_var(x), t_add({t_var(x), t_const(1)})));
  EXPECT_TRUE(solve(lin, SolverConfig{}).sat());
  SolverVerdict v = solve(product_sentence(), SolverConfig{});
  EXPECT_TRUE(v.unknown());
  EXPECT_EQ(v.reason, "solver-missing");
}

TEST(Solve, BrokenSolverIsUnknownNotCrash) {
  SolverConfig c;
  c.command = "false";
  SolverVerdict v = solve(product_sentence(), c);
  EXPECT_TRUE(v.unknown());
  c.command = "sleep 10 #";
  c.timeout_seconds = 0.3;
  v = solve(product_sentence(), c);
  EXPECT_TRUE(v.unknown());
  EXPECT_EQ(v.reason, "timeout");
}

TEST(Solve, ExternalSolverWhenAvailable) {
  std::string z3 = PTS_Z3_PATH;
  if (z3.empty() || access(z3.c_str(), X_OK) != 0) GTEST_SKIP() << "no z3";
  SolverConfig c;
  c.command = z3 + " {}";
  SolverVerdict v = solve(product_sentence(), c);
  ASSERT_TRUE(v.sat()) << v.reason;
  ASSERT_TRUE(v.model);
  EXPECT_EQ(v.model->at("x") * v.model->at("y"), 1);
}

}  // namespace
}  // namespace pts
