#include <gtest/gtest.h>

#include "pts/errors.hpp"
#include "pts/harness.hpp"
#include "pts/syntax.hpp"

namespace pts {
namespace {

CheckOptions with_solver() {
  CheckOptions o;
#ifdef PTS_Z3_PATH
  o.solver.command = std::string(PTS_Z3_PATH) + " -smt2 {}";
#endif
  return o;
}

HarnessOptions small(std::size_t trials, Execution ex = Execution::Parallel) {
  HarnessOptions o;
  o.trials = trials;
  o.seed = 11;
  o.execution = ex;
  return o;
}

void expect_same(const PropertyReport& a, const PropertyReport& b) {
  EXPECT_EQ(report_to_json(a), report_to_json(b));
}

TEST(Harness, ParallelMatchesSerial) {
  for (const char* suite : {"union-closure", "locality", "scaling"}) {
    SCOPED_TRACE(suite);
    auto p = run_suite(suite, small(60, Execution::Parallel));
    auto s = run_suite(suite, small(60, Execution::Serial));
    expect_same(p, s);
  }
  HarnessOptions o = small(20);
  o.passes = {RewritePass::DepToCi, RewritePass::EquivToIdentityDep};
  auto p = check_rewrite_soundness(o);
  o.execution = Execution::Serial;
  expect_same(p, check_rewrite_soundness(o));
}

TEST(Harness, DeterministicPerSeed) {
  EXPECT_EQ(report_to_json(check_scaling(small(40))), report_to_json(check_scaling(small(40))));
}

TEST(Harness, UnionClosureHoldsForFirstOrder) {
  auto r = check_union_closure(small(200));
  EXPECT_TRUE(r.ok()) << format_report(r);
  EXPECT_EQ(r.totals.trials, 200u);
  EXPECT_GT(r.totals.checked, 0u);
}

TEST(Harness, ConstancyIsNotUnionClosed) {
  HarnessOptions o = small(200);
  o.formula = parse("const(x)");
  auto r = check_union_closure(o);
  EXPECT_FALSE(r.ok());
  ASSERT_FALSE(r.violations.empty());
  EXPECT_EQ(r.violations[0].formula, "const(x)");
}

TEST(Harness, LocalityAndScaling) {
  auto l = check_locality(small(150));
  EXPECT_TRUE(l.ok()) << format_report(l);
  EXPECT_GT(l.totals.checked, 100u);
  auto s = check_scaling(small(150));
  EXPECT_TRUE(s.ok()) << format_report(s);
  EXPECT_GT(s.totals.checked, 100u);
}

TEST(Harness, RewriteSoundnessSolverFree) {
  HarnessOptions o = small(60);
  o.passes = {RewritePass::DepToCi, RewritePass::DepToEquiv, RewritePass::EquivToIdentityDep,
              RewritePass::IdentityToEquiv};
  auto r = check_rewrite_soundness(o);
  EXPECT_TRUE(r.ok()) << format_report(r);
  ASSERT_EQ(r.parts.size(), 4u);
  for (const auto& p : r.parts) EXPECT_EQ(p.checked, 60u) << p.name;
}

TEST(Harness, RewriteSoundnessWithSolver) {
  HarnessOptions o = small(8);
  o.check = with_solver();
  if (o.check.solver.command.empty()) GTEST_SKIP() << "no solver";
  o.passes = {RewritePass::IdentityToMargIndep, RewritePass::CiToMargIndep};
  auto r = check_rewrite_soundness(o);
  EXPECT_TRUE(r.ok()) << format_report(r);
  for (const auto& p : r.parts) EXPECT_GT(p.checked, 0u) << p.name;
}

TEST(Harness, UnknownSuite) { EXPECT_THROW(run_suite("closure", small(1)), ConfigError); }

TEST(Harness, ReportFormats) {
  HarnessOptions o = small(30);
  o.formula = parse("const(x)");
  auto r = check_union_closure(o);
  auto j = report_to_json(r);
  EXPECT_EQ(j["suite"], "union-closure");
  EXPECT_EQ(j["ok"], false);
  EXPECT_EQ(j["violations"].size(), r.violations.size());
  std::string text = format_report(r);
  EXPECT_NE(text.find("suite union-closure (seed 11)"), std::string::npos);
  EXPECT_NE(text.find("violation at trial"), std::string::npos);
}

}  // namespace
}  // namespace pts
