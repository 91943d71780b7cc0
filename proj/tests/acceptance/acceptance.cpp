// Acceptance run: one PASS/FAIL line per criterion. Exit status 0 iff all pass.
//   acceptance [--only N]...
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "pts/atoms.hpp"
#include "pts/checker.hpp"
#include "pts/compile.hpp"
#include "pts/errors.hpp"
#include "pts/generate.hpp"
#include "pts/harness.hpp"
#include "pts/smtlib.hpp"
#include "pts/solver.hpp"
#include "pts/syntax.hpp"
#include "pts/team_io.hpp"

using namespace pts;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string data(const std::string& name) { return std::string(PTS_DATA_DIR) + "/" + name; }

SolverConfig solver() {
  SolverConfig c;
#ifdef PTS_Z3_PATH
  c.command = std::string(PTS_Z3_PATH) + " -smt2 {}";
#endif
  c.timeout_seconds = 60;
  return c;
}

void expect(Outcome& o, bool ok, const std::string& what) {
  if (ok) return;
  o.pass = false;
  if (!o.detail.empty()) o.detail += "; ";
  o.detail += what;
}

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string counts(const PropertyCounts& c) {
  return std::to_string(c.checked) + " checked, " + std::to_string(c.skipped) + " skipped, " +
         std::to_string(c.inconclusive) + " inconclusive, " + std::to_string(c.violations) + " violations";
}

// 1. Golden atom verdicts on fig1.json.
Outcome fig1() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  auto team = team_from_json(read_json_file(data("fig1.json")));
  Structure s = Structure::from_team(team);
  const std::pair<const char*, Verdict::Value> cases[] = {
      {"(x,y) =~* (y)", Verdict::Value::True},
      {"(x) =~* (y)", Verdict::Value::True},
      {"(y) =~* (z)", Verdict::Value::True},
      {"(y) =~ (z)", Verdict::Value::True},
      {"(x) =~ (y)", Verdict::Value::False},
  };
  for (const auto& [f, want] : cases) {
    Verdict v = check(s, team, parse(f));
    expect(o, v.value == want, std::string(f) + " gave " + to_string(v.value));
  }
  double secs = since(t0);
  expect(o, secs < 1, "took " + std::to_string(secs) + " s");
  if (o.pass) o.detail = "5/5 verdicts";
  return o;
}

// 2. Alarm network.
Outcome alarm() {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  auto team = team_from_json(read_json_file(data("alarm.json")));
  Structure s = structure_from_json(read_json_file(data("alarm_structure.json")));
  expect(o, team.rows().size() == 16, "joint has " + std::to_string(team.rows().size()) + " rows");
  expect(o, check(s, team, parse("ci(t,c ; g ; a)")).is_true(), "ci(t,c ; g ; a) not true");
  expect(o, check(s, team, parse("t = #T | g = #F")).is_true(), "guard t=F -> g=F not satisfied");
  expect(o, check(s, team, parse("t = #T | (t = #F & ci(; g ; c))")).is_true(), "CSI formula not true");

  // P(t=T, c=T, g=T, a=T) + 1/100.
  std::vector<Row> rows = team.rows();
  for (auto& r : rows)
    if (r.values == Tuple{"T", "T", "T", "T"}) r.weight += make_rational(1, 100);
  ProbabilisticTeam perturbed(team.domain(), rows);
  expect(o, check(s, perturbed, parse("ci(t,c ; g ; a)")).is_false(), "perturbed joint still satisfies ci");
  double secs = since(t0);
  expect(o, secs < 5, "took " + std::to_string(secs) + " s");
  if (o.pass) o.detail = "ci, CSI and perturbation as expected";
  return o;
}

// 3. Rewrite soundness.
Outcome rewrites() {
  Outcome o;
  HarnessOptions opts;
  opts.trials = 200;
  opts.seed = 2024;
  opts.check.solver = solver();
  auto t0 = std::chrono::steady_clock::now();
  PropertyReport full = check_rewrite_soundness(opts);
  double full_secs = since(t0);
  expect(o, full.ok(), std::to_string(full.violations.size()) + " disagreements");
  expect(o, full.totals.inconclusive == 0, std::to_string(full.totals.inconclusive) + " undecided");
  expect(o, full_secs <= 600, "full run took " + std::to_string(full_secs) + " s");

  // Linear-only subset without a solver.
  HarnessOptions lin = opts;
  lin.check.solver = SolverConfig{};
  lin.passes = {RewritePass::DepToEquiv, RewritePass::EquivToIdentityDep, RewritePass::IdentityToEquiv};
  t0 = std::chrono::steady_clock::now();
  PropertyReport linear = check_rewrite_soundness(lin);
  double lin_secs = since(t0);
  expect(o, linear.ok() && linear.totals.inconclusive == 0, "linear subset: " + counts(linear.totals));
  expect(o, lin_secs <= 60, "linear subset took " + std::to_string(lin_secs) + " s");

  std::ostringstream d;
  for (const auto& p : full.parts) d << p.name << " " << p.checked << "/" << p.trials << ", ";
  d << "full " << static_cast<int>(full_secs) << " s, linear subset solver-free "
    << static_cast<int>(lin_secs) << " s";
  if (o.pass) o.detail = d.str();
  return o;
}

// 4. Union closure.
Outcome union_closure() {
  Outcome o;
  HarnessOptions opts;
  opts.trials = 500;
  opts.seed = 7;
  PropertyReport r = check_union_closure(opts);
  expect(o, r.ok(), std::to_string(r.violations.size()) + " violations");
  opts.formula = parse("const(x)");
  PropertyReport neg = check_union_closure(opts);
  expect(o, !neg.ok(), "const(x) control produced no violation");
  if (o.pass)
    o.detail = counts(r.totals) + "; const(x) control: " + std::to_string(neg.totals.violations) + " violations";
  return o;
}

// 5. Locality and scaling.
Outcome locality_scaling() {
  Outcome o;
  HarnessOptions opts;
  opts.trials = 500;
  opts.seed = 11;
  // Solver-free: a ci atom under a split stays undecided rather than failing.
  auto t0 = std::chrono::steady_clock::now();
  PropertyReport l = check_locality(opts);
  PropertyReport s = check_scaling(opts);
  double secs = since(t0);
  expect(o, l.ok(), "locality: " + counts(l.totals));
  expect(o, s.ok(), "scaling: " + counts(s.totals));
  expect(o, secs < 60, "took " + std::to_string(secs) + " s");
  if (o.pass)
    o.detail = "locality " + counts(l.totals) + "; scaling " + counts(s.totals) + "; " +
               std::to_string(static_cast<int>(secs)) + " s";
  return o;
}

// Every QPL formula over {p, q} built from the atoms below with at most two
// layers of connectives or quantifiers (atoms have depth 0). Commutative
// duplicates are skipped.
std::vector<Formula> qpl_depth2() {
  std::vector<Formula> d0{f_prop("p", true),   f_prop("p", false),      f_prop("q", true),
                          f_mi({"p"}, {"q"}), f_dep({"p"}, {"q"}), f_const({"p"})};
  auto layer = [](const std::vector<Formula>& below, std::size_t fresh_from) {
    std::vector<Formula> out;
    for (std::size_t i = 0; i < below.size(); ++i) {
      bool fresh_i = i >= fresh_from;
      if (fresh_i) {
        out.push_back(f_neg(below[i]));
        for (const char* v : {"p", "q"}) {
          out.push_back(f_exists(v, below[i]));
          out.push_back(f_forall(v, below[i]));
        }
      }
      for (std::size_t j = i; j < below.size(); ++j) {
        if (!fresh_i && j < fresh_from) continue;
        out.push_back(f_and(below[i], below[j]));
        out.push_back(f_or(below[i], below[j]));
      }
    }
    return out;
  };
  std::vector<Formula> all = d0;
  auto d1 = layer(d0, 0);
  all.insert(all.end(), d1.begin(), d1.end());
  auto d2 = layer(all, d0.size());
  all.insert(all.end(), d2.begin(), d2.end());
  return all;
}

// Runs many closed sentences through one solver process, separated by
// (reset); under push/pop z3 falls back to its incremental solver, which is far
// slower on quantified input. Unknown for anything the solver did not answer.
std::vector<SolverVerdict::Status> batch_external(const std::vector<ArithSentence>& sentences,
                                                  const SolverConfig& cfg, std::string& error) {
  std::vector<SolverVerdict::Status> out;
  const std::size_t chunk = 400;
  for (std::size_t start = 0; start < sentences.size(); start += chunk) {
    std::size_t end = std::min(sentences.size(), start + chunk);
    std::string script;
    for (std::size_t i = start; i < end; ++i) script += emit_smtlib(sentences[i]) + "(reset)\n";
    auto path = std::filesystem::temp_directory_path() /
                ("pts_acceptance_" + std::to_string(::getpid()) + ".smt2");
    {
      std::ofstream f(path);
      f << script;
    }
    std::string cmd = cfg.command;
    auto at = cmd.find("{}");
    cmd = at == std::string::npos ? cmd + " " + path.string()
                                  : cmd.replace(at, 2, path.string());
    ProcessResult r = run_process(cmd, 600);
    std::filesystem::remove(path);
    std::istringstream lines(r.output);
    std::string line;
    std::size_t got = 0;
    while (std::getline(lines, line) && got < end - start) {
      if (line == "sat") out.push_back(SolverVerdict::Status::Sat);
      else if (line == "unsat") out.push_back(SolverVerdict::Status::Unsat);
      else if (line == "unknown") out.push_back(SolverVerdict::Status::Unknown);
      else {
        if (error.empty()) error = line;
        continue;
      }
      ++got;
    }
    for (; got < end - start; ++got) out.push_back(SolverVerdict::Status::Unknown);
  }
  return out;
}

// 6. Compiler conformance.
Outcome conformance() {
  Outcome o;
  const std::vector<Variable> props{"p", "q"};
  auto internal = [&](const ArithSentence& s) { return linear_qe(s).status; };
  using St = SolverVerdict::Status;
  expect(o, internal(compile_sat(parse("p", Mode::QPL), {"p"})) == St::Sat, "sat(p)");
  expect(o, internal(compile_sat(parse("p & ~p", Mode::QPL), {"p"})) == St::Unsat, "unsat(p & ~p)");
  expect(o, internal(compile_validity(parse("p | !p", Mode::QPL), {"p"})) == St::Sat, "valid(p | !p)");
  expect(o, internal(compile_validity(parse("(p) =~ (p)", Mode::QPL), {"p"})) == St::Sat,
         "valid((p) =~ (p))");

  auto formulas = qpl_depth2();
  std::vector<ArithSentence> sentences;
  for (const auto& f : formulas) {
    sentences.push_back(compile_sat(f, props));
    sentences.push_back(compile_validity(f, props));
  }
  std::vector<St> mine;
  std::size_t undecided = 0;
  for (const auto& s : sentences) {
    St v = internal(s);
    undecided += v == St::Unknown;
    mine.push_back(v);
  }
  expect(o, undecided == 0, std::to_string(undecided) + " sentences undecided internally");

  SolverConfig cfg = solver();
  std::string agreement = "no external solver configured";
  if (!cfg.command.empty()) {
    std::string error;
    auto theirs = batch_external(sentences, cfg, error);
    std::size_t agree = 0, unanswered = 0;
    std::string first;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
      if (theirs[i] == St::Unknown) {
        ++unanswered;
        continue;
      }
      if (theirs[i] == mine[i]) ++agree;
      else if (first.empty())
        first = (i % 2 ? "valid " : "sat ") + print(formulas[i / 2]);
    }
    expect(o, agree + unanswered == sentences.size(), "disagreement on " + first);
    expect(o, unanswered == 0,
           std::to_string(unanswered) + " left unanswered by the solver" + (error.empty() ? "" : ": " + error));
    agreement = std::to_string(agree) + "/" + std::to_string(sentences.size()) + " agree with the solver";
  }
  if (o.pass)
    o.detail = std::to_string(formulas.size()) + " formulas, " + std::to_string(sentences.size()) +
               " sentences; fixtures ok; " + agreement;
  return o;
}

// 7. Conditional independence implication.
Outcome ci_implication() {
  Outcome o;
  const std::vector<Variable> xyz{"x", "y", "z"};
  auto ci = [](const char* s) { return parse(s, Mode::QPL); };
  struct Instance {
    const char* name;
    std::vector<Formula> sigma;
    Formula goal;
  };
  std::vector<Instance> valid{
      {"symmetry", {ci("ci(; x ; y)")}, ci("ci(; y ; x)")},
      {"conditional symmetry", {ci("ci(z ; x ; y)")}, ci("ci(z ; y ; x)")},
      {"decomposition", {ci("ci(; x ; y,z)")}, ci("ci(; x ; y)")},
      {"weak union", {ci("ci(; x ; y,z)")}, ci("ci(z ; x ; y)")},
      {"contraction", {ci("ci(; x ; y)"), ci("ci(y ; x ; z)")}, ci("ci(; x ; y,z)")},
  };
  SolverConfig cfg = solver();
  auto t0 = std::chrono::steady_clock::now();
  std::vector<std::string> done;
  for (const auto& inst : valid) {
    if (refute_implication(inst.sigma, inst.goal, xyz, 200, 1)) {
      expect(o, false, std::string(inst.name) + " refuted");
      continue;
    }
    if (implied_by_symmetry(inst.sigma, inst.goal)) {
      done.push_back(std::string(inst.name) + " (syntactic)");
      continue;
    }
    if (cfg.command.empty()) {
      expect(o, false, std::string(inst.name) + " needs an external solver");
      continue;
    }
    SolverVerdict v = solve(compile_implication(inst.sigma, inst.goal, xyz), cfg);
    expect(o, v.sat(), std::string(inst.name) + ": " + to_string(v.status) + " (" + v.reason + ")");
    if (v.sat()) done.push_back(std::string(inst.name) + " (solver)");
  }
  double solver_secs = since(t0);
  expect(o, solver_secs <= 120, "valid instances took " + std::to_string(solver_secs) + " s");

  t0 = std::chrono::steady_clock::now();
  Formula goal = ci("ci(; p ; q)");
  auto cex = refute_implication({}, goal, {"p", "q"}, 200, 1);
  double refute_secs = since(t0);
  expect(o, cex.has_value(), "no counterexample for {} |= ci(; p ; q)");
  std::string shown;
  if (cex) {
    // The defining product equation must fail for some value pattern.
    AtomVerdict av = eval_conditional_independence(*cex, {}, {"p"}, {"q"});
    expect(o, !av.holds, "counterexample satisfies ci by atom evaluation");
    expect(o, cex->total_weight() == 1, "counterexample is not a distribution");
    shown = team_to_json(*cex).dump() + ", product equation fails at " + describe_witness(av);
  }
  expect(o, refute_secs < 5, "refuter took " + std::to_string(refute_secs) + " s");
  if (o.pass) {
    o.detail = "valid:";
    for (const auto& d : done) o.detail += " " + d + ",";
    o.detail += " solver path " + std::to_string(static_cast<int>(solver_secs)) +
                " s; invalid with counterexample " + shown;
  }
  return o;
}

// 8. Determinism of the command-line tool.
Outcome determinism() {
  Outcome o;
  std::string cli = PTS_CLI_PATH;
  std::string fig1 = data("fig1.json");
  std::vector<std::string> cmds{
      "check --team " + fig1 + " -f '(x,y) =~* (y)'",
      "check --team " + fig1 + " -f 'E u. ((u) =~ (x) & dep(y ; u))' --json",
      "rewrite -f 'dep(x ; y)' --to 'FO(~*)'",
      "rewrite -f '(x) =~ (y)' --to 'FO(indep)' --verify 20 --json",
      "sat -f 'p & (q | ~q)'",
      "valid -f '(p) =~ (p)' --json",
      "implies --vars p,q --goal 'ci(; p ; q)'",
      "implies --vars p,q --assume 'ci(; p ; q)' --goal 'ci(; q ; p)' --json",
      "smt sat -f 'ci(; p ; q)'",
      "smt implies --vars p,q --assume 'ci(; p ; q)' --goal 'ci(; q ; p)'",
      "prop union-closure --trials 100 --seed 3",
      "prop locality --trials 60 --seed 3 --json",
  };
  std::size_t same = 0;
  for (const auto& c : cmds) {
    std::string full = cli + " " + c + " 2>&1";
    ProcessResult a = run_process(full, 120), b = run_process(full, 120);
    bool ok = a.started && b.started && !a.timed_out && a.output == b.output && a.exit_code == b.exit_code &&
              !a.output.empty();
    expect(o, ok, "differs: " + c);
    same += ok;
  }
  if (o.pass) o.detail = std::to_string(same) + "/" + std::to_string(cmds.size()) + " commands byte-identical";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--only" && i + 1 < argc) only.insert(std::stoi(argv[++i]));
  }
  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const std::vector<Criterion> criteria{
      {"fig1 atom verdicts", fig1},
      {"alarm network ci and CSI", alarm},
      {"rewrite soundness", rewrites},
      {"union closure", union_closure},
      {"locality and scaling", locality_scaling},
      {"compiler conformance", conformance},
      {"ci implication", ci_implication},
      {"determinism", determinism},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    int n = static_cast<int>(i + 1);
    if (!only.empty() && !only.count(n)) continue;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    all = all && o.pass;
    char secs[32];
    std::snprintf(secs, sizeof secs, "%.1f s", since(t0));
    std::cout << "criterion " << n << ": " << (o.pass ? "PASS" : "FAIL") << "  " << criteria[i].name << " ("
              << secs << ")  " << o.detail << std::endl;
  }
  return all ? 0 : 1;
}
