#include "pts/cli.hpp"

#include <algorithm>
#include <fstream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"
#include "pts/checker.hpp"
#include "pts/compile.hpp"
#include "pts/errors.hpp"
#include "pts/generate.hpp"
#include "pts/harness.hpp"
#include "pts/rewrite.hpp"
#include "pts/smtlib.hpp"
#include "pts/solver.hpp"
#include "pts/syntax.hpp"
#include "pts/team_io.hpp"

namespace pts {

namespace {

using nlohmann::json;

class FileError : public Error {
 public:
  using Error::Error;
};

struct Config {
  std::string team_path, structure_path, formula, formula_file, target, goal, mode = "fo",
      strategy = "auto", solver_cmd, out_path, suite, problem;
  std::vector<std::string> vars, assume;
  double timeout = 30;
  std::uint64_t seed = 1;
  std::size_t trials = 0;  // 0: the command's default
  std::size_t verify = 0;
  bool as_json = false, include_empty = false, strict_vocabulary = false, serial = false;
};

void require_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FileError("cannot open " + path);
}

json load_json(const std::string& path) {
  require_file(path);
  return read_json_file(path);
}

std::string formula_text(const Config& c) {
  if (!c.formula_file.empty()) {
    require_file(c.formula_file);
    std::string text = read_text_file(c.formula_file);
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
    return text;
  }
  if (c.formula.empty()) throw ConfigError("a formula is required (-f or --formula-file)");
  return c.formula;
}

Mode parse_mode(const std::string& m) {
  if (m == "fo") return Mode::FO;
  if (m == "qpl") return Mode::QPL;
  throw ConfigError("unknown mode '" + m + "' (expected fo or qpl)");
}

// Parses and reports syntax errors against the input text.
struct FormulaSyntaxError : Error {
  FormulaSyntaxError(const SyntaxError& e, const std::string& text)
      : Error(e.what()), text(text), column(e.column()), line(e.line()) {}
  std::string text;
  int column, line;
};

Formula parse_input(const std::string& text, Mode mode) {
  try {
    return parse(text, mode);
  } catch (const SyntaxError& e) {
    throw FormulaSyntaxError(e, text);
  }
}

SolverConfig solver_of(const Config& c) {
  if (!(c.timeout > 0)) throw ConfigError("--timeout must be positive");
  return SolverConfig::from_env(c.solver_cmd, c.timeout);
}

Structure binary_with_zero() {
  Structure s = Structure::binary();
  s.constants["zero"] = "0";
  return s;
}

json model_json(const std::optional<std::map<std::string, Rational>>& model) {
  json j = json::object();
  if (model)
    for (const auto& [k, v] : *model) j[k] = to_string(v);
  return j;
}

void print_model(std::ostream& out, const char* label,
                 const std::optional<std::map<std::string, Rational>>& model) {
  if (!model || model->empty()) return;
  out << label << ":";
  for (const auto& [k, v] : *model) out << " " << k << "=" << to_string(v);
  out << "\n";
}

int status_of(SolverVerdict::Status s) {
  switch (s) {
    case SolverVerdict::Status::Sat:
      return kExitTrue;
    case SolverVerdict::Status::Unsat:
      return kExitFalse;
    case SolverVerdict::Status::Unknown:
      return kExitUnknown;
  }
  return kExitUnknown;
}

void print_team(std::ostream& out, const ProbabilisticTeam& t) {
  const auto& dom = t.domain();
  for (const auto& r : t.rows()) {
    out << "  ";
    for (std::size_t i = 0; i < dom.size(); ++i) out << (i ? " " : "") << dom[i] << "=" << r.values[i];
    out << " : " << to_string(r.weight) << "\n";
  }
}

int cmd_check(const Config& c, std::ostream& out) {
  if (c.team_path.empty()) throw ConfigError("--team is required");
  Mode mode = parse_mode(c.mode);
  ProbabilisticTeam team = team_from_json(load_json(c.team_path));
  Structure s;
  if (!c.structure_path.empty())
    s = structure_from_json(load_json(c.structure_path));
  else
    s = mode == Mode::QPL ? Structure::binary() : Structure::from_team(team);
  Formula f = parse_input(formula_text(c), mode);
  Strategy strategy = parse_strategy(c.strategy);
  CheckOptions o;
  o.solver = solver_of(c);
  o.strict_vocabulary = c.strict_vocabulary;
  Verdict v = check(s, team, f, strategy, o);
  if (c.as_json) {
    out << json{{"schema", 1},         {"command", "check"}, {"formula", print(f)},
                {"strategy", to_string(strategy)}, {"verdict", to_string(v.value)},
                {"reason", v.reason},  {"witness", v.witness}}
               .dump(2)
        << "\n";
  } else {
    out << "verdict: " << to_string(v.value) << "\n";
    out << "strategy: " << to_string(strategy) << "\n";
    if (!v.reason.empty()) out << "reason: " << v.reason << "\n";
    if (!v.witness.empty()) out << "witness: " << v.witness << "\n";
  }
  return v.is_true() ? kExitTrue : v.is_false() ? kExitFalse : kExitUnknown;
}

int cmd_rewrite(const Config& c, std::ostream& out) {
  if (c.target.empty()) throw ConfigError("--to is required");
  TargetLogic target = parse_target(c.target);
  Mode mode = parse_mode(c.mode);
  Structure s = c.structure_path.empty() ? binary_with_zero()
                                         : structure_from_json(load_json(c.structure_path));
  Formula f = parse_input(formula_text(c), mode);
  Formula g = lower(f, target, s);

  std::size_t agree = 0, disagree = 0, undecided = 0;
  std::vector<std::string> failures;
  if (c.verify > 0) {
    CheckOptions o;
    o.solver = solver_of(c);
    auto fv = free_vars(f);
    std::vector<Variable> dom(fv.begin(), fv.end());
    if (dom.empty()) dom = {"x"};
    Rng rng(c.seed);
    for (std::size_t i = 0; i < c.verify; ++i) {
      ProbabilisticTeam t = random_team(s.universe, dom, 4, rng);
      auto a = check(s, t, f, Strategy::Auto, o).value, b = check(s, t, g, Strategy::Auto, o).value;
      if (a == Verdict::Value::Unknown || b == Verdict::Value::Unknown)
        ++undecided;
      else if (a == b)
        ++agree;
      else {
        ++disagree;
        failures.push_back(team_to_json(t).dump());
      }
    }
  }
  if (c.as_json) {
    json j{{"schema", 1}, {"command", "rewrite"}, {"source", print(f)}, {"target", to_string(target)},
           {"formula", print(g)}};
    if (c.verify > 0)
      j["verify"] = {{"trials", c.verify},
                     {"agree", agree},
                     {"disagree", disagree},
                     {"undecided", undecided},
                     {"seed", c.seed},
                     {"failures", failures}};
    out << j.dump(2) << "\n";
  } else {
    out << print(g) << "\n";
    if (c.verify > 0) {
      out << "verify: " << agree << "/" << c.verify << " agree";
      if (disagree) out << ", " << disagree << " disagree";
      if (undecided) out << ", " << undecided << " undecided";
      out << " (seed " << c.seed << ")\n";
      for (const auto& t : failures) out << "  disagreement on " << t << "\n";
    }
  }
  return disagree ? kExitFalse : kExitTrue;
}

int cmd_decide(const Config& c, std::ostream& out, bool validity) {
  Formula f = parse_input(formula_text(c), Mode::QPL);
  auto props = proposition_tuple(f, c.vars);
  ArithSentence sentence = validity ? compile_validity(f, props, c.include_empty) : compile_sat(f, props);
  SolverVerdict v = solve(sentence, solver_of(c));
  std::string answer = v.unknown() ? "unknown" : validity ? (v.sat() ? "valid" : "invalid")
                                                          : (v.sat() ? "sat" : "unsat");
  // A model witnesses satisfiability; for validity it is a counterexample.
  bool show = validity ? v.unsat() : v.sat();
  const char* label = validity ? "counterexample" : "model";
  if (c.as_json) {
    json j{{"schema", 1},         {"command", validity ? "valid" : "sat"},
           {"formula", print(f)}, {"propositions", props},
           {"result", answer},    {"reason", v.reason}};
    if (show) j[label] = model_json(v.model);
    out << j.dump(2) << "\n";
  } else {
    out << answer << "\n";
    out << "reason: " << v.reason << "\n";
    if (show) print_model(out, label, v.model);
  }
  return status_of(v.status);
}

int cmd_implies(const Config& c, std::ostream& out) {
  if (c.vars.empty()) throw ConfigError("--vars is required");
  if (c.goal.empty()) throw ConfigError("--goal is required");
  std::vector<Formula> sigma;
  for (const auto& a : c.assume) sigma.push_back(parse_input(a, Mode::QPL));
  Formula goal = parse_input(c.goal, Mode::QPL);
  for (const auto& s : sigma) proposition_tuple(s, c.vars);
  proposition_tuple(goal, c.vars);

  std::size_t trials = c.trials ? c.trials : 200;
  std::optional<ProbabilisticTeam> cex = refute_implication(sigma, goal, c.vars, trials, c.seed);
  SolverVerdict v;
  if (cex) {
    v.status = SolverVerdict::Status::Unsat;
    v.reason = "counterexample found by search";
  } else if (implied_by_symmetry(sigma, goal)) {
    v.status = SolverVerdict::Status::Sat;
    v.reason = "symmetry of an assumption";
  } else {
    v = solve(compile_implication(sigma, goal, c.vars), solver_of(c));
  }
  std::string answer = v.unknown() ? "unknown" : v.sat() ? "valid" : "invalid";
  if (c.as_json) {
    json j{{"schema", 1},     {"command", "implies"},  {"vars", c.vars},
           {"goal", print(goal)}, {"result", answer}, {"reason", v.reason}};
    j["assume"] = json::array();
    for (const auto& s : sigma) j["assume"].push_back(print(s));
    if (cex)
      j["counterexample"] = team_to_json(*cex);
    else if (v.unsat())
      j["counterexample"] = model_json(v.model);
    out << j.dump(2) << "\n";
  } else {
    out << answer << "\n";
    out << "reason: " << v.reason << "\n";
    if (cex) {
      out << "counterexample:\n";
      print_team(out, *cex);
    } else if (v.unsat()) {
      print_model(out, "counterexample", v.model);
    }
  }
  return status_of(v.status);
}

int cmd_smt(const Config& c, std::ostream& out) {
  ArithSentence sentence;
  if (c.problem == "sat" || c.problem == "valid") {
    Formula f = parse_input(formula_text(c), Mode::QPL);
    auto props = proposition_tuple(f, c.vars);
    sentence = c.problem == "sat" ? compile_sat(f, props) : compile_validity(f, props, c.include_empty);
  } else if (c.problem == "implies") {
    if (c.vars.empty()) throw ConfigError("--vars is required");
    if (c.goal.empty()) throw ConfigError("--goal is required");
    std::vector<Formula> sigma;
    for (const auto& a : c.assume) sigma.push_back(parse_input(a, Mode::QPL));
    sentence = compile_implication(sigma, parse_input(c.goal, Mode::QPL), c.vars);
  } else {
    throw ConfigError("unknown problem '" + c.problem + "' (expected sat, valid or implies)");
  }
  std::string script = emit_smtlib(sentence, c.problem == "sat");
  if (!c.out_path.empty()) {
    std::ofstream f(c.out_path, std::ios::binary);
    if (!f || !(f << script)) throw FileError("cannot write " + c.out_path);
    return kExitTrue;
  }
  out << script;
  return kExitTrue;
}

int cmd_prop(const Config& c, std::ostream& out) {
  HarnessOptions o;
  if (c.trials) o.trials = c.trials;
  else if (c.suite == "rewrite-soundness") o.trials = 200;
  o.seed = c.seed;
  o.execution = c.serial ? Execution::Serial : Execution::Parallel;
  o.check.solver = solver_of(c);
  if (!c.formula.empty() || !c.formula_file.empty()) o.formula = parse_input(formula_text(c), Mode::FO);
  PropertyReport r = run_suite(c.suite, o);
  if (c.as_json)
    out << report_to_json(r).dump(2) << "\n";
  else
    out << format_report(r);
  return r.ok() ? kExitTrue : kExitFalse;
}

void report_syntax(std::ostream& err, const FormulaSyntaxError& e) {
  err << "error: syntax: " << e.what() << "\n";
  if (e.line == 1 && e.text.find('\n') == std::string::npos && e.column >= 1) {
    err << "  " << e.text << "\n";
    err << "  " << std::string(static_cast<std::size_t>(e.column - 1), ' ') << "^\n";
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"Model checking and decision procedures for probabilistic team semantics", "pts"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  auto common = [&](CLI::App* sub) {
    sub->add_option("--solver-cmd", c.solver_cmd, "External SMT solver command; {} is the script path");
    sub->add_option("--timeout", c.timeout, "Solver timeout in seconds")->capture_default_str();
    sub->add_flag("--json", c.as_json, "Machine-readable output");
  };
  auto formula_opts = [&](CLI::App* sub) {
    sub->add_option("-f,--formula", c.formula, "Formula text");
    sub->add_option("--formula-file", c.formula_file, "File holding the formula");
  };

  CLI::App* check_cmd = app.add_subcommand("check", "Evaluate a formula on a probabilistic team");
  check_cmd->add_option("--team", c.team_path, "Team JSON file");
  check_cmd->add_option("--structure", c.structure_path, "Structure JSON file");
  check_cmd->add_option("--mode", c.mode, "Formula syntax: fo or qpl")->capture_default_str();
  check_cmd->add_option("--strategy", c.strategy, "auto, flat, direct, compile or witness-search")
      ->capture_default_str();
  check_cmd->add_flag("--strict-vocabulary", c.strict_vocabulary,
                      "Compile team weights over 0, 1, + and * only");
  formula_opts(check_cmd);
  common(check_cmd);

  CLI::App* rewrite_cmd = app.add_subcommand("rewrite", "Rewrite a formula into a target logic");
  rewrite_cmd->add_option("--to", c.target, "FO(~), FO(~*), FO(~,dep), FO(indep), FO(ci) or QPL");
  rewrite_cmd->add_option("--structure", c.structure_path, "Structure JSON file (default binary with zero)");
  rewrite_cmd->add_option("--mode", c.mode, "Formula syntax: fo or qpl")->capture_default_str();
  rewrite_cmd->add_option("--verify", c.verify, "Random teams on which to compare verdicts");
  rewrite_cmd->add_option("--seed", c.seed, "Seed for --verify")->capture_default_str();
  formula_opts(rewrite_cmd);
  common(rewrite_cmd);

  CLI::App* sat_cmd = app.add_subcommand("sat", "Satisfiability of a QPL formula");
  CLI::App* valid_cmd = app.add_subcommand("valid", "Validity of a QPL formula");
  for (CLI::App* sub : {sat_cmd, valid_cmd}) {
    sub->add_option("--vars", c.vars, "Propositions, comma separated")->delimiter(',');
    formula_opts(sub);
    common(sub);
  }
  valid_cmd->add_flag("--include-empty-team", c.include_empty, "Require truth on the empty team too");

  CLI::App* implies_cmd = app.add_subcommand("implies", "Implication between QPL formulas");
  implies_cmd->add_option("--vars", c.vars, "Propositions, comma separated")->delimiter(',');
  implies_cmd->add_option("--assume", c.assume, "Assumption (repeatable)");
  implies_cmd->add_option("--goal", c.goal, "Formula to derive");
  implies_cmd->add_option("--trials", c.trials, "Random refutation attempts (default 200)");
  implies_cmd->add_option("--seed", c.seed, "Seed for refutation")->capture_default_str();
  common(implies_cmd);

  CLI::App* smt_cmd = app.add_subcommand("smt", "Print the SMT-LIB script for a decision problem");
  smt_cmd->add_option("problem", c.problem, "sat, valid or implies")->required();
  smt_cmd->add_option("--vars", c.vars, "Propositions, comma separated")->delimiter(',');
  smt_cmd->add_option("--assume", c.assume, "Assumption (repeatable, implies)");
  smt_cmd->add_option("--goal", c.goal, "Formula to derive (implies)");
  smt_cmd->add_option("--out", c.out_path, "Write the script to this file");
  smt_cmd->add_flag("--include-empty-team", c.include_empty, "Validity on the empty team too");
  formula_opts(smt_cmd);
  common(smt_cmd);

  CLI::App* prop_cmd = app.add_subcommand("prop", "Run a seeded property suite");
  prop_cmd->add_option("suite", c.suite, "locality, scaling, union-closure or rewrite-soundness")
      ->required();
  prop_cmd->add_option("--trials", c.trials, "Trials (per pass for rewrite-soundness)");
  prop_cmd->add_option("--seed", c.seed, "Seed")->capture_default_str();
  prop_cmd->add_flag("--serial", c.serial, "Run trials on one thread");
  formula_opts(prop_cmd);
  common(prop_cmd);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitTrue;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitTrue;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }

  try {
    if (*check_cmd) return cmd_check(c, out);
    if (*rewrite_cmd) return cmd_rewrite(c, out);
    if (*sat_cmd) return cmd_decide(c, out, false);
    if (*valid_cmd) return cmd_decide(c, out, true);
    if (*implies_cmd) return cmd_implies(c, out);
    if (*smt_cmd) return cmd_smt(c, out);
    if (*prop_cmd) return cmd_prop(c, out);
  } catch (const FormulaSyntaxError& e) {
    report_syntax(err, e);
    return kExitSyntax;
  } catch (const SyntaxError& e) {
    err << "error: syntax: " << e.what() << "\n";
    return kExitSyntax;
  } catch (const FileError& e) {
    err << "error: " << e.what() << "\n";
    return kExitFile;
  } catch (const NoPathError& e) {
    err << "error: no rewrite path: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace pts
