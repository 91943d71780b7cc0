#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>

#include "pts/arith.hpp"

namespace pts {

// Sat means the sentence is true (for an existential closure: satisfiable);
// Unsat means it is false.
struct SolverVerdict {
  enum class Status { Sat, Unsat, Unknown };
  Status status = Status::Unknown;
  // Values of the outermost existential block, when available. For a false
  // universal sentence: a counterexample to its matrix.
  std::optional<std::map<std::string, Rational>> model;
  // Unknown: "timeout", "solver-missing", "solver-said-unknown", "solver-error: ...",
  // "budget". Otherwise a short note on how the verdict was reached.
  std::string reason;

  bool sat() const { return status == Status::Sat; }
  bool unsat() const { return status == Status::Unsat; }
  bool unknown() const { return status == Status::Unknown; }
};

std::string to_string(SolverVerdict::Status s);

struct SolverConfig {
  // Shell command; "{}" is replaced by the script path, otherwise the path is
  // appended. Empty means no external solver.
  std::string command;
  double timeout_seconds = 30;
  // Solver command from PTS_SOLVER_CMD when command is empty.
  static SolverConfig from_env(std::string command = "", double timeout_seconds = 30);
};

// Called on a residual existential sentence that is still nonlinear.
using ResidueHandler = std::function<SolverVerdict(const ArithSentence&)>;

struct ExistsOptions {
  // Accept an assignment of the linear relaxation that happens to satisfy the
  // nonlinear constraints too.
  bool try_relaxation_model = false;
  std::size_t max_branches = 200000;
  ResidueHandler residue;
};

// Decides "exists all variables. matrix" for a quantifier-free matrix by
// Gauss-Jordan elimination, propagation of constant factors through products,
// exact simplex and case splits on disjunctions.
SolverVerdict decide_existential(const ArithFormula& matrix, const VarTable& vars,
                                 const ExistsOptions& opts = {});

// Moves the existential quantifiers of f (of not f when negate is set) to the
// front. Fails when a universal would remain after negation normal form.
// Assumes every quantifier binds distinct variables.
bool pull_existentials(const ArithFormula& f, bool negate, std::vector<VarId>& vars,
                       ArithFormula& matrix);

// Complete decision procedure for closed multiplication-free sentences:
// Fourier-Motzkin quantifier elimination with simplex pruning, and the
// existential procedure above for existential or universal closures.
// Throws FragmentError on nonlinear input.
SolverVerdict linear_qe(const ArithSentence& s);

// Routes linear sentences to linear_qe and nonlinear ones to the external
// solver. Never throws for solver failures.
SolverVerdict solve(const ArithSentence& s, const SolverConfig& config);

// Runs the external solver on the sentence.
SolverVerdict run_external(const ArithSentence& s, const SolverConfig& config);

struct ProcessResult {
  bool started = false;
  bool timed_out = false;
  int exit_code = -1;
  std::string output;
};

// Runs "sh -c command" with a wall-clock limit, killing the process group on
// timeout. Captures stdout and stderr together.
ProcessResult run_process(const std::string& command, double timeout_seconds);

// Parses "sat"/"unsat"/"unknown" and an optional (get-model) answer.
SolverVerdict parse_solver_output(const std::string& output);

}  // namespace pts
