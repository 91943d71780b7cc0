#include "pts/solver.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "pts/errors.hpp"
#include "pts/smtlib.hpp"

namespace pts {

SolverConfig SolverConfig::from_env(std::string command, double timeout_seconds) {
  SolverConfig c;
  c.command = std::move(command);
  c.timeout_seconds = timeout_seconds;
  if (c.command.empty())
    if (const char* env = std::getenv("PTS_SOLVER_CMD")) c.command = env;
  return c;
}

ProcessResult run_process(const std::string& command, double timeout_seconds) {
  ProcessResult res;
  int fds[2];
  if (pipe(fds) != 0) return res;
  pid_t pid = fork();
  if (pid < 0) {
    close(fds[0]);
    close(fds[1]);
    return res;
  }
  if (pid == 0) {
    setpgid(0, 0);
    dup2(fds[1], STDOUT_FILENO);
    dup2(fds[1], STDERR_FILENO);
    close(fds[0]);
    close(fds[1]);
    int devnull = open("/dev/null", O_RDONLY);
    if (devnull >= 0) dup2(devnull, STDIN_FILENO);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  setpgid(pid, pid);
  close(fds[1]);
  res.started = true;
  auto deadline = std::chrono::steady_clock::now() +
                  std::chrono::milliseconds(static_cast<long>(timeout_seconds * 1000));
  char buf[4096];
  for (;;) {
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
                    deadline - std::chrono::steady_clock::now())
                    .count();
    if (left <= 0) {
      res.timed_out = true;
      break;
    }
    pollfd p{fds[0], POLLIN, 0};
    int r = poll(&p, 1, static_cast<int>(std::min<long>(left, 1000)));
    if (r < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (r == 0) continue;
    ssize_t n = read(fds[0], buf, sizeof buf);
    if (n <= 0) break;
    res.output.append(buf, static_cast<std::size_t>(n));
  }
  close(fds[0]);
  if (res.timed_out) kill(-pid, SIGKILL);
  int status = 0;
  while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  if (!res.timed_out) res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

namespace {

struct SExpr {
  std::string atom;
  std::vector<SExpr> list;
  bool is_list = false;
};

class SExprReader {
 public:
  explicit SExprReader(const std::string& text) : s_(text) {}

  bool next(SExpr& out) {
    skip();
    if (i_ >= s_.size()) return false;
    out = read();
    return true;
  }

 private:
  void skip() {
    while (i_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[i_]))) {
        ++i_;
      } else if (s_[i_] == ';') {
        while (i_ < s_.size() && s_[i_] != '\n') ++i_;
      } else {
        break;
      }
    }
  }

  SExpr read() {
    SExpr e;
    if (s_[i_] == '(') {
      ++i_;
      e.is_list = true;
      for (;;) {
        skip();
        if (i_ >= s_.size()) throw InputError("unbalanced solver output");
        if (s_[i_] == ')') {
          ++i_;
          break;
        }
        e.list.push_back(read());
      }
      return e;
    }
    if (s_[i_] == ')') throw InputError("unbalanced solver output");
    if (s_[i_] == '|' || s_[i_] == '"') {
      char q = s_[i_++];
      std::size_t start = i_;
      while (i_ < s_.size() && s_[i_] != q) ++i_;
      e.atom = s_.substr(start, i_ - start);
      if (i_ < s_.size()) ++i_;
      return e;
    }
    std::size_t start = i_;
    while (i_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[i_])) && s_[i_] != '(' &&
           s_[i_] != ')')
      ++i_;
    e.atom = s_.substr(start, i_ - start);
    return e;
  }

  const std::string& s_;
  std::size_t i_ = 0;
};

std::optional<Rational> value_of(const SExpr& e) {
  if (!e.is_list) {
    try {
      return parse_rational(e.atom);
    } catch (const Error&) {
      return std::nullopt;
    }
  }
  if (e.list.empty() || e.list[0].is_list) return std::nullopt;
  const std::string& op = e.list[0].atom;
  if (op == "-" && e.list.size() == 2) {
    auto v = value_of(e.list[1]);
    if (v) return Rational(-*v);
  }
  if (op == "/" && e.list.size() == 3) {
    auto a = value_of(e.list[1]), b = value_of(e.list[2]);
    if (a && b && !is_zero(*b)) return Rational(*a / *b);
  }
  return std::nullopt;
}

void read_model(const SExpr& e, std::map<std::string, Rational>& out) {
  if (!e.is_list) return;
  if (e.list.size() == 5 && !e.list[0].is_list && e.list[0].atom == "define-fun" &&
      e.list[2].is_list && e.list[2].list.empty()) {
    if (auto v = value_of(e.list[4])) out[e.list[1].atom] = *v;
    return;
  }
  for (const auto& k : e.list) read_model(k, out);
}

}  // namespace

SolverVerdict parse_solver_output(const std::string& output) {
  SolverVerdict v;
  SExprReader reader(output);
  SExpr e;
  bool have_status = false;
  try {
    while (reader.next(e)) {
      if (!have_status) {
        if (!e.is_list && (e.atom == "sat" || e.atom == "unsat" || e.atom == "unknown")) {
          have_status = true;
          if (e.atom == "sat") {
            v.status = SolverVerdict::Status::Sat;
            v.reason = "external solver";
          } else if (e.atom == "unsat") {
            v.status = SolverVerdict::Status::Unsat;
            v.reason = "external solver";
          } else {
            v.reason = "solver-said-unknown";
          }
          continue;
        }
        if (e.is_list && !e.list.empty() && !e.list[0].is_list && e.list[0].atom == "error")
          break;
        continue;
      }
      if (v.sat() && e.is_list) {
        std::map<std::string, Rational> model;
        read_model(e, model);
        if (!model.empty()) v.model = std::move(model);
      }
    }
  } catch (const Error&) {
  }
  if (!have_status) {
    std::string head = output.substr(0, 200);
    while (!head.empty() && std::isspace(static_cast<unsigned char>(head.back()))) head.pop_back();
    v.status = SolverVerdict::Status::Unknown;
    v.reason = "solver-error: " + (head.empty() ? std::string("no output") : head);
  }
  return v;
}

SolverVerdict run_external(const ArithSentence& s, const SolverConfig& config) {
  SolverVerdict v;
  if (config.command.empty()) {
    v.reason = "solver-missing";
    return v;
  }
  char path[] = "/tmp/pts-query-XXXXXX";
  int fd = mkstemp(path);
  if (fd < 0) {
    v.reason = "solver-error: cannot create query file";
    return v;
  }
  close(fd);
  {
    std::ofstream out(path);
    out << emit_smtlib(s, true);
  }
  std::string cmd = config.command;
  auto pos = cmd.find("{}");
  if (pos != std::string::npos)
    cmd.replace(pos, 2, path);
  else
    cmd += std::string(" ") + path;
  ProcessResult r = run_process(cmd, config.timeout_seconds);
  unlink(path);
  if (!r.started) {
    v.reason = "solver-error: could not start";
    return v;
  }
  if (r.timed_out) {
    v.reason = "timeout";
    return v;
  }
  return parse_solver_output(r.output);
}

SolverVerdict solve(const ArithSentence& s, const SolverConfig& config) {
  if (!is_nonlinear(s.phi)) {
    SolverVerdict v = linear_qe(s);
    if (v.unknown() && !config.command.empty()) return run_external(s, config);
    return v;
  }
  ExistsOptions opts;
  if (!config.command.empty())
    opts.residue = [&config](const ArithSentence& sub) { return run_external(sub, config); };
  std::vector<VarId> vars;
  ArithFormula matrix;
  if (pull_existentials(s.phi, false, vars, matrix)) return decide_existential(matrix, s.vars, opts);
  vars.clear();
  if (pull_existentials(s.phi, true, vars, matrix)) {
    SolverVerdict v = decide_existential(matrix, s.vars, opts);
    if (v.sat())
      v.status = SolverVerdict::Status::Unsat;
    else if (v.unsat())
      v.status = SolverVerdict::Status::Sat;
    return v;
  }
  if (config.command.empty()) {
    SolverVerdict v;
    v.reason = "solver-missing";
    return v;
  }
  return run_external(s, config);
}

}  // namespace pts
