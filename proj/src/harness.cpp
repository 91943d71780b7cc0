#include "pts/harness.hpp"

#include <algorithm>
#include <functional>

#include "pts/errors.hpp"
#include "pts/generate.hpp"
#include "pts/rewrite.hpp"
#include "pts/syntax.hpp"
#include "pts/team_io.hpp"

namespace pts {

std::string to_string(RewritePass p) {
  switch (p) {
    case RewritePass::DepToCi:
      return "dep-to-ci";
    case RewritePass::DepToEquiv:
      return "dep-to-equiv";
    case RewritePass::EquivToIdentityDep:
      return "equiv-to-identity-dep";
    case RewritePass::IdentityToEquiv:
      return "identity-to-equiv";
    case RewritePass::IdentityToMargIndep:
      return "identity-to-marg-indep";
    case RewritePass::CiToMargIndep:
      return "ci-to-marg-indep";
  }
  return "?";
}

const std::vector<RewritePass>& all_rewrite_passes() {
  static const std::vector<RewritePass> passes{
      RewritePass::DepToCi,         RewritePass::DepToEquiv,          RewritePass::EquivToIdentityDep,
      RewritePass::IdentityToEquiv, RewritePass::IdentityToMargIndep, RewritePass::CiToMargIndep};
  return passes;
}

namespace {

enum class Outcome { Checked, Skipped, Inconclusive, Violated };

struct TrialResult {
  Outcome outcome = Outcome::Skipped;
  std::string formula;
  std::string detail;
};

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Each trial draws from its own generator so results do not depend on the
// order in which trials run.
Rng trial_rng(std::uint64_t seed, std::size_t trial) { return Rng(splitmix(seed ^ splitmix(trial))); }

using TrialFn = std::function<TrialResult(std::size_t, Rng&)>;

std::vector<TrialResult> run_trials(std::size_t trials, std::uint64_t seed, Execution ex,
                                    const TrialFn& fn) {
  std::vector<TrialResult> out(trials);
  auto one = [&](std::size_t i) {
    Rng rng = trial_rng(seed, i);
    try {
      out[i] = fn(i, rng);
    } catch (const std::exception& e) {
      out[i] = {Outcome::Violated, "", std::string("error: ") + e.what()};
    }
  };
  if (ex == Execution::Serial) {
    for (std::size_t i = 0; i < trials; ++i) one(i);
  } else {
    const long n = static_cast<long>(trials);
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) one(static_cast<std::size_t>(i));
  }
  return out;
}

void merge(PropertyCounts& c, std::vector<Violation>& vs, const std::vector<TrialResult>& rs,
           std::size_t offset, const std::string& prefix) {
  for (std::size_t i = 0; i < rs.size(); ++i) {
    ++c.trials;
    switch (rs[i].outcome) {
      case Outcome::Checked:
        ++c.checked;
        break;
      case Outcome::Skipped:
        ++c.skipped;
        break;
      case Outcome::Inconclusive:
        ++c.inconclusive;
        break;
      case Outcome::Violated:
        ++c.violations;
        vs.push_back({offset + i, rs[i].formula, prefix + rs[i].detail});
        break;
    }
  }
}

std::string team_text(const ProbabilisticTeam& t) { return team_to_json(t).dump(); }

Structure random_structure(Rng& rng, bool binary_only = false) {
  Structure s;
  s.universe = {"0", "1"};
  if (!binary_only && std::uniform_int_distribution<int>(0, 1)(rng)) s.universe.push_back("2");
  s.constants["zero"] = "0";
  return s;
}

std::vector<Variable> domain_for(const Formula& f) {
  auto fv = free_vars(f);
  if (fv.empty()) return {"x"};
  return {fv.begin(), fv.end()};
}

// Random formula over x, y, z with every atom kind.
Formula any_formula(Rng& rng, std::size_t depth) {
  FormulaGenOptions go;
  go.vars = {"x", "y", "z"};
  go.kinds = kGenEquality | kGenIdentity | kGenEquiv | kGenIndep | kGenCondIndep | kGenDep | kGenConst |
             kGenAnd | kGenOr | kGenExists | kGenForall;
  go.max_depth = depth;
  go.max_tuple = 2;
  return random_formula(go, rng);
}

Verdict::Value decide(const Structure& s, const ProbabilisticTeam& t, const Formula& f,
                      const CheckOptions& o) {
  return check(s, t, f, Strategy::Auto, o).value;
}

Rational random_fraction(Rng& rng) {
  int d = std::uniform_int_distribution<int>(2, 12)(rng);
  int k = std::uniform_int_distribution<int>(1, d - 1)(rng);
  return make_rational(k, d);
}

PropertyReport finish(const std::string& suite, const HarnessOptions& opts,
                      const std::vector<TrialResult>& rs) {
  PropertyReport r;
  r.suite = suite;
  r.seed = opts.seed;
  r.totals.name = suite;
  merge(r.totals, r.violations, rs, 0, "");
  return r;
}

}  // namespace

PropertyReport check_union_closure(const HarnessOptions& opts) {
  auto rs = run_trials(opts.trials, opts.seed, opts.execution, [&](std::size_t, Rng& rng) {
    Structure s = random_structure(rng);
    Formula f = opts.formula;
    if (!f) {
      FormulaGenOptions go;
      go.vars = {"x", "y"};
      go.kinds = kGenEquality | kGenIdentity | kGenAnd | kGenOr | kGenExists | kGenForall;
      go.max_depth = 3;
      f = random_formula(go, rng);
    }
    auto dom = domain_for(f);
    ProbabilisticTeam x = random_team(s.universe, dom, 4, rng), y = random_team(s.universe, dom, 4, rng);
    Rational k = random_fraction(rng);
    TrialResult out{Outcome::Skipped, print(f), ""};
    auto vx = decide(s, x, f, opts.check), vy = decide(s, y, f, opts.check);
    if (vx == Verdict::Value::Unknown || vy == Verdict::Value::Unknown) {
      out.outcome = Outcome::Inconclusive;
      return out;
    }
    if (vx != Verdict::Value::True || vy != Verdict::Value::True) return out;
    auto vu = decide(s, scaled_union(x, y, k), f, opts.check);
    if (vu == Verdict::Value::Unknown) {
      out.outcome = Outcome::Inconclusive;
    } else if (vu == Verdict::Value::True) {
      out.outcome = Outcome::Checked;
    } else {
      out.outcome = Outcome::Violated;
      out.detail = "X=" + team_text(x) + " Y=" + team_text(y) + " k=" + to_string(k);
    }
    return out;
  });
  return finish("union-closure", opts, rs);
}

PropertyReport check_locality(const HarnessOptions& opts) {
  auto rs = run_trials(opts.trials, opts.seed, opts.execution, [&](std::size_t, Rng& rng) {
    Structure s = random_structure(rng);
    Formula f = opts.formula ? opts.formula : any_formula(rng, 2);
    auto fv = free_vars(f);
    std::vector<Variable> dom(fv.begin(), fv.end());
    for (const char* pad : {"u", "v"}) dom.push_back(pad);
    std::sort(dom.begin(), dom.end());
    ProbabilisticTeam team = random_team(s.universe, dom, 4, rng);
    std::vector<Variable> keep;
    for (const auto& v : dom)
      if (fv.count(v) || std::uniform_int_distribution<int>(0, 1)(rng)) keep.push_back(v);
    ProbabilisticTeam small = restrict(team, keep);
    TrialResult out{Outcome::Checked, print(f), ""};
    auto a = decide(s, team, f, opts.check), b = decide(s, small, f, opts.check);
    if (a == Verdict::Value::Unknown || b == Verdict::Value::Unknown)
      out.outcome = Outcome::Inconclusive;
    else if (a != b) {
      out.outcome = Outcome::Violated;
      out.detail = "team=" + team_text(team) + " verdict " + to_string(a) + ", restricted " +
                   team_text(small) + " verdict " + to_string(b);
    }
    return out;
  });
  return finish("locality", opts, rs);
}

PropertyReport check_scaling(const HarnessOptions& opts) {
  auto rs = run_trials(opts.trials, opts.seed, opts.execution, [&](std::size_t, Rng& rng) {
    Structure s = random_structure(rng);
    Formula f = opts.formula ? opts.formula : any_formula(rng, 2);
    ProbabilisticTeam team = random_team(s.universe, domain_for(f), 4, rng);
    TrialResult out{Outcome::Checked, print(f), ""};
    if (is_zero(team.total_weight())) {
      out.outcome = Outcome::Skipped;
      out.detail = "degenerate team";
      return out;
    }
    Rational factor = random_fraction(rng) * std::uniform_int_distribution<int>(1, 5)(rng);
    auto a = decide(s, team, f, opts.check);
    auto b = decide(s, normalize(team), f, opts.check);
    auto c = decide(s, scale(team, factor), f, opts.check);
    if (a == Verdict::Value::Unknown || b == Verdict::Value::Unknown || c == Verdict::Value::Unknown)
      out.outcome = Outcome::Inconclusive;
    else if (a != b || a != c) {
      out.outcome = Outcome::Violated;
      out.detail = "team=" + team_text(team) + " verdicts " + to_string(a) + " / normalized " +
                   to_string(b) + " / scaled by " + to_string(factor) + " " + to_string(c);
    }
    return out;
  });
  return finish("scaling", opts, rs);
}

namespace {

// A random source atom for the pass and its rewrite.
std::pair<Formula, Formula> pass_instance(RewritePass p, const Structure& s,
                                          const std::vector<Variable>& vars, Rng& rng) {
  auto pick_tuple = [&](std::size_t lo, std::size_t hi) {
    std::size_t n = std::uniform_int_distribution<std::size_t>(lo, std::min(hi, vars.size()))(rng);
    std::vector<Variable> v = vars;
    std::shuffle(v.begin(), v.end(), rng);
    v.resize(n);
    return v;
  };
  Formula f;
  switch (p) {
    case RewritePass::DepToCi:
    case RewritePass::DepToEquiv:
      f = f_dep(pick_tuple(0, 2), pick_tuple(1, 2));
      if (f->x.empty() && std::uniform_int_distribution<int>(0, 1)(rng)) f = f_const(f->y);
      break;
    case RewritePass::EquivToIdentityDep:
      f = f_me(pick_tuple(1, 2), pick_tuple(1, 2));
      break;
    case RewritePass::IdentityToEquiv: {
      auto x = pick_tuple(1, 2);
      auto y = vars;
      std::shuffle(y.begin(), y.end(), rng);
      y.resize(x.size());
      f = f_mi(x, y);
      break;
    }
    case RewritePass::IdentityToMargIndep:
      f = f_mi(pick_tuple(1, 1), pick_tuple(1, 1));
      break;
    case RewritePass::CiToMargIndep: {
      auto v = vars;
      std::shuffle(v.begin(), v.end(), rng);
      f = f_ci({}, {v[0]}, {v[1]});
      break;
    }
  }
  FreshNameSource fresh(f);
  switch (p) {
    case RewritePass::DepToCi:
      return {f, dep_to_ci(f)};
    case RewritePass::DepToEquiv:
      return {f, dep_to_equiv(f, fresh)};
    case RewritePass::EquivToIdentityDep:
      return {f, equiv_to_identity_dep(f, fresh)};
    case RewritePass::IdentityToEquiv:
      return {f, identity_to_equiv(f, fresh)};
    case RewritePass::IdentityToMargIndep:
      return {f, lower(identity_to_marg_indep(f, fresh), TargetLogic::Independence, s, fresh)};
    case RewritePass::CiToMargIndep:
      return {f, ci_to_marg_indep(f, s, fresh)};
  }
  return {f, f};
}

}  // namespace

PropertyReport check_rewrite_soundness(const HarnessOptions& opts) {
  PropertyReport r;
  r.suite = "rewrite-soundness";
  r.seed = opts.seed;
  r.totals.name = r.suite;
  const auto& passes = opts.passes.empty() ? all_rewrite_passes() : opts.passes;
  std::size_t offset = 0;
  for (RewritePass p : passes) {
    auto rs = run_trials(opts.trials, splitmix(opts.seed + static_cast<std::uint64_t>(p)), opts.execution,
                         [&](std::size_t, Rng& rng) {
      // The independence encoding of ci is checked on binary structures
      // with an empty condition and single-variable tuples. One conditioning
      // variable already costs about a minute per instance.
      bool binary = p == RewritePass::CiToMargIndep;
      Structure s = random_structure(rng, binary);
      std::size_t nvars = binary ? 2 : std::uniform_int_distribution<std::size_t>(1, 3)(rng);
      std::vector<Variable> vars{"x", "y", "z"};
      vars.resize(nvars);
      ProbabilisticTeam team = random_team(s.universe, vars, 4, rng);
      auto [f, g] = pass_instance(p, s, vars, rng);
      TrialResult out{Outcome::Checked, print(f), ""};
      auto a = decide(s, team, f, opts.check), b = decide(s, team, g, opts.check);
      if (a == Verdict::Value::Unknown || b == Verdict::Value::Unknown)
        out.outcome = Outcome::Inconclusive;
      else if (a != b) {
        out.outcome = Outcome::Violated;
        out.detail = "team=" + team_text(team) + " universe size " + std::to_string(s.universe.size()) +
                     ": source " + to_string(a) + ", rewrite " + to_string(b);
      }
      return out;
    });
    PropertyCounts c;
    c.name = to_string(p);
    merge(c, r.violations, rs, offset, to_string(p) + ": ");
    offset += rs.size();
    r.totals.trials += c.trials;
    r.totals.checked += c.checked;
    r.totals.skipped += c.skipped;
    r.totals.inconclusive += c.inconclusive;
    r.totals.violations += c.violations;
    r.parts.push_back(std::move(c));
  }
  return r;
}

PropertyReport run_suite(const std::string& suite, const HarnessOptions& opts) {
  if (suite == "union-closure") return check_union_closure(opts);
  if (suite == "locality") return check_locality(opts);
  if (suite == "scaling") return check_scaling(opts);
  if (suite == "rewrite-soundness") return check_rewrite_soundness(opts);
  throw ConfigError("unknown suite '" + suite +
                    "' (expected union-closure, locality, scaling or rewrite-soundness)");
}

namespace {

std::string counts_line(const PropertyCounts& c) {
  return "trials " + std::to_string(c.trials) + ", checked " + std::to_string(c.checked) + ", skipped " +
         std::to_string(c.skipped) + ", inconclusive " + std::to_string(c.inconclusive) + ", violations " +
         std::to_string(c.violations);
}

nlohmann::json counts_json(const PropertyCounts& c) {
  return {{"name", c.name},       {"trials", c.trials},           {"checked", c.checked},
          {"skipped", c.skipped}, {"inconclusive", c.inconclusive}, {"violations", c.violations}};
}

}  // namespace

std::string format_report(const PropertyReport& r) {
  std::string s = "suite " + r.suite + " (seed " + std::to_string(r.seed) + ")\n";
  s += "  " + counts_line(r.totals) + "\n";
  for (const auto& p : r.parts) s += "  " + p.name + ": " + counts_line(p) + "\n";
  for (const auto& v : r.violations)
    s += "  violation at trial " + std::to_string(v.trial) + ": " + v.formula + "\n    " + v.detail + "\n";
  return s;
}

nlohmann::json report_to_json(const PropertyReport& r) {
  nlohmann::json j;
  j["schema"] = 1;
  j["suite"] = r.suite;
  j["seed"] = r.seed;
  j["totals"] = counts_json(r.totals);
  j["parts"] = nlohmann::json::array();
  for (const auto& p : r.parts) j["parts"].push_back(counts_json(p));
  j["violations"] = nlohmann::json::array();
  for (const auto& v : r.violations)
    j["violations"].push_back({{"trial", v.trial}, {"formula", v.formula}, {"detail", v.detail}});
  j["ok"] = r.ok();
  return j;
}

}  // namespace pts
