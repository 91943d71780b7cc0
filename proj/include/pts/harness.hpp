#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pts/checker.hpp"
#include "pts/formula.hpp"

namespace pts {

enum class Execution { Serial, Parallel };

enum class RewritePass {
  DepToCi,
  DepToEquiv,
  EquivToIdentityDep,
  IdentityToEquiv,
  IdentityToMargIndep,
  CiToMargIndep,
};

std::string to_string(RewritePass p);
const std::vector<RewritePass>& all_rewrite_passes();

struct Violation {
  std::size_t trial = 0;
  std::string formula;
  std::string detail;
};

struct PropertyCounts {
  std::string name;
  std::size_t trials = 0;
  std::size_t checked = 0;       // premises held and both sides were decided
  std::size_t skipped = 0;       // premise failed or degenerate team
  std::size_t inconclusive = 0;  // some verdict was Unknown
  std::size_t violations = 0;
};

struct PropertyReport {
  std::string suite;
  std::uint64_t seed = 0;
  PropertyCounts totals;
  // Per rewrite pass for the rewrite-soundness suite, otherwise empty.
  std::vector<PropertyCounts> parts;
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
};

struct HarnessOptions {
  std::size_t trials = 500;
  std::uint64_t seed = 1;
  Execution execution = Execution::Parallel;
  CheckOptions check;
  // Fixed formula instead of random ones (union closure, locality, scaling).
  Formula formula;
  // Rewrite soundness: passes to run, all when empty; trials is per pass.
  std::vector<RewritePass> passes;
};

// Whenever f holds on X and on Y, it holds on the k-scaled union of X and Y.
PropertyReport check_union_closure(const HarnessOptions& opts);
// Verdicts do not change when variables outside Fr(f) are projected away.
PropertyReport check_locality(const HarnessOptions& opts);
// Verdicts do not change under normalization or positive rescaling.
PropertyReport check_scaling(const HarnessOptions& opts);
// Each pass preserves verdicts on random structures, teams and atoms.
PropertyReport check_rewrite_soundness(const HarnessOptions& opts);

// Suites: "union-closure", "locality", "scaling", "rewrite-soundness".
// ConfigError for other names.
PropertyReport run_suite(const std::string& suite, const HarnessOptions& opts);

std::string format_report(const PropertyReport& r);
nlohmann::json report_to_json(const PropertyReport& r);

}  // namespace pts
