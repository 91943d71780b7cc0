#include "pts/team.hpp"

#include <algorithm>

#include "pts/errors.hpp"

namespace pts {

namespace {

void check_tokens(const Tuple& values, std::size_t arity) {
  if (values.size() != arity)
    throw InputError("row has " + std::to_string(values.size()) + " values, domain has " +
                     std::to_string(arity));
  for (const auto& v : values)
    if (v.empty()) throw InputError("empty value token");
}

void check_domain(const std::vector<Variable>& domain) {
  std::set<Variable> seen;
  for (const auto& v : domain) {
    if (v.empty()) throw InputError("empty variable name");
    if (!seen.insert(v).second) throw InputError("variable '" + v + "' repeated in domain");
  }
}

Tuple project(const Tuple& values, const std::vector<std::size_t>& idx) {
  Tuple out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(values[i]);
  return out;
}

}  // namespace

ProbabilisticTeam::ProbabilisticTeam(std::vector<Variable> domain, std::vector<Row> rows)
    : domain_(std::move(domain)), rows_(std::move(rows)) {
  check_domain(domain_);
  for (const auto& r : rows_) {
    check_tokens(r.values, domain_.size());
    if (sgn(r.weight) < 0) throw InputError("negative weight " + to_string(r.weight));
  }
  std::sort(rows_.begin(), rows_.end(),
            [](const Row& a, const Row& b) { return a.values < b.values; });
  for (std::size_t i = 1; i < rows_.size(); ++i)
    if (rows_[i].values == rows_[i - 1].values)
      throw InputError("duplicate assignment in team");
}

ProbabilisticTeam ProbabilisticTeam::accumulate(std::vector<Variable> domain,
                                                std::vector<Row> rows) {
  std::map<Tuple, Rational> merged;
  for (auto& r : rows) {
    check_tokens(r.values, domain.size());
    merged[std::move(r.values)] += r.weight;
  }
  std::vector<Row> out;
  out.reserve(merged.size());
  for (auto& [vals, w] : merged) out.push_back({vals, w});
  return ProbabilisticTeam(std::move(domain), std::move(out));
}

bool ProbabilisticTeam::has_variable(const Variable& v) const {
  return std::find(domain_.begin(), domain_.end(), v) != domain_.end();
}

std::size_t ProbabilisticTeam::index_of(const Variable& v) const {
  auto it = std::find(domain_.begin(), domain_.end(), v);
  if (it == domain_.end()) throw DomainError("unknown variable '" + v + "'");
  return static_cast<std::size_t>(it - domain_.begin());
}

std::vector<std::size_t> ProbabilisticTeam::indices_of(const std::vector<Variable>& vars) const {
  std::vector<std::size_t> out;
  out.reserve(vars.size());
  for (const auto& v : vars) out.push_back(index_of(v));
  return out;
}

Rational ProbabilisticTeam::total_weight() const {
  Rational sum = 0;
  for (const auto& r : rows_) sum += r.weight;
  return sum;
}

bool ProbabilisticTeam::normalized() const { return rows_.empty() || total_weight() == 1; }

Rational ProbabilisticTeam::weight_of(const Tuple& values) const {
  auto it = std::lower_bound(rows_.begin(), rows_.end(), values,
                             [](const Row& r, const Tuple& v) { return r.values < v; });
  if (it != rows_.end() && it->values == values) return it->weight;
  return 0;
}

ProbabilisticTeam ProbabilisticTeam::compact() const {
  std::vector<Row> kept;
  for (const auto& r : rows_)
    if (sgn(r.weight) > 0) kept.push_back(r);
  return ProbabilisticTeam(domain_, std::move(kept));
}

Structure Structure::binary() {
  Structure s;
  s.universe = {"0", "1"};
  s.relations["P"] = Relation{1, {{"1"}}};
  return s;
}

Structure Structure::from_team(const ProbabilisticTeam& team) {
  std::set<Value> vals;
  for (const auto& r : team.rows())
    for (const auto& v : r.values) vals.insert(v);
  Structure s;
  s.universe.assign(vals.begin(), vals.end());
  return s;
}

bool Structure::has_value(const Value& v) const {
  return std::find(universe.begin(), universe.end(), v) != universe.end();
}

void Structure::validate() const {
  if (universe.empty()) throw InputError("structure universe is empty");
  std::set<Value> seen;
  for (const auto& v : universe) {
    if (v.empty()) throw InputError("empty value token in universe");
    if (!seen.insert(v).second) throw InputError("value '" + v + "' repeated in universe");
  }
  for (const auto& [name, rel] : relations)
    for (const auto& t : rel.tuples) {
      if (t.size() != rel.arity)
        throw InputError("relation '" + name + "' has tuples of differing arity");
      for (const auto& v : t)
        if (!seen.count(v)) throw InputError("relation '" + name + "' uses value '" + v +
                                             "' outside the universe");
    }
  for (const auto& [name, v] : constants)
    if (!seen.count(v))
      throw InputError("constant '" + name + "' denotes '" + v + "' outside the universe");
}

Rational marginal_weight(const ProbabilisticTeam& team, const std::vector<Variable>& vars,
                         const Tuple& vals) {
  auto idx = team.indices_of(vars);
  if (vals.size() != vars.size()) throw InputError("marginal_weight: arity mismatch");
  Rational sum = 0;
  for (const auto& r : team.rows())
    if (project(r.values, idx) == vals) sum += r.weight;
  return sum;
}

ProbabilisticTeam restrict(const ProbabilisticTeam& team, const std::vector<Variable>& keep) {
  std::set<Variable> wanted(keep.begin(), keep.end());
  for (const auto& v : wanted) team.index_of(v);
  std::vector<Variable> dom;
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < team.domain().size(); ++i)
    if (wanted.count(team.domain()[i])) {
      dom.push_back(team.domain()[i]);
      idx.push_back(i);
    }
  std::vector<Row> rows;
  rows.reserve(team.rows().size());
  for (const auto& r : team.rows()) rows.push_back({project(r.values, idx), r.weight});
  return ProbabilisticTeam::accumulate(std::move(dom), std::move(rows));
}

ProbabilisticTeam scaled_union(const ProbabilisticTeam& y, const ProbabilisticTeam& z,
                               const Rational& k) {
  if (y.domain() != z.domain()) throw InputError("scaled_union: domains differ");
  if (sgn(k) < 0 || k > 1) throw InputError("scaled_union: k outside [0,1]");
  std::vector<Row> rows;
  for (const auto& r : y.rows()) rows.push_back({r.values, k * r.weight});
  Rational rest = 1 - k;
  for (const auto& r : z.rows()) rows.push_back({r.values, rest * r.weight});
  return ProbabilisticTeam::accumulate(y.domain(), std::move(rows));
}

ProbabilisticTeam plain_union(const ProbabilisticTeam& y, const ProbabilisticTeam& z) {
  if (y.domain() != z.domain()) throw InputError("plain_union: domains differ");
  std::vector<Row> rows = y.rows();
  rows.insert(rows.end(), z.rows().begin(), z.rows().end());
  return ProbabilisticTeam::accumulate(y.domain(), std::move(rows));
}

namespace {

// Domain of X[.../x] and the slot x occupies in it.
std::pair<std::vector<Variable>, std::size_t> widen(const ProbabilisticTeam& team,
                                                    const Variable& x) {
  std::vector<Variable> dom = team.domain();
  auto it = std::find(dom.begin(), dom.end(), x);
  if (it != dom.end()) return {dom, static_cast<std::size_t>(it - dom.begin())};
  dom.push_back(x);
  return {dom, dom.size() - 1};
}

Tuple with_value(const Tuple& values, std::size_t slot, std::size_t width, const Value& a) {
  Tuple out = values;
  if (out.size() < width) out.resize(width);
  out[slot] = a;
  return out;
}

}  // namespace

ProbabilisticTeam duplicate(const ProbabilisticTeam& team, const std::vector<Value>& universe,
                            const Variable& x) {
  if (universe.empty()) throw InputError("duplicate: empty universe");
  auto [dom, slot] = widen(team, x);
  Rational share(1, universe.size());
  std::vector<Row> rows;
  rows.reserve(team.rows().size() * universe.size());
  for (const auto& r : team.rows())
    for (const auto& a : universe)
      rows.push_back({with_value(r.values, slot, dom.size(), a), r.weight * share});
  return ProbabilisticTeam::accumulate(dom, std::move(rows));
}

ProbabilisticTeam extend(const ProbabilisticTeam& team, const ExtensionChoice& choice,
                         const Variable& x) {
  auto [dom, slot] = widen(team, x);
  std::vector<Row> rows;
  for (const auto& r : team.rows()) {
    auto it = choice.find(r.values);
    if (it == choice.end()) throw InputError("extend: no distribution for a row");
    Rational mass = 0;
    for (const auto& [a, p] : it->second) {
      if (sgn(p) < 0) throw InputError("extend: negative probability");
      mass += p;
      rows.push_back({with_value(r.values, slot, dom.size(), a), r.weight * p});
    }
    if (mass != 1) throw InputError("extend: local distribution does not sum to 1");
  }
  return ProbabilisticTeam::accumulate(dom, std::move(rows));
}

ProbabilisticTeam scale(const ProbabilisticTeam& team, const Rational& factor) {
  if (sgn(factor) < 0) throw InputError("scale: negative factor");
  std::vector<Row> rows = team.rows();
  for (auto& r : rows) r.weight *= factor;
  return ProbabilisticTeam(team.domain(), std::move(rows));
}

ProbabilisticTeam normalize(const ProbabilisticTeam& team) {
  Rational total = team.total_weight();
  if (is_zero(total)) throw DegenerateTeamError("normalize: total weight is zero");
  return scale(team, 1 / total);
}

std::vector<Tuple> support(const ProbabilisticTeam& team) {
  std::vector<Tuple> out;
  for (const auto& r : team.rows())
    if (sgn(r.weight) > 0) out.push_back(r.values);
  return out;
}

std::map<Tuple, Rational> marginal(const ProbabilisticTeam& team,
                                   const std::vector<Variable>& vars) {
  auto idx = team.indices_of(vars);
  std::map<Tuple, Rational> out;
  for (const auto& r : team.rows())
    if (sgn(r.weight) > 0) out[project(r.values, idx)] += r.weight;
  return out;
}

}  // namespace pts
