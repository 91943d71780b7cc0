#include "pts/team_io.hpp"

#include <fstream>
#include <sstream>

#include "pts/errors.hpp"

namespace pts {

using nlohmann::json;

namespace {

std::string token(const json& v, const char* what) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw InputError(std::string(what) + " must be a string or integer");
}

Rational weight(const json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long>());
  // Binary floats are rejected: their decimal rendering is not what the user wrote.
  throw InputError("weight must be a \"p/q\" or decimal string");
}

}  // namespace

ProbabilisticTeam team_from_json(const json& j) {
  if (!j.is_object() || !j.contains("vars") || !j.contains("rows"))
    throw InputError("team JSON needs \"vars\" and \"rows\"");
  std::vector<Variable> vars;
  for (const auto& v : j.at("vars")) vars.push_back(token(v, "variable"));
  std::vector<Row> rows;
  for (const auto& r : j.at("rows")) {
    if (!r.contains("values") || !r.contains("weight"))
      throw InputError("team row needs \"values\" and \"weight\"");
    Row row;
    for (const auto& v : r.at("values")) row.values.push_back(token(v, "value"));
    row.weight = weight(r.at("weight"));
    rows.push_back(std::move(row));
  }
  return ProbabilisticTeam(std::move(vars), std::move(rows));
}

json team_to_json(const ProbabilisticTeam& team) {
  json rows = json::array();
  for (const auto& r : team.rows())
    rows.push_back({{"values", r.values}, {"weight", to_string(r.weight)}});
  return {{"vars", team.domain()}, {"rows", rows}};
}

Structure structure_from_json(const json& j) {
  if (!j.is_object() || !j.contains("universe"))
    throw InputError("structure JSON needs \"universe\"");
  Structure s;
  for (const auto& v : j.at("universe")) s.universe.push_back(token(v, "universe element"));
  if (j.contains("relations")) {
    for (const auto& [name, tuples] : j.at("relations").items()) {
      Relation rel;
      bool first = true;
      for (const auto& t : tuples) {
        Tuple tup;
        for (const auto& v : t) tup.push_back(token(v, "relation value"));
        if (first) rel.arity = tup.size();
        first = false;
        if (tup.size() != rel.arity)
          throw InputError("relation '" + name + "' has tuples of differing arity");
        rel.tuples.insert(std::move(tup));
      }
      if (j.contains("arities") && j.at("arities").contains(name))
        rel.arity = j.at("arities").at(name).get<std::size_t>();
      s.relations[name] = std::move(rel);
    }
  }
  if (j.contains("constants"))
    for (const auto& [name, v] : j.at("constants").items()) s.constants[name] = token(v, "constant");
  s.validate();
  return s;
}

json structure_to_json(const Structure& s) {
  json rels = json::object();
  for (const auto& [name, rel] : s.relations) {
    json ts = json::array();
    for (const auto& t : rel.tuples) ts.push_back(t);
    rels[name] = ts;
  }
  json consts = json::object();
  for (const auto& [name, v] : s.constants) consts[name] = v;
  return {{"universe", s.universe}, {"relations", rels}, {"constants", consts}};
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json_file(const std::string& path) {
  try {
    return json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw InputError("'" + path + "': " + e.what());
  }
}

}  // namespace pts
