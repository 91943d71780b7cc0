#pragma once

#include <string>

#include "json.hpp"
#include "pts/team.hpp"

namespace pts {

ProbabilisticTeam team_from_json(const nlohmann::json& j);
nlohmann::json team_to_json(const ProbabilisticTeam& team);

Structure structure_from_json(const nlohmann::json& j);
nlohmann::json structure_to_json(const Structure& s);

// Throws InputError when the file cannot be read or parsed.
nlohmann::json read_json_file(const std::string& path);
std::string read_text_file(const std::string& path);

}  // namespace pts
