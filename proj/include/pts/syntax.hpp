#pragma once

#include <string>
#include <string_view>

#include "pts/formula.hpp"

namespace pts {

struct ParseOptions {
  Mode mode = Mode::FO;
  // Accept '$'-prefixed names (only produced by rewrite passes).
  bool allow_reserved = false;
};

// Throws SyntaxError (positioned) on malformed input.
Formula parse(std::string_view text, const ParseOptions& opts);
inline Formula parse(std::string_view text, Mode mode = Mode::FO) {
  return parse(text, ParseOptions{mode, false});
}

std::string print(const Formula& f);

}  // namespace pts
