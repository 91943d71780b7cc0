#pragma once

#include <string>

#include "pts/arith.hpp"

namespace pts {

// SMT-LIB 2 script for a closed sentence. The outermost existential block is
// declared with declare-const (in variable-id order); anything else is
// asserted with explicit quantifiers. LRA when multiplication-free, else NRA.
std::string emit_smtlib(const ArithSentence& s, bool get_model = false);

// Symbol as written in scripts: the name itself, or |name| when it has
// characters outside the simple-symbol set.
std::string smt_symbol(const std::string& name);

}  // namespace pts
