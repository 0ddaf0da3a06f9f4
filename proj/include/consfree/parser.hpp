#pragma once

#include <string>

#include "consfree/ast.hpp"
#include "consfree/errors.hpp"
#include "consfree/value.hpp"

namespace consfree {

// Parses a .cf program. Throws ParseError on malformed input, duplicate
// declarations, unknown identifiers, non-linear patterns, or when no main
// function is declared.
Program parse_program(const std::string& text);

// "10" -> true :: false :: nil.
Value parse_input_bits(const std::string& bits);

}  // namespace consfree
