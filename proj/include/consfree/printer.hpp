#pragma once

#include <string>

#include "consfree/ast.hpp"

namespace consfree {

// Deterministic .cf rendering; parse_program(pretty_print(p)) is
// structurally equal to p.
std::string pretty_print(const Program& p);

std::string show_expr(const ExprPtr& e);
std::string show_pattern(const PatternPtr& p);
std::string show_clause(const Clause& c);

}  // namespace consfree
