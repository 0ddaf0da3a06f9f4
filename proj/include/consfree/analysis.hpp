#pragma once

#include <string>
#include <vector>

#include "consfree/ast.hpp"

namespace consfree {

struct TypeError {
  size_t clause;  // index into Program::clauses; SIZE_MAX for global errors
  std::string path;
  std::string message;
};

struct AnalysisReport {
  struct Violation {
    size_t clause;
    std::string path;
    std::string reason;
  };
  std::vector<Violation> violations;
  bool pass() const { return violations.empty(); }
  std::string render() const;
};

// Annotates every expression, pattern and clause environment with its type.
// Returns the list of errors; an empty list means the program is well typed.
std::vector<TypeError> typecheck(Program& p);

// Maximum type order over all argument positions of declared functions.
// Requires a typed program.
int data_order(const Program& p);

// Constructor-headed body subexpressions must be closed data or occur
// inside a pattern of the same clause.
AnalysisReport check_cons_free(const Program& p);

// Per clause: at most one body variable of type order >= n, and if present,
// no other body subexpression of type order >= n (occurrences of the
// variable itself are fine). Requires a typed program.
AnalysisReport check_immutability(const Program& p, int n);

}  // namespace consfree
