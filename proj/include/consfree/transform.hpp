#pragma once

#include <string>
#include <vector>

#include "consfree/analysis.hpp"
#include "consfree/ast.hpp"

namespace consfree {

struct TransformTrace {
  Program before;
  Program after;
  struct Rewrite {
    size_t clause;
    std::string path;
    std::string rule;
  };
  std::vector<Rewrite> rewrites;
  bool failed = false;       // eliminate_fvar_clauses only
  std::string failure;       // InliningFailure diagnostic
};

// Pushes applied if/choose heads into their branches and flattens nested
// applications, to fixpoint. The result has no if/choose in applied head
// position.
TransformTrace compose_pushdown(const Program& p);

// Removes clauses "f l1 ... lk = x" with x of functional type by statically
// dispatching call sites. On failure the program is returned unchanged with
// failed = true.
TransformTrace eliminate_fvar_clauses(const Program& p);

// All argument types of defined symbols and all clause expressions have
// type order <= 1, and no clause body is a bare functional variable.
// Requires a typed program.
AnalysisReport verify_order_collapsed(const Program& p);

// Internal helper shared with the saturation engine: s composed with extra
// argument expressions per the pushdown rules.
ExprPtr compose_apply(const ExprPtr& s, const std::vector<ExprPtr>& extra);

}  // namespace consfree
