#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "consfree/ast.hpp"
#include "consfree/value.hpp"

namespace consfree {

// Semantic values: the finite interpretation of each type over the data
// universe B. Arrow-typed values are finite input-output graphs; a graph is
// either an explicit tuple set, or a lazy graph (a defined function with a
// fixed argument prefix) whose tuples are queried on demand. Lazy graphs
// behave like the maximal explicit graph of the same closure; membership
// confirmation is monotone, so the two readings agree on base-level results.
struct GraphTuple;

struct SemValue {
  enum class Kind { Base, Pair, Graph };
  Kind kind = Kind::Base;
  Value base;                   // Base
  std::vector<SemValue> parts;  // Pair: {l, r}; lazy Graph: argument prefix
  std::string fn;               // lazy Graph: defined function name
  std::shared_ptr<const std::vector<GraphTuple>> tuples;  // explicit Graph

  bool is_lazy_graph() const {
    return kind == Kind::Graph && tuples == nullptr;
  }
  bool operator<(const SemValue& o) const;
  bool operator==(const SemValue& o) const;
};

struct GraphTuple {
  std::vector<SemValue> args;
  SemValue result;
  bool operator<(const GraphTuple& o) const;
  bool operator==(const GraphTuple& o) const;
};

SemValue sem_base(Value data);
// Canonicalizes: a pair of two Base values is a Base pair value.
SemValue sem_pair(SemValue l, SemValue r);
SemValue sem_graph(std::vector<GraphTuple> tuples);  // sorted, deduplicated
SemValue sem_closure(std::string fn, std::vector<SemValue> prefix);
std::string show_sem(const SemValue& v);

// The interpretation of a type over B: Base values for sorts, componentwise
// pairs for products, and for arrows every explicit graph over the tuple
// space (arguments and result drawn from the component interpretations).
// Throws UniverseTooLarge when the set would exceed max_size elements.
std::vector<SemValue> semantic_universe(const Program& p,
                                        const std::vector<Value>& inputs,
                                        const TypePtr& t,
                                        uint64_t max_size = 1ull << 12);
// |interpretation of t|, saturating at UINT64_MAX.
uint64_t semantic_universe_size(const Program& p,
                                const std::vector<Value>& inputs,
                                const TypePtr& t);

struct SaturateStats {
  uint64_t statements = 0;  // call/body judgements touched
  uint64_t iterations = 0;  // fixpoint rounds
  uint64_t T = 0;
  uint64_t N = 0;
  std::map<std::string, uint64_t> pool_sizes;  // arrow type -> pool size
};

// All result values of main on the given inputs, computed by monotone
// saturation of call and body judgements instead of evaluation.
// Preconditions: terminating pragma, well typed, cons-free, order-1
// immutable; the program is normalized internally (application pushdown and
// functional-variable-clause elimination) and the result must have all
// argument types of order <= 1. Violations raise PreconditionViolation.
std::set<Value> saturate(const Program& p, const std::vector<Value>& inputs,
                         SaturateStats* stats = nullptr);

// T = largest order-0 interpretation among argument types of defined
// symbols; N = (number of functions) * T^(2*maxArity*maxDepth + 1) with
// maxDepth the deepest clause body after pushdown, saturating at UINT64_MAX.
std::pair<uint64_t, uint64_t> compute_T_N(const Program& p,
                                          const std::vector<Value>& inputs);

// The polynomially-restricted variant: arrow-typed values are drawn from a
// generated pool per arrow type (seeded: N random graphs per trial, tuples
// kept with probability 1/2; exhaustive: the full graph universe, capped),
// and a pooled graph is usable only once every tuple in it is backed by a
// confirmed call. Seeded mode returns the union over trials.
struct NpMode {
  enum class Kind { Seeded, Exhaustive };
  Kind kind = Kind::Exhaustive;
  uint64_t seed = 0;
  uint64_t trials = 1;
  uint64_t cap = 1ull << 12;  // exhaustive universe / pool size cap

  static NpMode seeded(uint64_t seed, uint64_t trials) {
    return {Kind::Seeded, seed, trials, 1ull << 12};
  }
  static NpMode exhaustive(uint64_t cap = 1ull << 12) {
    return {Kind::Exhaustive, 0, 1, cap};
  }
};

std::set<Value> np_saturate(const Program& p, const std::vector<Value>& inputs,
                            const NpMode& mode,
                            SaturateStats* stats = nullptr);

}  // namespace consfree
