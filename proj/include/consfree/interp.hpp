#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "consfree/ast.hpp"
#include "consfree/value.hpp"

namespace consfree {

using Substitution = std::map<std::string, Value>;

// First-match helper: the unique binding making the patterns equal to the
// argument values, or nullopt.
std::optional<Substitution> match_clause(const std::vector<PatternPtr>& pats,
                                         const std::vector<Value>& args);

enum class EvalStatus { Ok, FuelExhausted, Stuck };

struct EvalResult {
  EvalStatus status;
  Value value;          // valid when status == Ok
  std::string message;  // diagnostic when status == Stuck
};

struct EvalOutcome {
  std::set<Value> results;
  bool exhausted = true;  // every nondeterministic branch finished in fuel
  std::vector<std::string> stuck;  // diagnostics from stuck branches
};

struct EvalOptions {
  uint64_t fuel = 1'000'000;
  // Memoize deterministic (choose-free) calls; only honored when the
  // program carries the terminating pragma and no observer is installed.
  bool memoize = true;
  // Instrumentation hook: sees every data value produced or consumed
  // during evaluation.
  std::function<void(const Value&)> data_observer;
};

// Deterministic run: the choice stream dictates each choose branch
// (branch 0 once the stream is exhausted). Fuel counts clause firings.
EvalResult evaluate_one(const Program& p, const std::vector<Value>& inputs,
                        const std::vector<int>& choices, uint64_t fuel,
                        const EvalOptions& opts = {});

// Systematic depth-first exploration of every choice stream.
EvalOutcome enumerate_results(const Program& p,
                              const std::vector<Value>& inputs,
                              const EvalOptions& opts = {});

// The data universe B: sub-data of the inputs plus sub-data of clause
// right-hand sides, indexed by sort.
struct DataUniverse {
  std::map<std::string, std::set<Value>> by_sort;
  std::set<Value> all;
  bool contains(const Value& v) const { return all.count(v) != 0; }
};

DataUniverse collect_B(const Program& p, const std::vector<Value>& inputs);

}  // namespace consfree
