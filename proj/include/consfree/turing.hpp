#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "consfree/analysis.hpp"

namespace consfree {

// Single-tape, right-infinite nondeterministic Turing machine.
struct Transition {
  std::string from;   // i, never accept/reject
  std::string read;   // r
  std::string write;  // w
  char dir;           // 'L' or 'R'
  std::string to;     // j
};

struct Machine {
  std::vector<std::string> symbols;  // must contain 0, 1 and _ (blank)
  std::vector<std::string> states;   // must contain start, accept, reject
  std::vector<Transition> transitions;

  bool has_symbol(const std::string& s) const;
  bool has_state(const std::string& s) const;
};

// Option-indexed transition table: each (k, i, r) occurs at most once and
// the projection onto (i, r, w, d, j) equals the base table.
struct IndexedRow {
  int option;  // k in 1..C
  Transition t;
};

struct IndexedMachine {
  Machine base;
  int fan_out;  // C
  std::vector<IndexedRow> rows;
};

struct Configuration {
  std::string state;
  std::map<int64_t, std::string> tape;  // position -> symbol, default blank
  int64_t head = 0;
};

struct RunOutcome {
  bool accepted = false;
  // option indices (into the IndexedMachine rows) of one accepting run
  std::vector<int> witness;
};

AnalysisReport validate_machine(const Machine& m);
IndexedMachine index_options(const Machine& m);

// Breadth-first search over nondeterministic branches, at most max_steps
// transitions. Tape starts as blank . word . blanks with the head on the
// leading blank. A move left of position 0 kills the branch.
RunOutcome run_machine(const Machine& m, const std::string& word,
                       uint64_t max_steps);

// Replays a witness (sequence of option indices); returns true when it
// ends in accept within its own length.
bool replay_witness(const Machine& m, const std::string& word,
                    const std::vector<int>& witness);

// .tm file format: "symbols: ...", "states: ...", then "i r -> w d j" lines.
Machine parse_machine(const std::string& text);
std::string show_machine(const Machine& m);

}  // namespace consfree
