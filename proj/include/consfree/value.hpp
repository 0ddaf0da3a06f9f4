#pragma once

#include <string>
#include <vector>

namespace consfree {

// Runtime values: fully applied constructor trees (possibly containing
// pairs), pairs, and partial applications of defined functions.
struct Value {
  enum class Kind { Cons, Pair, Partial };
  Kind kind = Kind::Cons;
  std::string head;         // constructor name, or function name for Partial
  std::vector<Value> args;  // Pair always has exactly two

  static Value cons(std::string name, std::vector<Value> args = {});
  static Value pair(Value l, Value r);
  static Value partial(std::string fn, std::vector<Value> args);

  bool operator==(const Value& o) const;
  bool operator<(const Value& o) const;

  // True when the value contains no partial application.
  bool is_data() const;
};

// Canonical printed form; lists use infix ::.
std::string show_value(const Value& v);

// Builds the cons-chained bool list for a word over {0,1}.
Value data_from_bits(const std::string& bits);

}  // namespace consfree
