#include "consfree/value.hpp"

#include <stdexcept>
#include <tuple>

namespace consfree {

Value Value::cons(std::string name, std::vector<Value> args) {
  Value v;
  v.kind = Kind::Cons;
  v.head = std::move(name);
  v.args = std::move(args);
  return v;
}

Value Value::pair(Value l, Value r) {
  Value v;
  v.kind = Kind::Pair;
  v.args = {std::move(l), std::move(r)};
  return v;
}

Value Value::partial(std::string fn, std::vector<Value> args) {
  Value v;
  v.kind = Kind::Partial;
  v.head = std::move(fn);
  v.args = std::move(args);
  return v;
}

bool Value::operator==(const Value& o) const {
  return kind == o.kind && head == o.head && args == o.args;
}

bool Value::operator<(const Value& o) const {
  if (kind != o.kind) return kind < o.kind;
  if (head != o.head) return head < o.head;
  return args < o.args;
}

bool Value::is_data() const {
  if (kind == Kind::Partial) return false;
  for (auto& a : args)
    if (!a.is_data()) return false;
  return true;
}

static void show_rec(const Value& v, bool atom, std::string& out) {
  switch (v.kind) {
    case Value::Kind::Cons:
      if (v.head == "::") {
        if (atom) out += "(";
        show_rec(v.args[0], true, out);
        out += " :: ";
        show_rec(v.args[1], false, out);
        if (atom) out += ")";
      } else if (v.args.empty()) {
        out += v.head;
      } else {
        if (atom) out += "(";
        out += v.head;
        for (auto& a : v.args) {
          out += " ";
          show_rec(a, true, out);
        }
        if (atom) out += ")";
      }
      break;
    case Value::Kind::Pair:
      out += "(";
      show_rec(v.args[0], false, out);
      out += ", ";
      show_rec(v.args[1], false, out);
      out += ")";
      break;
    case Value::Kind::Partial:
      if (atom && !v.args.empty()) out += "(";
      out += v.head;
      for (auto& a : v.args) {
        out += " ";
        show_rec(a, true, out);
      }
      if (atom && !v.args.empty()) out += ")";
      break;
  }
}

std::string show_value(const Value& v) {
  std::string out;
  show_rec(v, false, out);
  return out;
}

Value data_from_bits(const std::string& bits) {
  Value v = Value::cons("nil");
  for (auto it = bits.rbegin(); it != bits.rend(); ++it) {
    if (*it != '0' && *it != '1')
      throw std::runtime_error(std::string("input word may only contain 0 "
                                           "and 1, got '") +
                               *it + "'");
    Value bit = Value::cons(*it == '1' ? "true" : "false");
    v = Value::cons("::", {std::move(bit), std::move(v)});
  }
  return v;
}

}  // namespace consfree
