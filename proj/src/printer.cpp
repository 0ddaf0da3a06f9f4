#include "consfree/printer.hpp"

#include <sstream>

namespace consfree {

namespace {

// Context levels: 0 full expression, 1 ::-operand, 2 application head/left,
// 3 application argument.
void print_expr(const ExprPtr& e, int level, std::string& out);

void print_application(const std::string& head,
                       const std::vector<ExprPtr>& args, int level,
                       std::string& out) {
  if (args.empty()) {
    out += head;
    return;
  }
  bool paren = level >= 3;
  if (paren) out += "(";
  out += head;
  for (auto& a : args) {
    out += " ";
    print_expr(a, 3, out);
  }
  if (paren) out += ")";
}

void print_expr(const ExprPtr& e, int level, std::string& out) {
  switch (e->kind) {
    case Expr::Kind::Var:
      out += e->name;
      break;
    case Expr::Kind::ConsApp:
      if (e->name == "::" && e->args.size() == 2) {
        bool paren = level >= 2;
        if (paren) out += "(";
        print_expr(e->args[0], 2, out);
        out += " :: ";
        print_expr(e->args[1], 1, out);
        if (paren) out += ")";
      } else {
        print_application(e->name, e->args, level, out);
      }
      break;
    case Expr::Kind::FunApp:
      print_application(e->name, e->args, level, out);
      break;
    case Expr::Kind::App: {
      bool paren = level >= 3;
      if (paren) out += "(";
      print_expr(e->head, 3, out);
      for (auto& a : e->args) {
        out += " ";
        print_expr(a, 3, out);
      }
      if (paren) out += ")";
      break;
    }
    case Expr::Kind::Pair:
      out += "(";
      print_expr(e->args[0], 0, out);
      out += ", ";
      print_expr(e->args[1], 0, out);
      out += ")";
      break;
    case Expr::Kind::If: {
      bool paren = level >= 1;
      if (paren) out += "(";
      out += "if ";
      print_expr(e->args[0], 1, out);
      out += " then ";
      print_expr(e->args[1], 0, out);
      out += " else ";
      print_expr(e->args[2], 0, out);
      if (paren) out += ")";
      break;
    }
    case Expr::Kind::Choose: {
      out += "choose(";
      for (size_t i = 0; i < e->args.size(); ++i) {
        if (i) out += ", ";
        print_expr(e->args[i], 0, out);
      }
      out += ")";
      break;
    }
  }
}

void print_pattern(const PatternPtr& p, int level, std::string& out) {
  switch (p->kind) {
    case Pattern::Kind::Var:
      out += p->name;
      break;
    case Pattern::Kind::Cons:
      if (p->name == "::" && p->args.size() == 2) {
        bool paren = level >= 2;
        if (paren) out += "(";
        print_pattern(p->args[0], 2, out);
        out += " :: ";
        print_pattern(p->args[1], 1, out);
        if (paren) out += ")";
      } else if (p->args.empty()) {
        out += p->name;
      } else {
        bool paren = level >= 2;
        if (paren) out += "(";
        out += p->name;
        for (auto& a : p->args) {
          out += " ";
          print_pattern(a, 3, out);
        }
        if (paren) out += ")";
      }
      break;
    case Pattern::Kind::Pair:
      out += "(";
      print_pattern(p->args[0], 0, out);
      out += ", ";
      print_pattern(p->args[1], 0, out);
      out += ")";
      break;
  }
}

constexpr size_t kBuiltinConstructors = 4;  // true false nil ::
constexpr size_t kBuiltinSorts = 2;         // bool list

}  // namespace

std::string show_expr(const ExprPtr& e) {
  std::string out;
  print_expr(e, 0, out);
  return out;
}

std::string show_pattern(const PatternPtr& p) {
  std::string out;
  print_pattern(p, 3, out);
  return out;
}

std::string show_clause(const Clause& c) {
  std::string out = c.function;
  for (auto& p : c.patterns) {
    out += " ";
    print_pattern(p, 3, out);
  }
  out += " = ";
  print_expr(c.body, 0, out);
  return out;
}

std::string pretty_print(const Program& p) {
  std::ostringstream out;
  if (p.terminating) out << "# terminating\n";
  for (size_t i = kBuiltinSorts; i < p.sorts.size(); ++i)
    out << "sort " << p.sorts[i] << "\n";
  for (size_t i = kBuiltinConstructors; i < p.constructors.size(); ++i)
    out << "cons " << p.constructors[i].first << " : "
        << show_type(p.constructors[i].second) << "\n";
  for (auto& [name, ty] : p.functions)
    out << "fun " << name << " : " << show_type(ty) << "\n";
  for (auto& c : p.clauses) out << show_clause(c) << "\n";
  return out.str();
}

}  // namespace consfree
