#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace consfree {

// ---------------------------------------------------------------------------
// Simple types: sorts, products, right-associated arrows.

struct Type;
using TypePtr = std::shared_ptr<const Type>;

struct Type {
  enum class Kind { Sort, Product, Arrow };
  Kind kind;
  std::string sort;     // Kind::Sort
  TypePtr left, right;  // Product: components; Arrow: argument, result
};

TypePtr sort_type(std::string name);
TypePtr product_type(TypePtr a, TypePtr b);
TypePtr arrow_type(TypePtr arg, TypePtr result);

bool type_equal(const TypePtr& a, const TypePtr& b);
int type_order(const TypePtr& t);
std::string show_type(const TypePtr& t);

// Uncurried view of an arrow chain: sigma_1 => ... => sigma_m => kappa.
std::vector<TypePtr> argument_types(const TypePtr& t);
TypePtr final_result_type(const TypePtr& t);
// Type after consuming the first n arguments; throws if n exceeds the chain.
TypePtr drop_arguments(TypePtr t, size_t n);

// ---------------------------------------------------------------------------
// Expressions.

struct Expr;
using ExprPtr = std::shared_ptr<Expr>;

struct Expr {
  enum class Kind { Var, ConsApp, FunApp, App, Pair, If, Choose };
  Kind kind;
  std::string name;           // Var, ConsApp, FunApp
  ExprPtr head;               // App (head is itself an expression)
  std::vector<ExprPtr> args;  // ConsApp/FunApp/App arguments; Pair {l,r};
                              // If {cond,then,else}; Choose alternatives
  TypePtr type;               // annotation, filled in by typecheck
};

ExprPtr make_var(std::string name);
ExprPtr make_cons(std::string name, std::vector<ExprPtr> args);
ExprPtr make_fun(std::string name, std::vector<ExprPtr> args);
ExprPtr make_app(ExprPtr head, std::vector<ExprPtr> args);
ExprPtr make_pair(ExprPtr l, ExprPtr r);
ExprPtr make_if(ExprPtr c, ExprPtr t, ExprPtr e);
ExprPtr make_choose(std::vector<ExprPtr> alternatives);

ExprPtr clone_expr(const ExprPtr& e);
bool expr_equal(const ExprPtr& a, const ExprPtr& b);  // ignores annotations

// Child expressions in path order (If: cond, then, else; App: head, args...).
std::vector<ExprPtr> expr_children(const ExprPtr& e);
std::string path_string(const std::vector<int>& path);

// ---------------------------------------------------------------------------
// Patterns and clauses.

struct Pattern;
using PatternPtr = std::shared_ptr<Pattern>;

struct Pattern {
  enum class Kind { Var, Cons, Pair };
  Kind kind;
  std::string name;              // Var, Cons
  std::vector<PatternPtr> args;  // Cons arguments; Pair {l,r}
  TypePtr type;                  // annotation
};

PatternPtr make_pvar(std::string name);
PatternPtr make_pcons(std::string name, std::vector<PatternPtr> args);
PatternPtr make_ppair(PatternPtr l, PatternPtr r);
bool pattern_equal(const PatternPtr& a, const PatternPtr& b);

struct Clause {
  std::string function;
  std::vector<PatternPtr> patterns;
  ExprPtr body;
  std::map<std::string, TypePtr> var_types;  // filled in by typecheck
};

// ---------------------------------------------------------------------------
// Programs. Clause order is significant (first-match semantics).

struct Program {
  std::vector<std::string> sorts;  // always contains bool and list
  std::vector<std::pair<std::string, TypePtr>> constructors;
  std::vector<std::pair<std::string, TypePtr>> functions;  // first is main
  std::vector<Clause> clauses;
  std::string main;
  bool terminating = false;  // "# terminating" pragma

  const TypePtr* constructor_type(const std::string& name) const;
  const TypePtr* function_type(const std::string& name) const;
  bool has_sort(const std::string& name) const;
  bool is_constructor(const std::string& name) const;
  bool is_function(const std::string& name) const;
  // Number of patterns per clause of fn; for clause-less functions, the
  // number of declared argument positions.
  size_t arity(const std::string& fn) const;
  std::vector<size_t> clauses_of(const std::string& fn) const;
};

// A program holding only the built-in declarations.
Program base_program();

bool program_equal(const Program& a, const Program& b);

}  // namespace consfree
