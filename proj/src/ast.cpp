#include "consfree/ast.hpp"

#include <algorithm>

namespace consfree {

TypePtr sort_type(std::string name) {
  auto t = std::make_shared<Type>();
  t->kind = Type::Kind::Sort;
  t->sort = std::move(name);
  return t;
}

TypePtr product_type(TypePtr a, TypePtr b) {
  auto t = std::make_shared<Type>();
  t->kind = Type::Kind::Product;
  t->left = std::move(a);
  t->right = std::move(b);
  return t;
}

TypePtr arrow_type(TypePtr arg, TypePtr result) {
  auto t = std::make_shared<Type>();
  t->kind = Type::Kind::Arrow;
  t->left = std::move(arg);
  t->right = std::move(result);
  return t;
}

bool type_equal(const TypePtr& a, const TypePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  if (a->kind == Type::Kind::Sort) return a->sort == b->sort;
  return type_equal(a->left, b->left) && type_equal(a->right, b->right);
}

int type_order(const TypePtr& t) {
  switch (t->kind) {
    case Type::Kind::Sort:
      return 0;
    case Type::Kind::Product:
      return std::max(type_order(t->left), type_order(t->right));
    case Type::Kind::Arrow:
      return std::max(type_order(t->left) + 1, type_order(t->right));
  }
  return 0;
}

static std::string show_type_prec(const TypePtr& t, int prec) {
  // prec 0: arrow position, 1: product position, 2: atom
  switch (t->kind) {
    case Type::Kind::Sort:
      return t->sort;
    case Type::Kind::Product: {
      std::string s =
          show_type_prec(t->left, 2) + " * " + show_type_prec(t->right, 1);
      return prec > 1 ? "(" + s + ")" : s;
    }
    case Type::Kind::Arrow: {
      std::string s =
          show_type_prec(t->left, 1) + " => " + show_type_prec(t->right, 0);
      return prec > 0 ? "(" + s + ")" : s;
    }
  }
  return "?";
}

std::string show_type(const TypePtr& t) { return show_type_prec(t, 0); }

std::vector<TypePtr> argument_types(const TypePtr& t) {
  std::vector<TypePtr> out;
  TypePtr cur = t;
  while (cur->kind == Type::Kind::Arrow) {
    out.push_back(cur->left);
    cur = cur->right;
  }
  return out;
}

TypePtr final_result_type(const TypePtr& t) {
  TypePtr cur = t;
  while (cur->kind == Type::Kind::Arrow) cur = cur->right;
  return cur;
}

TypePtr drop_arguments(TypePtr t, size_t n) {
  for (size_t i = 0; i < n; ++i) {
    if (t->kind != Type::Kind::Arrow)
      throw std::logic_error("drop_arguments: not enough arrows in " +
                             show_type(t));
    t = t->right;
  }
  return t;
}

// ---------------------------------------------------------------------------

static ExprPtr mk(Expr::Kind k) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  return e;
}

ExprPtr make_var(std::string name) {
  auto e = mk(Expr::Kind::Var);
  e->name = std::move(name);
  return e;
}

ExprPtr make_cons(std::string name, std::vector<ExprPtr> args) {
  auto e = mk(Expr::Kind::ConsApp);
  e->name = std::move(name);
  e->args = std::move(args);
  return e;
}

ExprPtr make_fun(std::string name, std::vector<ExprPtr> args) {
  auto e = mk(Expr::Kind::FunApp);
  e->name = std::move(name);
  e->args = std::move(args);
  return e;
}

ExprPtr make_app(ExprPtr head, std::vector<ExprPtr> args) {
  auto e = mk(Expr::Kind::App);
  e->head = std::move(head);
  e->args = std::move(args);
  return e;
}

ExprPtr make_pair(ExprPtr l, ExprPtr r) {
  auto e = mk(Expr::Kind::Pair);
  e->args = {std::move(l), std::move(r)};
  return e;
}

ExprPtr make_if(ExprPtr c, ExprPtr t, ExprPtr f) {
  auto e = mk(Expr::Kind::If);
  e->args = {std::move(c), std::move(t), std::move(f)};
  return e;
}

ExprPtr make_choose(std::vector<ExprPtr> alternatives) {
  auto e = mk(Expr::Kind::Choose);
  e->args = std::move(alternatives);
  return e;
}

ExprPtr clone_expr(const ExprPtr& e) {
  auto out = std::make_shared<Expr>();
  out->kind = e->kind;
  out->name = e->name;
  out->type = e->type;
  if (e->head) out->head = clone_expr(e->head);
  out->args.reserve(e->args.size());
  for (auto& a : e->args) out->args.push_back(clone_expr(a));
  return out;
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->name != b->name) return false;
  if ((a->head != nullptr) != (b->head != nullptr)) return false;
  if (a->head && !expr_equal(a->head, b->head)) return false;
  if (a->args.size() != b->args.size()) return false;
  for (size_t i = 0; i < a->args.size(); ++i)
    if (!expr_equal(a->args[i], b->args[i])) return false;
  return true;
}

std::vector<ExprPtr> expr_children(const ExprPtr& e) {
  std::vector<ExprPtr> out;
  if (e->head) out.push_back(e->head);
  for (auto& a : e->args) out.push_back(a);
  return out;
}

std::string path_string(const std::vector<int>& path) {
  std::string out;
  for (size_t i = 0; i < path.size(); ++i) {
    if (i) out += ".";
    out += std::to_string(path[i]);
  }
  return out.empty() ? "." : out;
}

// ---------------------------------------------------------------------------

PatternPtr make_pvar(std::string name) {
  auto p = std::make_shared<Pattern>();
  p->kind = Pattern::Kind::Var;
  p->name = std::move(name);
  return p;
}

PatternPtr make_pcons(std::string name, std::vector<PatternPtr> args) {
  auto p = std::make_shared<Pattern>();
  p->kind = Pattern::Kind::Cons;
  p->name = std::move(name);
  p->args = std::move(args);
  return p;
}

PatternPtr make_ppair(PatternPtr l, PatternPtr r) {
  auto p = std::make_shared<Pattern>();
  p->kind = Pattern::Kind::Pair;
  p->args = {std::move(l), std::move(r)};
  return p;
}

bool pattern_equal(const PatternPtr& a, const PatternPtr& b) {
  if (a->kind != b->kind || a->name != b->name) return false;
  if (a->args.size() != b->args.size()) return false;
  for (size_t i = 0; i < a->args.size(); ++i)
    if (!pattern_equal(a->args[i], b->args[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------

const TypePtr* Program::constructor_type(const std::string& name) const {
  for (auto& [n, t] : constructors)
    if (n == name) return &t;
  return nullptr;
}

const TypePtr* Program::function_type(const std::string& name) const {
  for (auto& [n, t] : functions)
    if (n == name) return &t;
  return nullptr;
}

bool Program::has_sort(const std::string& name) const {
  return std::find(sorts.begin(), sorts.end(), name) != sorts.end();
}

bool Program::is_constructor(const std::string& name) const {
  return constructor_type(name) != nullptr;
}

bool Program::is_function(const std::string& name) const {
  return function_type(name) != nullptr;
}

size_t Program::arity(const std::string& fn) const {
  for (auto& c : clauses)
    if (c.function == fn) return c.patterns.size();
  const TypePtr* t = function_type(fn);
  return t ? argument_types(*t).size() : 0;
}

std::vector<size_t> Program::clauses_of(const std::string& fn) const {
  std::vector<size_t> out;
  for (size_t i = 0; i < clauses.size(); ++i)
    if (clauses[i].function == fn) out.push_back(i);
  return out;
}

Program base_program() {
  Program p;
  p.sorts = {"bool", "list"};
  TypePtr b = sort_type("bool");
  TypePtr l = sort_type("list");
  p.constructors = {
      {"true", b},
      {"false", b},
      {"nil", l},
      {"::", arrow_type(b, arrow_type(l, l))},
  };
  return p;
}

bool program_equal(const Program& a, const Program& b) {
  if (a.sorts != b.sorts || a.main != b.main ||
      a.terminating != b.terminating)
    return false;
  auto decls_equal = [](auto& x, auto& y) {
    if (x.size() != y.size()) return false;
    for (size_t i = 0; i < x.size(); ++i)
      if (x[i].first != y[i].first || !type_equal(x[i].second, y[i].second))
        return false;
    return true;
  };
  if (!decls_equal(a.constructors, b.constructors)) return false;
  if (!decls_equal(a.functions, b.functions)) return false;
  if (a.clauses.size() != b.clauses.size()) return false;
  for (size_t i = 0; i < a.clauses.size(); ++i) {
    const Clause& ca = a.clauses[i];
    const Clause& cb = b.clauses[i];
    if (ca.function != cb.function) return false;
    if (ca.patterns.size() != cb.patterns.size()) return false;
    for (size_t j = 0; j < ca.patterns.size(); ++j)
      if (!pattern_equal(ca.patterns[j], cb.patterns[j])) return false;
    if (!expr_equal(ca.body, cb.body)) return false;
  }
  return true;
}

}  // namespace consfree
