#include "consfree/analysis.hpp"

#include <map>
#include <set>
#include <sstream>

#include "consfree/printer.hpp"

namespace consfree {

std::string AnalysisReport::render() const {
  if (violations.empty()) return "pass\n";
  std::ostringstream out;
  for (auto& v : violations)
    out << "clause " << v.clause << " at " << v.path << ": " << v.reason
        << "\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Type checking.

namespace {

struct Checker {
  Program& p;
  std::vector<TypeError> errors = {};
  size_t clause_idx = 0;

  void error(const std::vector<int>& path, const std::string& msg) {
    errors.push_back({clause_idx, path_string(path), msg});
  }

  void check_pattern(const PatternPtr& pat, const TypePtr& expected,
                     std::map<std::string, TypePtr>& env,
                     std::vector<int>& path) {
    pat->type = expected;
    switch (pat->kind) {
      case Pattern::Kind::Var:
        env[pat->name] = expected;
        return;
      case Pattern::Kind::Cons: {
        const TypePtr* ct = p.constructor_type(pat->name);
        if (!ct) {
          error(path, "unknown constructor " + pat->name);
          return;
        }
        auto argtys = argument_types(*ct);
        TypePtr result = final_result_type(*ct);
        if (!type_equal(result, expected)) {
          error(path, "pattern constructor " + pat->name + " has sort " +
                          show_type(result) + ", expected " +
                          show_type(expected));
          return;
        }
        if (pat->args.size() != argtys.size()) {
          error(path, "pattern constructor " + pat->name +
                          " must be fully applied");
          return;
        }
        for (size_t i = 0; i < pat->args.size(); ++i) {
          path.push_back(static_cast<int>(i));
          check_pattern(pat->args[i], argtys[i], env, path);
          path.pop_back();
        }
        return;
      }
      case Pattern::Kind::Pair: {
        if (expected->kind != Type::Kind::Product) {
          error(path, "pair pattern against non-product type " +
                          show_type(expected));
          return;
        }
        path.push_back(0);
        check_pattern(pat->args[0], expected->left, env, path);
        path.pop_back();
        path.push_back(1);
        check_pattern(pat->args[1], expected->right, env, path);
        path.pop_back();
        return;
      }
    }
  }

  TypePtr apply_args(TypePtr head_ty, const std::vector<ExprPtr>& args,
                     const std::map<std::string, TypePtr>& env,
                     std::vector<int>& path, int first_child,
                     const std::string& what) {
    for (size_t i = 0; i < args.size(); ++i) {
      path.push_back(first_child + static_cast<int>(i));
      TypePtr at = infer(args[i], env, path);
      path.pop_back();
      if (!head_ty) continue;
      if (head_ty->kind != Type::Kind::Arrow) {
        error(path, what + " applied to too many arguments");
        head_ty = nullptr;
        continue;
      }
      if (at && !type_equal(head_ty->left, at))
        error(path, "argument " + std::to_string(i + 1) + " of " + what +
                        " has type " + show_type(at) + ", expected " +
                        show_type(head_ty->left));
      head_ty = head_ty->right;
    }
    return head_ty;
  }

  TypePtr infer(const ExprPtr& e, const std::map<std::string, TypePtr>& env,
                std::vector<int>& path) {
    TypePtr ty;
    switch (e->kind) {
      case Expr::Kind::Var: {
        auto it = env.find(e->name);
        if (it == env.end())
          error(path, "unbound variable " + e->name);
        else
          ty = it->second;
        break;
      }
      case Expr::Kind::ConsApp: {
        const TypePtr* ct = p.constructor_type(e->name);
        if (!ct) {
          error(path, "unknown constructor " + e->name);
          break;
        }
        if (argument_types(*ct).size() != e->args.size()) {
          error(path, "constructor " + e->name + " must be fully applied");
          break;
        }
        ty = apply_args(*ct, e->args, env, path, 0,
                        "constructor " + e->name);
        break;
      }
      case Expr::Kind::FunApp: {
        const TypePtr* ft = p.function_type(e->name);
        if (!ft) {
          error(path, "unknown function " + e->name);
          break;
        }
        ty = apply_args(*ft, e->args, env, path, 0, "function " + e->name);
        break;
      }
      case Expr::Kind::App: {
        path.push_back(0);
        TypePtr ht = infer(e->head, env, path);
        path.pop_back();
        ty = apply_args(ht, e->args, env, path, 1, "expression");
        break;
      }
      case Expr::Kind::Pair: {
        path.push_back(0);
        TypePtr l = infer(e->args[0], env, path);
        path.pop_back();
        path.push_back(1);
        TypePtr r = infer(e->args[1], env, path);
        path.pop_back();
        if (l && r) ty = product_type(l, r);
        break;
      }
      case Expr::Kind::If: {
        path.push_back(0);
        TypePtr c = infer(e->args[0], env, path);
        path.pop_back();
        if (c && !(c->kind == Type::Kind::Sort && c->sort == "bool"))
          error(path, "if condition has type " + show_type(c) +
                          ", expected bool");
        path.push_back(1);
        TypePtr t = infer(e->args[1], env, path);
        path.pop_back();
        path.push_back(2);
        TypePtr f = infer(e->args[2], env, path);
        path.pop_back();
        if (t && f && !type_equal(t, f))
          error(path, "if branches have different types: " + show_type(t) +
                          " vs " + show_type(f));
        ty = t ? t : f;
        break;
      }
      case Expr::Kind::Choose: {
        TypePtr common;
        for (size_t i = 0; i < e->args.size(); ++i) {
          path.push_back(static_cast<int>(i));
          TypePtr at = infer(e->args[i], env, path);
          path.pop_back();
          if (!at) continue;
          if (!common)
            common = at;
          else if (!type_equal(common, at))
            error(path, "choose alternatives have different types: " +
                            show_type(common) + " vs " + show_type(at));
        }
        ty = common;
        break;
      }
    }
    e->type = ty;
    return ty;
  }

  void run() {
    // per-function arity consistency
    std::map<std::string, size_t> arities;
    for (auto& c : p.clauses) {
      auto [it, fresh] = arities.emplace(c.function, c.patterns.size());
      if (!fresh && it->second != c.patterns.size())
        errors.push_back({SIZE_MAX, ".",
                          "clauses of " + c.function +
                              " disagree on the number of patterns"});
    }
    // main function shape
    if (const TypePtr* mt = p.function_type(p.main)) {
      for (auto& at : argument_types(*mt))
        if (type_order(at) != 0)
          errors.push_back({SIZE_MAX, ".",
                            "main argument type " + show_type(at) +
                                " must have type order 0"});
      if (type_order(final_result_type(*mt)) != 0)
        errors.push_back(
            {SIZE_MAX, ".", "main result type must have type order 0"});
    } else {
      errors.push_back({SIZE_MAX, ".", "main function is not declared"});
    }

    for (size_t i = 0; i < p.clauses.size(); ++i) {
      clause_idx = i;
      Clause& c = p.clauses[i];
      const TypePtr* ft = p.function_type(c.function);
      if (!ft) {
        errors.push_back(
            {i, ".", "clause for undeclared function " + c.function});
        continue;
      }
      auto argtys = argument_types(*ft);
      if (c.patterns.size() > argtys.size()) {
        errors.push_back({i, ".",
                          "clause for " + c.function + " has " +
                              std::to_string(c.patterns.size()) +
                              " patterns but the type admits only " +
                              std::to_string(argtys.size())});
        continue;
      }
      std::map<std::string, TypePtr> env;
      std::vector<int> path;
      for (size_t j = 0; j < c.patterns.size(); ++j) {
        path.assign(1, static_cast<int>(j));
        check_pattern(c.patterns[j], argtys[j], env, path);
      }
      path.clear();
      TypePtr body_ty = infer(c.body, env, path);
      TypePtr expected = drop_arguments(*ft, c.patterns.size());
      if (body_ty && !type_equal(body_ty, expected))
        errors.push_back({i, ".",
                          "clause body has type " + show_type(body_ty) +
                              ", expected " + show_type(expected)});
      c.var_types = std::move(env);
    }
  }
};

}  // namespace

std::vector<TypeError> typecheck(Program& p) {
  Checker c{p};
  c.run();
  return std::move(c.errors);
}

int data_order(const Program& p) {
  int order = 0;
  for (auto& [name, ty] : p.functions)
    for (auto& at : argument_types(ty)) order = std::max(order, type_order(at));
  return order;
}

// ---------------------------------------------------------------------------
// Cons-freeness.

namespace {

bool is_closed_data(const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Kind::ConsApp:
    case Expr::Kind::Pair:
      for (auto& a : e->args)
        if (!is_closed_data(a)) return false;
      return true;
    default:
      return false;
  }
}

bool matches_pattern(const ExprPtr& e, const PatternPtr& pat) {
  switch (pat->kind) {
    case Pattern::Kind::Var:
      return e->kind == Expr::Kind::Var && e->name == pat->name;
    case Pattern::Kind::Cons:
      if (e->kind != Expr::Kind::ConsApp || e->name != pat->name ||
          e->args.size() != pat->args.size())
        return false;
      break;
    case Pattern::Kind::Pair:
      if (e->kind != Expr::Kind::Pair) return false;
      break;
  }
  for (size_t i = 0; i < pat->args.size(); ++i)
    if (!matches_pattern(e->args[i], pat->args[i])) return false;
  return true;
}

bool occurs_in_pattern(const ExprPtr& e, const PatternPtr& pat) {
  if (matches_pattern(e, pat)) return true;
  for (auto& a : pat->args)
    if (occurs_in_pattern(e, a)) return true;
  return false;
}

void scan_cons_free(const Clause& c, size_t idx, const ExprPtr& e,
                    std::vector<int>& path, AnalysisReport& report) {
  if (e->kind == Expr::Kind::ConsApp && !is_closed_data(e)) {
    bool ok = false;
    for (auto& pat : c.patterns)
      if (occurs_in_pattern(e, pat)) {
        ok = true;
        break;
      }
    if (!ok)
      report.violations.push_back(
          {idx, path_string(path),
           "constructor application " + show_expr(e) +
               " is neither closed data nor a sub-expression of the "
               "left-hand side"});
  }
  auto children = expr_children(e);
  for (size_t i = 0; i < children.size(); ++i) {
    path.push_back(static_cast<int>(i));
    scan_cons_free(c, idx, children[i], path, report);
    path.pop_back();
  }
}

}  // namespace

AnalysisReport check_cons_free(const Program& p) {
  AnalysisReport report;
  for (size_t i = 0; i < p.clauses.size(); ++i) {
    std::vector<int> path;
    scan_cons_free(p.clauses[i], i, p.clauses[i].body, path, report);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Order-n immutability.

namespace {

void collect_high_vars(const ExprPtr& e, int n,
                       const std::map<std::string, TypePtr>& var_types,
                       std::set<std::string>& out) {
  if (e->kind == Expr::Kind::Var) {
    auto it = var_types.find(e->name);
    if (it != var_types.end() && type_order(it->second) >= n)
      out.insert(e->name);
  }
  for (auto& ch : expr_children(e)) collect_high_vars(ch, n, var_types, out);
}

void scan_high_subexprs(const ExprPtr& e, int n, const std::string& allowed,
                        size_t idx, std::vector<int>& path,
                        AnalysisReport& report) {
  bool is_allowed_var = e->kind == Expr::Kind::Var && e->name == allowed;
  if (!is_allowed_var && e->type && type_order(e->type) >= n)
    report.violations.push_back(
        {idx, path_string(path),
         "sub-expression of type order >= " + std::to_string(n) +
             " besides the variable " + allowed});
  auto children = expr_children(e);
  for (size_t i = 0; i < children.size(); ++i) {
    path.push_back(static_cast<int>(i));
    scan_high_subexprs(children[i], n, allowed, idx, path, report);
    path.pop_back();
  }
}

}  // namespace

AnalysisReport check_immutability(const Program& p, int n) {
  AnalysisReport report;
  for (size_t i = 0; i < p.clauses.size(); ++i) {
    const Clause& c = p.clauses[i];
    std::set<std::string> high;
    collect_high_vars(c.body, n, c.var_types, high);
    if (high.size() > 1) {
      std::string names;
      for (auto& v : high) names += (names.empty() ? "" : ", ") + v;
      report.violations.push_back(
          {i, ".",
           "clause uses " + std::to_string(high.size()) +
               " variables of type order >= " + std::to_string(n) + " (" +
               names + ")"});
      continue;
    }
    if (high.size() == 1) {
      std::vector<int> path;
      scan_high_subexprs(c.body, n, *high.begin(), i, path, report);
    }
  }
  return report;
}

}  // namespace consfree
