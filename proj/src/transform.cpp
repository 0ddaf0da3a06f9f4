#include "consfree/transform.hpp"

#include <map>

#include "consfree/printer.hpp"

namespace consfree {

ExprPtr compose_apply(const ExprPtr& s, const std::vector<ExprPtr>& extra) {
  if (extra.empty()) return clone_expr(s);
  switch (s->kind) {
    case Expr::Kind::If:
      return make_if(clone_expr(s->args[0]),
                     compose_apply(s->args[1], extra),
                     compose_apply(s->args[2], extra));
    case Expr::Kind::Choose: {
      std::vector<ExprPtr> alts;
      alts.reserve(s->args.size());
      for (auto& a : s->args) alts.push_back(compose_apply(a, extra));
      return make_choose(std::move(alts));
    }
    case Expr::Kind::Var: {
      std::vector<ExprPtr> args;
      for (auto& t : extra) args.push_back(clone_expr(t));
      return make_app(clone_expr(s), std::move(args));
    }
    case Expr::Kind::ConsApp:
    case Expr::Kind::FunApp: {
      ExprPtr out = clone_expr(s);
      for (auto& t : extra) out->args.push_back(clone_expr(t));
      out->type = nullptr;
      return out;
    }
    case Expr::Kind::App: {
      std::vector<ExprPtr> args = s->args;
      for (auto& t : extra) args.push_back(t);
      return compose_apply(s->head, args);
    }
    case Expr::Kind::Pair:
      throw std::logic_error("compose_apply: pair in applied head position");
  }
  throw std::logic_error("compose_apply: malformed expression");
}

// ---------------------------------------------------------------------------

namespace {

struct PushdownPass {
  TransformTrace& trace;
  size_t clause_idx = 0;

  ExprPtr rewrite(const ExprPtr& e, std::vector<int>& path) {
    ExprPtr out = std::make_shared<Expr>();
    out->kind = e->kind;
    out->name = e->name;
    int child = 0;
    if (e->head) {
      path.push_back(child++);
      out->head = rewrite(e->head, path);
      path.pop_back();
    }
    for (auto& a : e->args) {
      path.push_back(child++);
      out->args.push_back(rewrite(a, path));
      path.pop_back();
    }
    if (out->kind == Expr::Kind::App &&
        out->head->kind != Expr::Kind::Var) {
      const char* rule = nullptr;
      switch (out->head->kind) {
        case Expr::Kind::If:
          rule = "if-pushdown";
          break;
        case Expr::Kind::Choose:
          rule = "choose-pushdown";
          break;
        default:
          rule = "app-flatten";
          break;
      }
      trace.rewrites.push_back({clause_idx, path_string(path), rule});
      return compose_apply(out->head, out->args);
    }
    return out;
  }
};

}  // namespace

TransformTrace compose_pushdown(const Program& p) {
  TransformTrace trace;
  trace.before = p;
  trace.after = p;
  PushdownPass pass{trace};
  for (size_t i = 0; i < trace.after.clauses.size(); ++i) {
    pass.clause_idx = i;
    std::vector<int> path;
    trace.after.clauses[i].body = pass.rewrite(trace.after.clauses[i].body,
                                               path);
    trace.after.clauses[i].var_types.clear();
  }
  return trace;
}

// ---------------------------------------------------------------------------
// Functional-variable-clause elimination.

namespace {

enum class MatchRes { Yes, No, Unknown };

MatchRes match_static(const PatternPtr& pat, const ExprPtr& e,
                      std::map<std::string, ExprPtr>& binding) {
  switch (pat->kind) {
    case Pattern::Kind::Var:
      binding[pat->name] = e;
      return MatchRes::Yes;
    case Pattern::Kind::Cons: {
      if (e->kind != Expr::Kind::ConsApp) return MatchRes::Unknown;
      if (e->name != pat->name || e->args.size() != pat->args.size())
        return MatchRes::No;
      break;
    }
    case Pattern::Kind::Pair:
      if (e->kind != Expr::Kind::Pair) return MatchRes::Unknown;
      break;
  }
  MatchRes acc = MatchRes::Yes;
  for (size_t i = 0; i < pat->args.size(); ++i) {
    MatchRes r = match_static(pat->args[i], e->args[i], binding);
    if (r == MatchRes::No) return MatchRes::No;
    if (r == MatchRes::Unknown) acc = MatchRes::Unknown;
  }
  return acc;
}

struct FvarPass {
  Program& prog;
  TransformTrace& trace;
  const std::map<std::string, std::vector<size_t>>& fvar_fns;
  size_t clause_idx = 0;
  bool changed = false;

  [[noreturn]] void fail(const std::string& msg) {
    throw std::runtime_error(msg);
  }

  ExprPtr rewrite(const ExprPtr& e, std::vector<int>& path) {
    ExprPtr out = std::make_shared<Expr>();
    out->kind = e->kind;
    out->name = e->name;
    int child = 0;
    if (e->head) {
      path.push_back(child++);
      out->head = rewrite(e->head, path);
      path.pop_back();
    }
    for (auto& a : e->args) {
      path.push_back(child++);
      out->args.push_back(rewrite(a, path));
      path.pop_back();
    }
    if (out->kind != Expr::Kind::FunApp || !fvar_fns.count(out->name))
      return out;

    const std::string& fn = out->name;
    size_t k = prog.arity(fn);
    if (out->args.size() < k)
      fail("InliningFailure: partial application of " + fn +
           " cannot be statically dispatched");
    // first-match static dispatch on the first k arguments
    for (size_t idx : prog.clauses_of(fn)) {
      const Clause& c = prog.clauses[idx];
      std::map<std::string, ExprPtr> binding;
      MatchRes acc = MatchRes::Yes;
      for (size_t i = 0; i < k && acc != MatchRes::No; ++i) {
        MatchRes r = match_static(c.patterns[i], out->args[i], binding);
        if (r == MatchRes::No) acc = MatchRes::No;
        else if (r == MatchRes::Unknown) acc = MatchRes::Unknown;
      }
      if (acc == MatchRes::No) continue;
      if (acc == MatchRes::Unknown)
        fail("InliningFailure: call to " + fn +
             " cannot be statically dispatched");
      if (c.body->kind != Expr::Kind::Var) return out;  // safe: stays put
      std::vector<ExprPtr> rest(out->args.begin() + static_cast<long>(k),
                                out->args.end());
      trace.rewrites.push_back({clause_idx, path_string(path),
                                "fvar-inline"});
      changed = true;
      return compose_apply(binding.at(c.body->name), rest);
    }
    fail("InliningFailure: no clause of " + fn + " statically matches");
  }
};

}  // namespace

TransformTrace eliminate_fvar_clauses(const Program& p) {
  TransformTrace trace;
  trace.before = p;
  trace.after = p;
  Program& prog = trace.after;

  std::vector<TypeError> errs = typecheck(prog);
  if (!errs.empty()) {
    trace.failed = true;
    trace.failure = "InliningFailure: program does not type-check";
    trace.after = p;
    return trace;
  }

  // clauses f l1 ... lk = x with x of functional type
  auto find_fvar = [&]() {
    std::map<std::string, std::vector<size_t>> out;
    for (size_t i = 0; i < prog.clauses.size(); ++i) {
      const Clause& c = prog.clauses[i];
      if (c.body->kind == Expr::Kind::Var && c.body->type &&
          type_order(c.body->type) >= 1)
        out[c.function].push_back(i);
    }
    return out;
  };

  auto fvar_fns = find_fvar();
  if (fvar_fns.empty()) return trace;  // identity

  try {
    for (int round = 0; round < 100; ++round) {
      FvarPass pass{prog, trace, fvar_fns};
      for (size_t i = 0; i < prog.clauses.size(); ++i) {
        pass.clause_idx = i;
        std::vector<int> path;
        prog.clauses[i].body = pass.rewrite(prog.clauses[i].body, path);
      }
      if (!pass.changed) break;
      if (round == 99)
        throw std::runtime_error(
            "InliningFailure: inlining does not terminate (recursive "
            "functional-variable clause)");
    }
    // Drop the functional-variable clauses; their call sites are gone or
    // provably dispatch elsewhere.
    std::vector<Clause> kept;
    for (size_t i = 0; i < prog.clauses.size(); ++i) {
      bool drop = false;
      auto it = fvar_fns.find(prog.clauses[i].function);
      if (it != fvar_fns.end())
        for (size_t j : it->second) drop = drop || j == i;
      if (!drop) kept.push_back(prog.clauses[i]);
    }
    prog.clauses = std::move(kept);
    for (auto& c : prog.clauses) c.var_types.clear();
    errs = typecheck(prog);
    if (!errs.empty())
      throw std::runtime_error(
          "InliningFailure: rewritten program does not type-check");
  } catch (const std::runtime_error& e) {
    trace.failed = true;
    trace.failure = e.what();
    trace.after = p;
    trace.rewrites.clear();
  }
  return trace;
}

// ---------------------------------------------------------------------------

namespace {

void scan_order(const ExprPtr& e, size_t idx, std::vector<int>& path,
                AnalysisReport& report) {
  if (e->type && type_order(e->type) > 1)
    report.violations.push_back({idx, path_string(path),
                                 "expression has type order " +
                                     std::to_string(type_order(e->type)) +
                                     " > 1"});
  auto children = expr_children(e);
  for (size_t i = 0; i < children.size(); ++i) {
    path.push_back(static_cast<int>(i));
    scan_order(children[i], idx, path, report);
    path.pop_back();
  }
}

}  // namespace

AnalysisReport verify_order_collapsed(const Program& p) {
  AnalysisReport report;
  for (auto& [name, ty] : p.functions)
    for (auto& at : argument_types(ty))
      if (type_order(at) > 1)
        report.violations.push_back(
            {SIZE_MAX, ".",
             "argument type " + show_type(at) + " of " + name +
                 " has type order > 1"});
  for (size_t i = 0; i < p.clauses.size(); ++i) {
    std::vector<int> path;
    scan_order(p.clauses[i].body, i, path, report);
    const Clause& c = p.clauses[i];
    if (c.body->kind == Expr::Kind::Var && c.body->type &&
        type_order(c.body->type) >= 1)
      report.violations.push_back(
          {i, ".", "clause body is a bare functional variable"});
  }
  return report;
}

}  // namespace consfree
