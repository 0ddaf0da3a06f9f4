#include "consfree/interp.hpp"

#include <cassert>
#include <unordered_map>
#include <unordered_set>

#include "consfree/printer.hpp"

namespace consfree {

namespace {

bool match_one(const PatternPtr& pat, const Value& v, Substitution& out) {
  switch (pat->kind) {
    case Pattern::Kind::Var:
      out[pat->name] = v;
      return true;
    case Pattern::Kind::Cons:
      if (v.kind != Value::Kind::Cons || v.head != pat->name ||
          v.args.size() != pat->args.size())
        return false;
      break;
    case Pattern::Kind::Pair:
      if (v.kind != Value::Kind::Pair) return false;
      break;
  }
  for (size_t i = 0; i < pat->args.size(); ++i)
    if (!match_one(pat->args[i], v.args[i], out)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Hash-consed value store: every distinct value gets one id, so copies,
// equality tests and memo keys are cheap during evaluation.

using Id = uint32_t;

struct Pool {
  struct Node {
    Value::Kind kind;
    uint32_t head;  // string id
    std::vector<Id> args;
    bool data;  // contains no partial application
  };

  std::vector<std::string> strings;
  std::unordered_map<std::string, uint32_t> string_index;
  std::vector<Node> nodes;

  struct NodeKey {
    Value::Kind kind;
    uint32_t head;
    const std::vector<Id>* args;
  };
  struct NodeHash {
    const Pool* pool;
    size_t operator()(uint32_t id) const {
      const Node& n = pool->nodes[id];
      return hash(n.kind, n.head, n.args);
    }
    static size_t hash(Value::Kind k, uint32_t h, const std::vector<Id>& a) {
      size_t out = static_cast<size_t>(k) * 1000003u + h;
      for (Id x : a) out = out * 1000003u + x;
      return out;
    }
  };
  struct NodeEq {
    const Pool* pool;
    bool operator()(uint32_t a, uint32_t b) const {
      const Node& na = pool->nodes[a];
      const Node& nb = pool->nodes[b];
      return na.kind == nb.kind && na.head == nb.head && na.args == nb.args;
    }
  };
  std::unordered_set<uint32_t, NodeHash, NodeEq> node_index;

  Pool() : node_index(64, NodeHash{this}, NodeEq{this}) {}

  uint32_t string_id(const std::string& s) {
    auto [it, fresh] = string_index.emplace(s, strings.size());
    if (fresh) strings.push_back(s);
    return it->second;
  }

  Id make(Value::Kind kind, uint32_t head, std::vector<Id> args) {
    bool data = kind != Value::Kind::Partial;
    for (Id a : args) data = data && nodes[a].data;
    nodes.push_back({kind, head, std::move(args), data});
    auto [it, fresh] = node_index.insert(
        static_cast<uint32_t>(nodes.size() - 1));
    if (!fresh) nodes.pop_back();
    return *it;
  }

  Id intern(const Value& v) {
    std::vector<Id> args;
    args.reserve(v.args.size());
    for (auto& a : v.args) args.push_back(intern(a));
    return make(v.kind, string_id(v.head), std::move(args));
  }

  Value value(Id id) const {
    const Node& n = nodes[id];
    std::vector<Value> args;
    args.reserve(n.args.size());
    for (Id a : n.args) args.push_back(value(a));
    Value out;
    out.kind = n.kind;
    out.head = strings[n.head];
    out.args = std::move(args);
    return out;
  }
};

struct IdVecHash {
  size_t operator()(const std::pair<uint32_t, std::vector<Id>>& k) const {
    size_t out = k.first;
    for (Id x : k.second) out = out * 1000003u + x;
    return out;
  }
};

using Memo = std::unordered_map<std::pair<uint32_t, std::vector<Id>>, Id,
                                IdVecHash>;

struct FuelOut {};
struct StuckErr {
  std::string msg;
};

// One variable binding frame per clause firing; clauses bind few variables,
// so linear search beats a map.
using Env = std::vector<std::pair<const std::string*, Id>>;

struct Evaluator {
  const Program& p;
  Pool& pool;
  std::function<int(int)> chooser;
  uint64_t fuel;
  uint64_t choose_count = 0;
  Memo* memo = nullptr;
  const std::function<void(const Value&)>* observer = nullptr;

  // function name -> arity and clause list, resolved once
  struct FnInfo {
    size_t arity;
    std::vector<size_t> clauses;
  };
  std::unordered_map<std::string, FnInfo> fn_info = {};

  const FnInfo& info(const std::string& fn) {
    auto it = fn_info.find(fn);
    if (it == fn_info.end())
      it = fn_info.emplace(fn, FnInfo{p.arity(fn), p.clauses_of(fn)}).first;
    return it->second;
  }

  void observe(Id id) {
    if (!observer) return;
    const Pool::Node& n = pool.nodes[id];
    if (n.kind == Value::Kind::Cons && n.data) {
      (*observer)(pool.value(id));
      return;
    }
    for (Id a : n.args) observe(a);
  }

  bool match(const PatternPtr& pat, Id id, Env& env) {
    const Pool::Node& n = pool.nodes[id];
    switch (pat->kind) {
      case Pattern::Kind::Var:
        env.emplace_back(&pat->name, id);
        return true;
      case Pattern::Kind::Cons:
        if (n.kind != Value::Kind::Cons ||
            pool.strings[n.head] != pat->name ||
            n.args.size() != pat->args.size())
          return false;
        break;
      case Pattern::Kind::Pair:
        if (n.kind != Value::Kind::Pair) return false;
        break;
    }
    for (size_t i = 0; i < pat->args.size(); ++i)
      if (!match(pat->args[i], n.args[i], env)) return false;
    return true;
  }

  Id eval(const ExprPtr& e, const Env& env) {
    switch (e->kind) {
      case Expr::Kind::Var: {
        for (auto& [name, id] : env)
          if (*name == e->name) return id;
        throw StuckErr{"unbound variable " + e->name};
      }
      case Expr::Kind::ConsApp: {
        std::vector<Id> args;
        args.reserve(e->args.size());
        for (auto& a : e->args) args.push_back(eval(a, env));
        Id v = pool.make(Value::Kind::Cons, pool.string_id(e->name),
                         std::move(args));
        observe(v);
        return v;
      }
      case Expr::Kind::FunApp: {
        std::vector<Id> args;
        args.reserve(e->args.size());
        for (auto& a : e->args) args.push_back(eval(a, env));
        return apply_fun(e->name, std::move(args));
      }
      case Expr::Kind::App: {
        Id head = eval(e->head, env);
        std::vector<Id> args;
        args.reserve(e->args.size());
        for (auto& a : e->args) args.push_back(eval(a, env));
        return apply_value(head, std::move(args));
      }
      case Expr::Kind::Pair: {
        Id l = eval(e->args[0], env);
        Id r = eval(e->args[1], env);
        return pool.make(Value::Kind::Pair, pool.string_id(""), {l, r});
      }
      case Expr::Kind::If: {
        Id c = eval(e->args[0], env);
        const Pool::Node& n = pool.nodes[c];
        if (n.kind == Value::Kind::Cons && n.args.empty()) {
          const std::string& h = pool.strings[n.head];
          if (h == "true") return eval(e->args[1], env);
          if (h == "false") return eval(e->args[2], env);
        }
        throw StuckErr{"if condition evaluated to " +
                       show_value(pool.value(c))};
      }
      case Expr::Kind::Choose: {
        ++choose_count;
        int branch = chooser(static_cast<int>(e->args.size()));
        return eval(e->args[branch], env);
      }
    }
    throw StuckErr{"malformed expression"};
  }

  Id apply_fun(const std::string& fn, std::vector<Id> args) {
    size_t k = info(fn).arity;
    if (args.size() < k)
      return pool.make(Value::Kind::Partial, pool.string_id(fn),
                       std::move(args));
    std::vector<Id> rest(args.begin() + static_cast<long>(k), args.end());
    args.resize(k);
    Id v = fire(fn, std::move(args));
    return apply_value(v, std::move(rest));
  }

  Id apply_value(Id head, std::vector<Id> args) {
    if (args.empty()) return head;
    const Pool::Node& n = pool.nodes[head];
    if (n.kind != Value::Kind::Partial)
      throw StuckErr{"cannot apply non-function value " +
                     show_value(pool.value(head))};
    std::vector<Id> all = n.args;
    for (Id a : args) all.push_back(a);
    return apply_fun(pool.strings[n.head], std::move(all));
  }

  Id fire(const std::string& fn, std::vector<Id> args) {
    std::pair<uint32_t, std::vector<Id>> key;
    if (memo) {
      key = {pool.string_id(fn), args};
      auto it = memo->find(key);
      if (it != memo->end()) {
        if (fuel == 0) throw FuelOut{};
        --fuel;
        return it->second;
      }
    }
    if (fuel == 0) throw FuelOut{};
    --fuel;
    for (size_t idx : info(fn).clauses) {
      const Clause& c = p.clauses[idx];
      Env env;
      bool ok = true;
      for (size_t i = 0; i < c.patterns.size() && ok; ++i)
        ok = match(c.patterns[i], args[i], env);
      if (!ok) continue;
      if (observer)
        for (auto& [name, id] : env) observe(id);
      uint64_t before = choose_count;
      Id result = eval(c.body, env);
      if (memo && choose_count == before) memo->emplace(std::move(key), result);
      return result;
    }
    std::string rendered = fn;
    for (Id a : args) rendered += " " + show_value(pool.value(a));
    throw StuckErr{"no clause of " + fn + " matches: " + rendered};
  }
};

}  // namespace

std::optional<Substitution> match_clause(const std::vector<PatternPtr>& pats,
                                         const std::vector<Value>& args) {
  assert(pats.size() == args.size());
  Substitution out;
  for (size_t i = 0; i < pats.size(); ++i)
    if (!match_one(pats[i], args[i], out)) return std::nullopt;
  return out;
}

static EvalResult run_once(const Program& p, Pool& pool,
                           const std::vector<Id>& inputs,
                           const std::function<int(int)>& chooser,
                           uint64_t fuel, const EvalOptions& opts,
                           Memo* memo) {
  Evaluator ev{p, pool, chooser, fuel};
  ev.memo = memo;
  if (opts.data_observer) ev.observer = &opts.data_observer;
  try {
    if (ev.observer)
      for (Id v : inputs) ev.observe(v);
    Id v = ev.apply_fun(p.main, inputs);
    return {EvalStatus::Ok, pool.value(v), ""};
  } catch (const FuelOut&) {
    return {EvalStatus::FuelExhausted, Value{}, ""};
  } catch (const StuckErr& s) {
    return {EvalStatus::Stuck, Value{}, s.msg};
  }
}

EvalResult evaluate_one(const Program& p, const std::vector<Value>& inputs,
                        const std::vector<int>& choices, uint64_t fuel,
                        const EvalOptions& opts) {
  Pool pool;
  std::vector<Id> in;
  for (auto& v : inputs) in.push_back(pool.intern(v));
  size_t pos = 0;
  auto chooser = [&](int m) {
    int b = pos < choices.size() ? choices[pos] : 0;
    ++pos;
    return b < m ? b : 0;
  };
  return run_once(p, pool, in, chooser, fuel, opts, nullptr);
}

EvalOutcome enumerate_results(const Program& p,
                              const std::vector<Value>& inputs,
                              const EvalOptions& opts) {
  EvalOutcome out;
  Pool pool;
  std::vector<Id> in;
  for (auto& v : inputs) in.push_back(pool.intern(v));
  Memo memo;
  bool use_memo = opts.memoize && p.terminating && !opts.data_observer;

  std::vector<std::vector<int>> stack;
  stack.push_back({});
  while (!stack.empty()) {
    std::vector<int> prefix = std::move(stack.back());
    stack.pop_back();

    std::vector<int> taken;
    std::vector<int> widths;
    size_t pos = 0;
    auto chooser = [&](int m) {
      int b = pos < prefix.size() ? prefix[pos] : 0;
      ++pos;
      taken.push_back(b);
      widths.push_back(m);
      return b;
    };
    EvalResult r = run_once(p, pool, in, chooser, opts.fuel, opts,
                            use_memo ? &memo : nullptr);
    switch (r.status) {
      case EvalStatus::Ok:
        out.results.insert(std::move(r.value));
        break;
      case EvalStatus::FuelExhausted:
        out.exhausted = false;
        break;
      case EvalStatus::Stuck:
        out.stuck.push_back(std::move(r.message));
        break;
    }
    // Schedule the untried siblings of every choice made beyond the prefix.
    for (size_t i = prefix.size(); i < taken.size(); ++i) {
      for (int b = 1; b < widths[i]; ++b) {
        std::vector<int> next(taken.begin(),
                              taken.begin() + static_cast<long>(i));
        next.push_back(b);
        stack.push_back(std::move(next));
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

void add_data(const Program& p, const Value& v, DataUniverse& B) {
  if (!B.all.insert(v).second) return;
  if (v.kind == Value::Kind::Cons) {
    if (const TypePtr* ct = p.constructor_type(v.head))
      B.by_sort[final_result_type(*ct)->sort].insert(v);
  }
  for (auto& a : v.args) add_data(p, a, B);
}

Value expr_to_data(const ExprPtr& e) {
  if (e->kind == Expr::Kind::Pair)
    return Value::pair(expr_to_data(e->args[0]), expr_to_data(e->args[1]));
  std::vector<Value> args;
  args.reserve(e->args.size());
  for (auto& a : e->args) args.push_back(expr_to_data(a));
  return Value::cons(e->name, std::move(args));
}

bool is_closed_data_expr(const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Kind::ConsApp:
    case Expr::Kind::Pair:
      for (auto& a : e->args)
        if (!is_closed_data_expr(a)) return false;
      return true;
    default:
      return false;
  }
}

void scan_expr_data(const Program& p, const ExprPtr& e, DataUniverse& B) {
  if (is_closed_data_expr(e)) {
    add_data(p, expr_to_data(e), B);
    return;
  }
  for (auto& ch : expr_children(e)) scan_expr_data(p, ch, B);
}

}  // namespace

DataUniverse collect_B(const Program& p, const std::vector<Value>& inputs) {
  DataUniverse B;
  for (auto& v : inputs) add_data(p, v, B);
  for (auto& c : p.clauses) scan_expr_data(p, c.body, B);
  return B;
}

}  // namespace consfree
