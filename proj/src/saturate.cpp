#include "consfree/saturate.hpp"

#include <algorithm>
#include <functional>
#include <random>

#include "consfree/analysis.hpp"
#include "consfree/errors.hpp"
#include "consfree/interp.hpp"
#include "consfree/printer.hpp"
#include "consfree/transform.hpp"

namespace consfree {

// ---------------------------------------------------------------------------
// Semantic values.

namespace {

int three_way(const SemValue& a, const SemValue& b);

int three_way_tuple(const GraphTuple& a, const GraphTuple& b) {
  if (a.args.size() != b.args.size())
    return a.args.size() < b.args.size() ? -1 : 1;
  for (size_t i = 0; i < a.args.size(); ++i)
    if (int c = three_way(a.args[i], b.args[i])) return c;
  return three_way(a.result, b.result);
}

int three_way(const SemValue& a, const SemValue& b) {
  if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
  switch (a.kind) {
    case SemValue::Kind::Base:
      if (a.base < b.base) return -1;
      if (b.base < a.base) return 1;
      return 0;
    case SemValue::Kind::Pair:
      if (int c = three_way(a.parts[0], b.parts[0])) return c;
      return three_way(a.parts[1], b.parts[1]);
    case SemValue::Kind::Graph: {
      bool la = a.is_lazy_graph(), lb = b.is_lazy_graph();
      if (la != lb) return la ? -1 : 1;
      if (la) {
        if (a.fn != b.fn) return a.fn < b.fn ? -1 : 1;
        if (a.parts.size() != b.parts.size())
          return a.parts.size() < b.parts.size() ? -1 : 1;
        for (size_t i = 0; i < a.parts.size(); ++i)
          if (int c = three_way(a.parts[i], b.parts[i])) return c;
        return 0;
      }
      const auto& ta = *a.tuples;
      const auto& tb = *b.tuples;
      if (ta.size() != tb.size()) return ta.size() < tb.size() ? -1 : 1;
      for (size_t i = 0; i < ta.size(); ++i)
        if (int c = three_way_tuple(ta[i], tb[i])) return c;
      return 0;
    }
  }
  return 0;
}

}  // namespace

bool SemValue::operator<(const SemValue& o) const {
  return three_way(*this, o) < 0;
}
bool SemValue::operator==(const SemValue& o) const {
  return three_way(*this, o) == 0;
}
bool GraphTuple::operator<(const GraphTuple& o) const {
  return three_way_tuple(*this, o) < 0;
}
bool GraphTuple::operator==(const GraphTuple& o) const {
  return three_way_tuple(*this, o) == 0;
}

SemValue sem_base(Value data) {
  SemValue v;
  v.kind = SemValue::Kind::Base;
  v.base = std::move(data);
  return v;
}

SemValue sem_pair(SemValue l, SemValue r) {
  if (l.kind == SemValue::Kind::Base && r.kind == SemValue::Kind::Base)
    return sem_base(Value::pair(std::move(l.base), std::move(r.base)));
  SemValue v;
  v.kind = SemValue::Kind::Pair;
  v.parts = {std::move(l), std::move(r)};
  return v;
}

SemValue sem_graph(std::vector<GraphTuple> tuples) {
  std::sort(tuples.begin(), tuples.end());
  tuples.erase(std::unique(tuples.begin(), tuples.end()), tuples.end());
  SemValue v;
  v.kind = SemValue::Kind::Graph;
  v.tuples = std::make_shared<const std::vector<GraphTuple>>(std::move(tuples));
  return v;
}

SemValue sem_closure(std::string fn, std::vector<SemValue> prefix) {
  SemValue v;
  v.kind = SemValue::Kind::Graph;
  v.fn = std::move(fn);
  v.parts = std::move(prefix);
  return v;
}

std::string show_sem(const SemValue& v) {
  switch (v.kind) {
    case SemValue::Kind::Base:
      return show_value(v.base);
    case SemValue::Kind::Pair:
      return "(" + show_sem(v.parts[0]) + ", " + show_sem(v.parts[1]) + ")";
    case SemValue::Kind::Graph: {
      if (v.is_lazy_graph()) {
        std::string out = "<" + v.fn;
        for (auto& a : v.parts) out += " " + show_sem(a);
        return out + ">";
      }
      std::string out = "{";
      bool first = true;
      for (auto& t : *v.tuples) {
        if (!first) out += ", ";
        first = false;
        out += "(";
        for (auto& a : t.args) out += show_sem(a) + " ";
        out += "-> " + show_sem(t.result) + ")";
      }
      return out + "}";
    }
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Universes.

namespace {

uint64_t sat_mul(uint64_t a, uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > UINT64_MAX / b) return UINT64_MAX;
  return a * b;
}

uint64_t sat_pow(uint64_t base, uint64_t exp) {
  uint64_t out = 1;
  for (uint64_t i = 0; i < exp; ++i) out = sat_mul(out, base);
  return out;
}

uint64_t universe_size(const DataUniverse& B, const TypePtr& t) {
  switch (t->kind) {
    case Type::Kind::Sort: {
      auto it = B.by_sort.find(t->sort);
      return it == B.by_sort.end() ? 0 : it->second.size();
    }
    case Type::Kind::Product:
      return sat_mul(universe_size(B, t->left), universe_size(B, t->right));
    case Type::Kind::Arrow: {
      uint64_t space = universe_size(B, final_result_type(t));
      for (auto& at : argument_types(t))
        space = sat_mul(space, universe_size(B, at));
      if (space >= 63) return UINT64_MAX;
      return uint64_t(1) << space;
    }
  }
  return 0;
}

// Every argument/result combination of an arrow type, in canonical order.
std::vector<GraphTuple> tuple_space(const DataUniverse& B, const Program& p,
                                    const std::vector<Value>& inputs,
                                    const TypePtr& t, uint64_t max_size);

std::vector<SemValue> materialize(const DataUniverse& B, const Program& p,
                                  const std::vector<Value>& inputs,
                                  const TypePtr& t, uint64_t max_size) {
  switch (t->kind) {
    case Type::Kind::Sort: {
      std::vector<SemValue> out;
      auto it = B.by_sort.find(t->sort);
      if (it != B.by_sort.end())
        for (auto& v : it->second) out.push_back(sem_base(v));
      return out;
    }
    case Type::Kind::Product: {
      std::vector<SemValue> out;
      for (auto& l : materialize(B, p, inputs, t->left, max_size))
        for (auto& r : materialize(B, p, inputs, t->right, max_size))
          out.push_back(sem_pair(l, r));
      if (out.size() > max_size)
        throw UniverseTooLarge("product interpretation has " +
                               std::to_string(out.size()) + " elements");
      return out;
    }
    case Type::Kind::Arrow: {
      std::vector<GraphTuple> space = tuple_space(B, p, inputs, t, max_size);
      if (space.size() >= 63 ||
          (uint64_t(1) << space.size()) > max_size)
        throw UniverseTooLarge("arrow interpretation of " + show_type(t) +
                               " exceeds the bound (tuple space " +
                               std::to_string(space.size()) + ")");
      std::vector<SemValue> out;
      for (uint64_t mask = 0; mask < (uint64_t(1) << space.size()); ++mask) {
        std::vector<GraphTuple> tuples;
        for (size_t i = 0; i < space.size(); ++i)
          if (mask & (uint64_t(1) << i)) tuples.push_back(space[i]);
        out.push_back(sem_graph(std::move(tuples)));
      }
      return out;
    }
  }
  return {};
}

std::vector<GraphTuple> tuple_space(const DataUniverse& B, const Program& p,
                                    const std::vector<Value>& inputs,
                                    const TypePtr& t, uint64_t max_size) {
  std::vector<std::vector<SemValue>> argu;
  for (auto& at : argument_types(t))
    argu.push_back(materialize(B, p, inputs, at, max_size));
  std::vector<SemValue> resu =
      materialize(B, p, inputs, final_result_type(t), max_size);
  std::vector<GraphTuple> out;
  std::vector<SemValue> combo(argu.size(), SemValue{});
  std::function<void(size_t)> rec = [&](size_t i) {
    if (i == argu.size()) {
      for (auto& r : resu) out.push_back({combo, r});
      return;
    }
    for (auto& a : argu[i]) {
      combo[i] = a;
      rec(i + 1);
    }
  };
  rec(0);
  if (out.size() > max_size)
    throw UniverseTooLarge("tuple space of " + show_type(t) + " has " +
                           std::to_string(out.size()) + " elements");
  return out;
}

}  // namespace

std::vector<SemValue> semantic_universe(const Program& p,
                                        const std::vector<Value>& inputs,
                                        const TypePtr& t, uint64_t max_size) {
  DataUniverse B = collect_B(p, inputs);
  return materialize(B, p, inputs, t, max_size);
}

uint64_t semantic_universe_size(const Program& p,
                                const std::vector<Value>& inputs,
                                const TypePtr& t) {
  DataUniverse B = collect_B(p, inputs);
  return universe_size(B, t);
}

// ---------------------------------------------------------------------------
// Normalization and preconditions.

namespace {

Program normalized(const Program& p) {
  if (!p.terminating)
    throw PreconditionViolation(
        "saturation requires the terminating pragma");
  Program q = p;
  std::vector<TypeError> errs = typecheck(q);
  if (!errs.empty())
    throw PreconditionViolation("program does not type-check: " +
                                errs.front().message);
  AnalysisReport cf = check_cons_free(q);
  if (!cf.pass())
    throw PreconditionViolation("program is not cons-free:\n" + cf.render());
  AnalysisReport imm = check_immutability(q, 1);
  if (!imm.pass())
    throw PreconditionViolation("program is not order-1 immutable:\n" +
                                imm.render());
  TransformTrace push = compose_pushdown(q);
  TransformTrace elim = eliminate_fvar_clauses(push.after);
  if (elim.failed) throw PreconditionViolation(elim.failure);
  Program r = elim.after;
  errs = typecheck(r);
  if (!errs.empty())
    throw PreconditionViolation(
        "normalized program does not type-check: " + errs.front().message);
  AnalysisReport oc = verify_order_collapsed(r);
  if (!oc.pass())
    throw PreconditionViolation(
        "program is not order-collapsed after normalization:\n" + oc.render());
  return r;
}

int expr_depth(const ExprPtr& e) {
  int d = 0;
  for (auto& c : expr_children(e)) d = std::max(d, expr_depth(c));
  return d + 1;
}

// T and N on an already-normalized program.
std::pair<uint64_t, uint64_t> t_n_of(const Program& q,
                                     const std::vector<Value>& inputs) {
  DataUniverse B = collect_B(q, inputs);
  uint64_t T = 1;
  for (auto& [name, ty] : q.functions)
    for (auto& at : argument_types(ty))
      if (type_order(at) == 0) T = std::max(T, universe_size(B, at));
  uint64_t arity = 1, depth = 1;
  for (auto& [name, ty] : q.functions)
    arity = std::max<uint64_t>(arity, q.arity(name));
  for (auto& c : q.clauses)
    depth = std::max<uint64_t>(depth, static_cast<uint64_t>(
                                          expr_depth(c.body)));
  uint64_t N = sat_mul(static_cast<uint64_t>(q.functions.size()),
                       sat_pow(T, 2 * arity * depth + 1));
  return {T, N};
}

// ---------------------------------------------------------------------------
// The demand-driven saturation engine. Judgements "call f args evaluates to
// o" live in a monotone table; lazy graphs stand for the maximal graph of a
// partially applied function, and in restricted mode partial applications
// instead draw explicit graphs from a pool, admitted only when every tuple
// is backed by a confirmed call.

struct Engine {
  const Program& p;
  bool restricted = false;
  const std::map<std::string, std::vector<SemValue>>* pools = nullptr;

  using Key = std::pair<std::string, std::vector<SemValue>>;
  using Set = std::set<SemValue>;
  using Env = std::map<std::string, SemValue>;

  std::map<Key, Set> table = {};
  std::set<Key> in_progress = {}, done = {};
  bool grew = false, saw_cycle = false;
  uint64_t statements = 0, rounds = 0;

  bool match_one(const PatternPtr& pat, const SemValue& v, Env& env) {
    switch (pat->kind) {
      case Pattern::Kind::Var:
        env[pat->name] = v;
        return true;
      case Pattern::Kind::Cons: {
        if (v.kind != SemValue::Kind::Base ||
            v.base.kind != Value::Kind::Cons || v.base.head != pat->name ||
            v.base.args.size() != pat->args.size())
          return false;
        for (size_t i = 0; i < pat->args.size(); ++i)
          if (!match_one(pat->args[i], sem_base(v.base.args[i]), env))
            return false;
        return true;
      }
      case Pattern::Kind::Pair: {
        SemValue l, r;
        if (v.kind == SemValue::Kind::Pair) {
          l = v.parts[0];
          r = v.parts[1];
        } else if (v.kind == SemValue::Kind::Base &&
                   v.base.kind == Value::Kind::Pair) {
          l = sem_base(v.base.args[0]);
          r = sem_base(v.base.args[1]);
        } else {
          return false;
        }
        return match_one(pat->args[0], l, env) &&
               match_one(pat->args[1], r, env);
      }
    }
    return false;
  }

  Set call(const std::string& f, const std::vector<SemValue>& args) {
    Key key{f, args};
    ++statements;
    Set& slot = table[key];
    if (in_progress.count(key)) {
      saw_cycle = true;
      return slot;
    }
    if (done.count(key)) return slot;
    in_progress.insert(key);
    Set out;
    for (size_t ci : p.clauses_of(f)) {
      const Clause& c = p.clauses[ci];
      Env env;
      bool ok = true;
      for (size_t i = 0; ok && i < c.patterns.size(); ++i)
        ok = match_one(c.patterns[i], args[i], env);
      if (!ok) continue;
      out = body(env, c.body);
      break;  // first matching clause only
    }
    in_progress.erase(key);
    done.insert(key);
    Set& cur = table[key];
    size_t before = cur.size();
    cur.insert(out.begin(), out.end());
    if (cur.size() != before) grew = true;
    return cur;
  }

  void cartesian(const std::vector<Set>& sets,
                 const std::function<void(const std::vector<SemValue>&)>& fn) {
    std::vector<SemValue> combo(sets.size(), SemValue{});
    std::function<void(size_t)> rec = [&](size_t i) {
      if (i == sets.size()) {
        fn(combo);
        return;
      }
      for (auto& v : sets[i]) {
        combo[i] = v;
        rec(i + 1);
      }
    };
    rec(0);
  }

  Set apply_graph(const SemValue& g, const std::vector<SemValue>& args) {
    if (args.empty()) return {g};
    if (g.is_lazy_graph()) {
      std::vector<SemValue> total = g.parts;
      total.insert(total.end(), args.begin(), args.end());
      size_t k = p.arity(g.fn);
      if (total.size() == k) return call(g.fn, total);
      if (total.size() < k) return {sem_closure(g.fn, std::move(total))};
      std::vector<SemValue> first(total.begin(),
                                  total.begin() + static_cast<long>(k));
      std::vector<SemValue> rest(total.begin() + static_cast<long>(k),
                                 total.end());
      Set out;
      for (auto& o : call(g.fn, first)) {
        Set more = apply_graph(o, rest);
        out.insert(more.begin(), more.end());
      }
      return out;
    }
    if (g.kind != SemValue::Kind::Graph) return {};
    Set out;
    std::vector<GraphTuple> residual;
    for (auto& t : *g.tuples) {
      if (t.args.size() < args.size()) continue;
      bool match = true;
      for (size_t i = 0; match && i < args.size(); ++i)
        match = t.args[i] == args[i];
      if (!match) continue;
      if (t.args.size() == args.size()) {
        out.insert(t.result);
      } else {
        residual.push_back(
            {std::vector<SemValue>(t.args.begin() +
                                       static_cast<long>(args.size()),
                                   t.args.end()),
             t.result});
      }
    }
    if (!residual.empty()) out.insert(sem_graph(std::move(residual)));
    return out;
  }

  // Every tuple of the explicit graph is backed by a confirmed call.
  bool backed(const SemValue& g, const std::string& f,
              const std::vector<SemValue>& prefix) {
    size_t remaining = p.arity(f) - prefix.size();
    for (auto& t : *g.tuples) {
      if (t.args.size() != remaining) return false;
      std::vector<SemValue> full = prefix;
      full.insert(full.end(), t.args.begin(), t.args.end());
      Set results = call(f, full);
      if (!results.count(t.result)) return false;
    }
    return true;
  }

  Set partial_application(const std::string& f,
                          const std::vector<SemValue>& args,
                          const TypePtr& ty) {
    if (!restricted) return {sem_closure(f, args)};
    auto it = ty ? pools->find(show_type(ty)) : pools->end();
    if (it == pools->end()) return {sem_closure(f, args)};
    Set out;
    for (auto& g : it->second) {
      ++statements;
      if (backed(g, f, args)) out.insert(g);
    }
    return out;
  }

  Set body(const Env& env, const ExprPtr& e) {
    ++statements;
    switch (e->kind) {
      case Expr::Kind::Var:
        return {env.at(e->name)};
      case Expr::Kind::ConsApp: {
        std::vector<Set> argsets;
        for (auto& a : e->args) argsets.push_back(body(env, a));
        Set out;
        cartesian(argsets, [&](const std::vector<SemValue>& combo) {
          std::vector<Value> vals;
          for (auto& s : combo) {
            if (s.kind != SemValue::Kind::Base) return;
            vals.push_back(s.base);
          }
          out.insert(sem_base(Value::cons(e->name, std::move(vals))));
        });
        return out;
      }
      case Expr::Kind::Pair: {
        Set out;
        for (auto& l : body(env, e->args[0]))
          for (auto& r : body(env, e->args[1])) out.insert(sem_pair(l, r));
        return out;
      }
      case Expr::Kind::If: {
        Set out;
        for (auto& c : body(env, e->args[0])) {
          if (c.kind != SemValue::Kind::Base) continue;
          if (c.base == Value::cons("true")) {
            Set t = body(env, e->args[1]);
            out.insert(t.begin(), t.end());
          } else if (c.base == Value::cons("false")) {
            Set f = body(env, e->args[2]);
            out.insert(f.begin(), f.end());
          }
        }
        return out;
      }
      case Expr::Kind::Choose: {
        Set out;
        for (auto& a : e->args) {
          Set s = body(env, a);
          out.insert(s.begin(), s.end());
        }
        return out;
      }
      case Expr::Kind::FunApp: {
        size_t k = p.arity(e->name);
        std::vector<Set> argsets;
        for (auto& a : e->args) argsets.push_back(body(env, a));
        Set out;
        cartesian(argsets, [&](const std::vector<SemValue>& combo) {
          if (combo.size() == k) {
            Set s = call(e->name, combo);
            out.insert(s.begin(), s.end());
          } else if (combo.size() < k) {
            Set s = partial_application(e->name, combo, e->type);
            out.insert(s.begin(), s.end());
          } else {
            std::vector<SemValue> first(combo.begin(),
                                        combo.begin() + static_cast<long>(k));
            std::vector<SemValue> rest(combo.begin() + static_cast<long>(k),
                                       combo.end());
            for (auto& o : call(e->name, first)) {
              Set s = apply_graph(o, rest);
              out.insert(s.begin(), s.end());
            }
          }
        });
        return out;
      }
      case Expr::Kind::App: {
        std::vector<Set> argsets;
        for (auto& a : e->args) argsets.push_back(body(env, a));
        Set heads = body(env, e->head);
        Set out;
        cartesian(argsets, [&](const std::vector<SemValue>& combo) {
          for (auto& g : heads) {
            Set s = apply_graph(g, combo);
            out.insert(s.begin(), s.end());
          }
        });
        return out;
      }
    }
    return {};
  }

  std::set<Value> run(const std::vector<Value>& inputs) {
    if (inputs.size() != p.arity(p.main))
      throw PreconditionViolation("main expects " +
                                  std::to_string(p.arity(p.main)) +
                                  " inputs, got " +
                                  std::to_string(inputs.size()));
    std::vector<SemValue> sargs;
    for (auto& v : inputs) sargs.push_back(sem_base(v));
    Set final;
    do {
      grew = false;
      saw_cycle = false;
      done.clear();
      final = call(p.main, sargs);
      ++rounds;
    } while (saw_cycle && grew);
    std::set<Value> out;
    for (auto& s : final)
      if (s.kind == SemValue::Kind::Base) out.insert(s.base);
    return out;
  }
};

void fill_stats(SaturateStats* stats, const Engine& eng, const Program& q,
                const std::vector<Value>& inputs) {
  if (!stats) return;
  stats->statements += eng.statements;
  stats->iterations += eng.rounds;
  auto [T, N] = t_n_of(q, inputs);
  stats->T = T;
  stats->N = N;
}

}  // namespace

// ---------------------------------------------------------------------------

std::set<Value> saturate(const Program& p, const std::vector<Value>& inputs,
                         SaturateStats* stats) {
  Program q = normalized(p);
  Engine eng{q};
  std::set<Value> out = eng.run(inputs);
  fill_stats(stats, eng, q, inputs);
  return out;
}

std::pair<uint64_t, uint64_t> compute_T_N(const Program& p,
                                          const std::vector<Value>& inputs) {
  Program q = normalized(p);
  return t_n_of(q, inputs);
}

namespace {

// Arrow types of non-variable higher-typed body subexpressions: the places
// where the restricted algorithm substitutes pooled graphs.
void collect_arrow_types(const ExprPtr& e,
                         std::map<std::string, TypePtr>& out) {
  if (e->kind != Expr::Kind::Var && e->type &&
      e->type->kind == Type::Kind::Arrow && type_order(e->type) >= 1)
    out.emplace(show_type(e->type), e->type);
  for (auto& c : expr_children(e)) collect_arrow_types(c, out);
}

}  // namespace

std::set<Value> np_saturate(const Program& p, const std::vector<Value>& inputs,
                            const NpMode& mode, SaturateStats* stats) {
  Program q = normalized(p);
  auto [T, N] = t_n_of(q, inputs);

  std::map<std::string, TypePtr> arrow_types;
  for (auto& c : q.clauses) collect_arrow_types(c.body, arrow_types);

  DataUniverse B = collect_B(q, inputs);
  std::set<Value> out;
  uint64_t trials = mode.kind == NpMode::Kind::Seeded ? mode.trials : 1;
  for (uint64_t trial = 0; trial < trials; ++trial) {
    std::map<std::string, std::vector<SemValue>> pools;
    uint64_t type_index = 0;
    for (auto& [key, ty] : arrow_types) {
      ++type_index;
      if (mode.kind == NpMode::Kind::Exhaustive) {
        pools[key] = materialize(B, q, inputs, ty, mode.cap);
      } else {
        std::vector<GraphTuple> space =
            tuple_space(B, q, inputs, ty, mode.cap);
        uint64_t count = std::min<uint64_t>(N, mode.cap);
        std::set<SemValue> pool;
        for (uint64_t g = 0; g < count; ++g) {
          std::seed_seq seq{mode.seed, trial, type_index, g};
          std::mt19937_64 rng(seq);
          std::vector<GraphTuple> tuples;
          for (auto& t : space)
            if (rng() & 1) tuples.push_back(t);
          pool.insert(sem_graph(std::move(tuples)));
        }
        pools[key].assign(pool.begin(), pool.end());
      }
      if (stats) stats->pool_sizes[key] = pools[key].size();
    }
    Engine eng{q, true, &pools};
    std::set<Value> one = eng.run(inputs);
    out.insert(one.begin(), one.end());
    if (stats) {
      stats->statements += eng.statements;
      stats->iterations += eng.rounds;
    }
  }
  if (stats) {
    stats->T = T;
    stats->N = N;
  }
  return out;
}

}  // namespace consfree
