#include "consfree/tmcompile.hpp"

#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "consfree/analysis.hpp"
#include "consfree/printer.hpp"

namespace consfree {

// ---------------------------------------------------------------------------
// Digit width.

namespace {

using int128 = __int128;

int128 pow_capped(int128 base, uint64_t exp) {
  const int128 cap = int128(1) << 120;
  int128 out = 1;
  for (uint64_t i = 0; i < exp; ++i) {
    out *= base;
    if (out > cap) return cap;
  }
  return out;
}

}  // namespace

int digit_width(const StepPolynomial& h) {
  if (h.a < 1) throw std::invalid_argument("step polynomial: a must be >= 1");
  if (h.a > 1024 || h.b > 64)
    throw std::invalid_argument("step polynomial out of supported range");
  for (int k = std::max<int>(1, static_cast<int>(h.b));; ++k) {
    // For k >= b+1 and n > 10^6 the ratio (n+1)^k / n^b is at least n+1,
    // which exceeds a; for k == b the bound only holds for all n when a = 1.
    if (static_cast<uint64_t>(k) == h.b && h.a != 1) continue;
    bool ok = true;
    for (uint64_t n = 1; n <= 1'000'000 && ok; ++n)
      ok = pow_capped(static_cast<int128>(n) + 1, static_cast<uint64_t>(k)) >
           static_cast<int128>(h.a) * pow_capped(static_cast<int128>(n), h.b);
    if (ok) return k;
  }
}

// ---------------------------------------------------------------------------
// Shared expression-building helpers.

namespace {

ExprPtr V(const std::string& n) { return make_var(n); }
ExprPtr Cn(const std::string& n, std::vector<ExprPtr> a = {}) {
  return make_cons(n, std::move(a));
}
ExprPtr Fn(const std::string& n, std::vector<ExprPtr> a = {}) {
  return make_fun(n, std::move(a));
}

const TypePtr kList = sort_type("list");
const TypePtr kBool = sort_type("bool");

TypePtr arrows(std::vector<TypePtr> args, TypePtr result) {
  TypePtr t = std::move(result);
  for (auto it = args.rbegin(); it != args.rend(); ++it)
    t = arrow_type(*it, t);
  return t;
}

// Right-nested k-tuple of lists; k = 1 degenerates to list itself.
TypePtr tuple_type(int k) {
  if (k == 1) return kList;
  return product_type(kList, tuple_type(k - 1));
}

ExprPtr tuple_expr(const std::vector<ExprPtr>& parts) {
  ExprPtr out = parts.back();
  for (size_t i = parts.size() - 1; i-- > 0;)
    out = make_pair(parts[i], out);
  return out;
}

PatternPtr tuple_pattern(const std::vector<PatternPtr>& parts) {
  PatternPtr out = parts.back();
  for (size_t i = parts.size() - 1; i-- > 0;)
    out = make_ppair(parts[i], out);
  return out;
}

std::string dname(const std::string& stem, int i) {
  return stem + std::to_string(i);
}

std::vector<PatternPtr> digit_pvars(const std::string& stem, int k) {
  std::vector<PatternPtr> out;
  for (int i = 1; i <= k; ++i) out.push_back(make_pvar(dname(stem, i)));
  return out;
}

ExprPtr repeated_tuple(const ExprPtr& part, int k) {
  std::vector<ExprPtr> parts;
  for (int i = 0; i < k; ++i) parts.push_back(clone_expr(part));
  return tuple_expr(parts);
}

void add_clause(CountingKit& kit, const std::string& fn,
                std::vector<PatternPtr> ps, ExprPtr body) {
  kit.clauses.push_back({fn, std::move(ps), std::move(body), {}});
}

// Successor of the digit tuple d1..dk assuming digits i+1..k are maximal
// (they roll over to zero). i = 0 means the whole number was maximal and
// the result saturates at the maximum.
ExprPtr succ_body(int k, int i) {
  if (i == 0) return repeated_tuple(V("cs"), k);
  std::vector<ExprPtr> parts;
  for (int j = 1; j < i; ++j) parts.push_back(V(dname("d", j)));
  parts.push_back(Fn("sufsucc", {V("cs"), V(dname("d", i))}));
  for (int j = i + 1; j <= k; ++j) parts.push_back(Cn("nil"));
  return make_if(Fn("eqlen", {V(dname("d", i)), V("cs")}), succ_body(k, i - 1),
                 tuple_expr(parts));
}

// Predecessor assuming digits i+1..k are zero (they roll over to maximal);
// i = 0 means the whole number was zero and the result saturates at zero.
ExprPtr pred_body(int k, int i) {
  if (i == 0) return repeated_tuple(Cn("nil"), k);
  std::vector<ExprPtr> parts;
  for (int j = 1; j < i; ++j) parts.push_back(V(dname("d", j)));
  parts.push_back(Fn("dtail", {V(dname("d", i))}));
  for (int j = i + 1; j <= k; ++j) parts.push_back(V("cs"));
  return make_if(Fn("isnil", {V(dname("d", i))}), pred_body(k, i - 1),
                 tuple_expr(parts));
}

// Digit-wise conjunction folded into nested ifs; innermost test is at k.
ExprPtr conj_body(int k, int i, const std::function<ExprPtr(int)>& test) {
  if (i == k) return test(k);
  return make_if(test(i), conj_body(k, i + 1, test), Cn("false"));
}

}  // namespace

// ---------------------------------------------------------------------------
// Order-0 counting kit: numbers 0 .. (n+1)^k - 1 as k-tuples of suffixes of
// the input list cs (a digit with value v is the suffix of length v).

CountingKit gen_counting_order0(int k, const StepPolynomial& h) {
  if (k < 1) throw std::invalid_argument("gen_counting_order0: k must be >= 1");
  if (h.a < 1 || h.a > 1024 || h.b > 64)
    throw std::invalid_argument("step polynomial out of supported range");

  CountingKit kit;
  kit.order = 0;
  kit.width = k;
  const TypePtr num = tuple_type(k);
  kit.number_type = num;

  kit.functions = {
      {"eqlen", arrows({kList, kList}, kBool)},
      {"isnil", arrows({kList}, kBool)},
      {"dtail", arrows({kList}, kList)},
      {"sufsucc", arrows({kList, kList}, kList)},
      {"iszero", arrows({num}, kBool)},
      {"numeq", arrows({num, num}, kBool)},
      {"succnum", arrows({kList, num}, num)},
      {"prednum", arrows({kList, num}, num)},
      {"addnum", arrows({kList, num, num}, num)},
      {"mulnum", arrows({kList, num, num}, num)},
      {"hval", arrows({kList}, num)},
  };

  auto pv = [](const std::string& n) { return make_pvar(n); };
  auto pc = [](const std::string& n, std::vector<PatternPtr> a =
                                         std::vector<PatternPtr>{}) {
    return make_pcons(n, std::move(a));
  };
  auto pcons_cell = [&](const std::string& hd, const std::string& tl) {
    return pc("::", {pv(hd), pv(tl)});
  };

  add_clause(kit, "eqlen", {pc("nil"), pc("nil")}, Cn("true"));
  add_clause(kit, "eqlen", {pc("nil"), pcons_cell("y", "ys")}, Cn("false"));
  add_clause(kit, "eqlen", {pcons_cell("x", "xs"), pc("nil")}, Cn("false"));
  add_clause(kit, "eqlen", {pcons_cell("x", "xs"), pcons_cell("y", "ys")},
             Fn("eqlen", {V("xs"), V("ys")}));
  add_clause(kit, "isnil", {pc("nil")}, Cn("true"));
  add_clause(kit, "isnil", {pcons_cell("x", "xs")}, Cn("false"));
  add_clause(kit, "dtail", {pc("nil")}, Cn("nil"));
  add_clause(kit, "dtail", {pcons_cell("x", "xs")}, V("xs"));
  add_clause(kit, "sufsucc", {pc("nil"), pv("l")}, Cn("nil"));
  add_clause(kit, "sufsucc", {pcons_cell("x", "xs"), pv("l")},
             make_if(Fn("eqlen", {V("xs"), V("l")}),
                     Cn("::", {V("x"), V("xs")}),
                     Fn("sufsucc", {V("xs"), V("l")})));

  add_clause(kit, "iszero", {tuple_pattern(digit_pvars("d", k))},
             conj_body(k, 1, [](int i) {
               return Fn("isnil", {V(dname("d", i))});
             }));
  add_clause(kit, "numeq",
             {tuple_pattern(digit_pvars("a", k)),
              tuple_pattern(digit_pvars("b", k))},
             conj_body(k, 1, [](int i) {
               return Fn("eqlen", {V(dname("a", i)), V(dname("b", i))});
             }));
  add_clause(kit, "succnum", {pv("cs"), tuple_pattern(digit_pvars("d", k))},
             succ_body(k, k));
  add_clause(kit, "prednum", {pv("cs"), tuple_pattern(digit_pvars("d", k))},
             pred_body(k, k));
  add_clause(kit, "addnum", {pv("cs"), pv("x"), pv("y")},
             make_if(Fn("iszero", {V("y")}), V("x"),
                     Fn("addnum", {V("cs"), Fn("succnum", {V("cs"), V("x")}),
                                   Fn("prednum", {V("cs"), V("y")})})));
  add_clause(kit, "mulnum", {pv("cs"), pv("x"), pv("y")},
             make_if(Fn("iszero", {V("y")}), repeated_tuple(Cn("nil"), k),
                     Fn("addnum", {V("cs"), V("x"),
                                   Fn("mulnum", {V("cs"), V("x"),
                                                 Fn("prednum",
                                                    {V("cs"), V("y")})})})));

  // h(|cs|) = a * |cs|^b with |cs| as the tuple (0,...,0,cs).
  {
    std::vector<ExprPtr> nparts;
    for (int i = 1; i < k; ++i) nparts.push_back(Cn("nil"));
    nparts.push_back(V("cs"));
    auto nrep = [&]() { return clone_expr(tuple_expr(nparts)); };
    ExprPtr pow;
    if (h.b == 0) {
      pow = Fn("succnum", {V("cs"), repeated_tuple(Cn("nil"), k)});
    } else {
      pow = nrep();
      for (uint64_t i = 1; i < h.b; ++i)
        pow = Fn("mulnum", {V("cs"), nrep(), pow});
    }
    ExprPtr sum = pow;
    for (uint64_t i = 1; i < h.a; ++i)
      sum = Fn("addnum", {V("cs"), clone_expr(pow), sum});
    add_clause(kit, "hval", {pv("cs")}, sum);
  }

  kit.zero = [k]() { return repeated_tuple(Cn("nil"), k); };
  kit.h_literal = [](ExprPtr cs) { return Fn("hval", {std::move(cs)}); };
  kit.is_zero = [](ExprPtr, ExprPtr x) {
    return Fn("iszero", {std::move(x)});
  };
  kit.succ = [](ExprPtr cs, ExprPtr x) {
    return Fn("succnum", {std::move(cs), std::move(x)});
  };
  kit.pred = [](ExprPtr cs, ExprPtr x) {
    return Fn("prednum", {std::move(cs), std::move(x)});
  };
  kit.equal = [](ExprPtr, ExprPtr a, ExprPtr b) {
    return Fn("numeq", {std::move(a), std::move(b)});
  };
  return kit;
}

// ---------------------------------------------------------------------------
// Order-1 counting kit: numbers 0 .. 2^((n+1)^k) - 1 as functions from the
// order-0 index space to bool; index 0 is the least significant bit.

CountingKit gen_counting_order1(int k, const StepPolynomial& h) {
  CountingKit kit = gen_counting_order0(k, h);
  kit.order = 1;
  const TypePtr idx = kit.number_type;
  const TypePtr num = arrow_type(idx, kBool);
  kit.number_type = num;

  for (auto& f : std::vector<std::pair<std::string, TypePtr>>{
           {"notb", arrows({kBool}, kBool)},
           {"eqb", arrows({kBool, kBool}, kBool)},
           {"nul", arrows({idx}, kBool)},
           {"maxnum", arrows({kList}, idx)},
           {"lowset", arrows({kList, num, idx}, kBool)},
           {"succ1", arrows({kList, num, idx}, kBool)},
           {"lowclear", arrows({kList, num, idx}, kBool)},
           {"pred1", arrows({kList, num, idx}, kBool)},
           {"nobits", arrows({kList, num, idx}, kBool)},
           {"iszero1", arrows({kList, num}, kBool)},
           {"eqbits", arrows({kList, num, num, idx}, kBool)},
           {"numeq1", arrows({kList, num, num}, kBool)},
           {"hlit1", arrows({kList, idx}, kBool)},
       })
    kit.functions.push_back(f);

  auto pv = [](const std::string& n) { return make_pvar(n); };
  auto pred0 = [](ExprPtr x) {
    return Fn("prednum", {V("cs"), std::move(x)});
  };

  add_clause(kit, "notb", {make_pcons("true", {})}, Cn("false"));
  add_clause(kit, "notb", {make_pcons("false", {})}, Cn("true"));
  add_clause(kit, "eqb", {pv("x"), pv("y")},
             make_if(V("x"), V("y"), Fn("notb", {V("y")})));
  add_clause(kit, "nul", {pv("j")}, Cn("false"));
  add_clause(kit, "maxnum", {pv("cs")},
             repeated_tuple(V("cs"), kit.width));

  // bit j of succ flips iff every lower bit is set; of pred iff every
  // lower bit is clear
  add_clause(kit, "lowset", {pv("cs"), pv("F"), pv("j")},
             make_if(Fn("iszero", {V("j")}), Cn("true"),
                     make_if(make_app(V("F"), {pred0(V("j"))}),
                             Fn("lowset", {V("cs"), V("F"), pred0(V("j"))}),
                             Cn("false"))));
  add_clause(kit, "succ1", {pv("cs"), pv("F"), pv("j")},
             make_if(Fn("lowset", {V("cs"), V("F"), V("j")}),
                     Fn("notb", {make_app(V("F"), {V("j")})}),
                     make_app(V("F"), {V("j")})));
  add_clause(kit, "lowclear", {pv("cs"), pv("F"), pv("j")},
             make_if(Fn("iszero", {V("j")}), Cn("true"),
                     make_if(make_app(V("F"), {pred0(V("j"))}), Cn("false"),
                             Fn("lowclear",
                                {V("cs"), V("F"), pred0(V("j"))}))));
  add_clause(kit, "pred1", {pv("cs"), pv("F"), pv("j")},
             make_if(Fn("lowclear", {V("cs"), V("F"), V("j")}),
                     Fn("notb", {make_app(V("F"), {V("j")})}),
                     make_app(V("F"), {V("j")})));
  add_clause(kit, "nobits", {pv("cs"), pv("F"), pv("j")},
             make_if(make_app(V("F"), {V("j")}), Cn("false"),
                     make_if(Fn("iszero", {V("j")}), Cn("true"),
                             Fn("nobits", {V("cs"), V("F"), pred0(V("j"))}))));
  add_clause(kit, "iszero1", {pv("cs"), pv("F")},
             Fn("nobits", {V("cs"), V("F"), Fn("maxnum", {V("cs")})}));
  add_clause(kit, "eqbits", {pv("cs"), pv("F"), pv("G"), pv("j")},
             make_if(Fn("eqb", {make_app(V("F"), {V("j")}),
                                make_app(V("G"), {V("j")})}),
                     make_if(Fn("iszero", {V("j")}), Cn("true"),
                             Fn("eqbits",
                                {V("cs"), V("F"), V("G"), pred0(V("j"))})),
                     Cn("false")));
  add_clause(kit, "numeq1", {pv("cs"), pv("F"), pv("G")},
             Fn("eqbits", {V("cs"), V("F"), V("G"), Fn("maxnum", {V("cs")})}));
  // the step bound as a bit value: only bit number a*n^b is set
  add_clause(kit, "hlit1", {pv("cs"), pv("j")},
             Fn("numeq", {V("j"), Fn("hval", {V("cs")})}));

  kit.zero = []() { return Fn("nul"); };
  kit.h_literal = [](ExprPtr cs) { return Fn("hlit1", {std::move(cs)}); };
  kit.is_zero = [](ExprPtr cs, ExprPtr x) {
    return Fn("iszero1", {std::move(cs), std::move(x)});
  };
  kit.succ = [](ExprPtr cs, ExprPtr x) {
    return Fn("succ1", {std::move(cs), std::move(x)});
  };
  kit.pred = [](ExprPtr cs, ExprPtr x) {
    return Fn("pred1", {std::move(cs), std::move(x)});
  };
  kit.equal = [](ExprPtr cs, ExprPtr a, ExprPtr b) {
    return Fn("numeq1", {std::move(cs), std::move(a), std::move(b)});
  };
  return kit;
}

// ---------------------------------------------------------------------------
// The machine-simulation emitter.

namespace {

const char* const kEmittedFunctions[] = {
    "run",  "test", "rndf",    "rnf",     "cst",  "cmp",       "transition",
    "transat", "get1", "get2", "get3",    "stateat", "tapesymb", "pos",
    "adjust",  "tape", "tapehelp", "inputtape", "nth", "bit"};

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s)
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
            c == '\'')
               ? c
               : '_';
  if (out.empty()) out = "c";
  return out;
}

}  // namespace

Program compile_machine(const IndexedMachine& im, const StepPolynomial& h,
                        int immutability_order) {
  if (immutability_order != 0 && immutability_order != 1)
    throw std::invalid_argument("immutability order must be 0 or 1");
  AnalysisReport valid = validate_machine(im.base);
  if (!valid.pass())
    throw std::invalid_argument("invalid machine:\n" + valid.render());

  const int k = digit_width(h);
  CountingKit kit = immutability_order == 0 ? gen_counting_order0(k, h)
                                            : gen_counting_order1(k, h);

  Program p = base_program();
  p.terminating = true;
  for (const char* s : {"symbol", "direc", "state", "trans", "option"})
    p.sorts.push_back(s);

  std::set<std::string> taken = {
      "true", "false", "nil",  "::",   "sort",   "cons",   "fun",
      "if",   "then",  "else", "choose", "bool", "list",   "symbol",
      "direc", "state", "trans", "option"};
  for (const char* f : kEmittedFunctions) taken.insert(f);
  for (auto& [f, ty] : kit.functions) taken.insert(f);

  auto alloc = [&taken](const std::string& want) {
    std::string name = sanitize(want);
    while (taken.count(name)) name += "'";
    taken.insert(name);
    return name;
  };

  const TypePtr symT = sort_type("symbol");
  const TypePtr dirT = sort_type("direc");
  const TypePtr stT = sort_type("state");
  const TypePtr trT = sort_type("trans");
  const TypePtr optT = sort_type("option");
  const TypePtr num = kit.number_type;
  const TypePtr seqT = arrow_type(num, optT);  // option sequence H

  const std::string cL = alloc("L"), cR = alloc("R");
  const std::string cAction = alloc("action"), cEnd = alloc("end");
  std::map<std::string, std::string> sym, st;
  for (auto& s : im.base.symbols) sym[s] = alloc(s == "_" ? "B" : s);
  for (auto& s : im.base.states) st[s] = alloc(s);
  std::vector<std::string> opts;
  for (int i = 1; i <= im.fan_out; ++i)
    opts.push_back(alloc("ch_" + std::to_string(i)));

  for (auto& s : im.base.symbols)
    p.constructors.emplace_back(sym.at(s), symT);
  p.constructors.emplace_back(cL, dirT);
  p.constructors.emplace_back(cR, dirT);
  for (auto& s : im.base.states) p.constructors.emplace_back(st.at(s), stT);
  p.constructors.emplace_back(cAction, arrows({symT, dirT, stT}, trT));
  p.constructors.emplace_back(cEnd, arrows({stT}, trT));
  for (auto& o : opts) p.constructors.emplace_back(o, optT);

  p.main = "run";
  p.functions = {
      {"run", arrows({kList}, kBool)},
      {"test", arrows({stT}, kBool)},
      {"rndf", arrows({kList, num, num}, optT)},
      {"rnf", arrows({kList, optT, num, num}, optT)},
      {"cst", arrows({optT, num}, optT)},
      {"cmp", arrows({kList, optT, seqT, num, num}, optT)},
      {"transition", arrows({stT, symT, optT}, trT)},
      {"transat", arrows({kList, seqT, num}, trT)},
      {"get1", arrows({trT}, symT)},
      {"get2", arrows({trT}, dirT)},
      {"get3", arrows({trT}, stT)},
      {"stateat", arrows({kList, seqT, num}, stT)},
      {"tapesymb", arrows({kList, seqT, num}, symT)},
      {"pos", arrows({kList, seqT, num}, num)},
      {"adjust", arrows({kList, num, dirT}, num)},
      {"tape", arrows({kList, seqT, num, num}, symT)},
      {"tapehelp", arrows({kList, seqT, num, num, num}, symT)},
      {"inputtape", arrows({kList, num}, symT)},
      {"nth", arrows({kList, kList, num}, symT)},
      {"bit", arrows({kBool}, symT)},
  };
  for (auto& f : kit.functions) p.functions.push_back(f);

  auto pv = [](const std::string& n) { return make_pvar(n); };
  auto pc = [](const std::string& n) {
    return make_pcons(n, {});
  };
  auto cs = []() { return V("cs"); };
  auto pred_n = [&](ExprPtr x) { return kit.pred(cs(), std::move(x)); };
  auto zero_n = [&](ExprPtr x) { return kit.is_zero(cs(), std::move(x)); };
  auto add = [&p](const std::string& fn, std::vector<PatternPtr> ps,
                  ExprPtr body) {
    p.clauses.push_back({fn, std::move(ps), std::move(body), {}});
  };

  // run cs = test (stateat cs (rndf cs h) h)
  add("run", {pv("cs")},
      Fn("test", {Fn("stateat", {cs(), Fn("rndf", {cs(), kit.h_literal(cs())}),
                                 kit.h_literal(cs())})}));
  add("test", {pc(st.at("accept"))}, Cn("true"));
  add("test", {pv("q")}, Cn("false"));

  // nondeterministic option sequence of length h+1
  {
    std::vector<ExprPtr> alts;
    for (auto& o : opts) alts.push_back(Cn(o));
    add("rndf", {pv("cs"), pv("n")},
        Fn("rnf", {cs(), make_choose(std::move(alts)), V("n")}));
  }
  add("rnf", {pv("cs"), pv("x"), pv("n")},
      make_if(zero_n(V("n")), Fn("cst", {V("x")}),
              Fn("cmp", {cs(), V("x"), Fn("rndf", {cs(), pred_n(V("n"))}),
                         V("n")})));
  add("cst", {pv("x"), pv("i")}, V("x"));
  add("cmp", {pv("cs"), pv("x"), pv("H"), pv("n"), pv("i")},
      make_if(kit.equal(cs(), V("n"), V("i")), V("x"),
              make_app(V("H"), {V("i")})));

  // indexed transition table; terminal states absorb, missing rows reject
  for (auto& row : im.rows)
    add("transition",
        {pc(st.at(row.t.from)), pc(sym.at(row.t.read)),
         pc(opts.at(static_cast<size_t>(row.option) - 1))},
        Cn(cAction, {Cn(sym.at(row.t.write)),
                     Cn(row.t.dir == 'L' ? cL : cR), Cn(st.at(row.t.to))}));
  add("transition", {pc(st.at("accept")), pv("y"), pv("z")},
      Cn(cEnd, {Cn(st.at("accept"))}));
  add("transition", {pv("q"), pv("y"), pv("z")},
      Cn(cEnd, {Cn(st.at("reject"))}));

  add("transat", {pv("cs"), pv("H"), pv("n")},
      Fn("transition", {Fn("stateat", {cs(), V("H"), V("n")}),
                        Fn("tapesymb", {cs(), V("H"), V("n")}),
                        make_app(V("H"), {V("n")})}));
  add("get1", {make_pcons(cAction, {pv("x"), pv("y"), pv("z")})}, V("x"));
  add("get1", {make_pcons(cEnd, {pv("x")})}, Cn(sym.at("_")));
  add("get2", {make_pcons(cAction, {pv("x"), pv("y"), pv("z")})}, V("y"));
  add("get2", {make_pcons(cEnd, {pv("x")})}, Cn(cR));
  add("get3", {make_pcons(cAction, {pv("x"), pv("y"), pv("z")})}, V("z"));
  add("get3", {make_pcons(cEnd, {pv("x")})}, V("x"));

  add("stateat", {pv("cs"), pv("H"), pv("n")},
      make_if(zero_n(V("n")), Cn(st.at("start")),
              Fn("get3", {Fn("transat", {cs(), V("H"), pred_n(V("n"))})})));
  add("tapesymb", {pv("cs"), pv("H"), pv("n")},
      Fn("tape", {cs(), V("H"), V("n"), Fn("pos", {cs(), V("H"), V("n")})}));
  add("pos", {pv("cs"), pv("H"), pv("n")},
      make_if(zero_n(V("n")), kit.zero(),
              Fn("adjust",
                 {cs(), Fn("pos", {cs(), V("H"), pred_n(V("n"))}),
                  Fn("get2", {Fn("transat",
                                 {cs(), V("H"), pred_n(V("n"))})})})));
  add("adjust", {pv("cs"), pv("q"), pc(cL)}, pred_n(V("q")));
  add("adjust", {pv("cs"), pv("q"), pc(cR)}, kit.succ(cs(), V("q")));
  add("tape", {pv("cs"), pv("H"), pv("n"), pv("q")},
      make_if(zero_n(V("n")), Fn("inputtape", {cs(), V("q")}),
              Fn("tapehelp", {cs(), V("H"), V("n"), V("q"),
                              Fn("pos", {cs(), V("H"), pred_n(V("n"))})})));
  add("tapehelp", {pv("cs"), pv("H"), pv("n"), pv("q"), pv("i")},
      make_if(kit.equal(cs(), V("q"), V("i")),
              Fn("get1", {Fn("transat", {cs(), V("H"), pred_n(V("n"))})}),
              Fn("tape", {cs(), V("H"), pred_n(V("n")), V("q")})));
  add("inputtape", {pv("cs"), pv("q")},
      make_if(zero_n(V("q")), Cn(sym.at("_")),
              Fn("nth", {cs(), cs(), pred_n(V("q"))})));
  add("nth", {pv("cs"), make_pcons("nil", {}), pv("q")}, Cn(sym.at("_")));
  add("nth", {pv("cs"), make_pcons("::", {pv("x"), pv("xs")}), pv("q")},
      make_if(zero_n(V("q")), Fn("bit", {V("x")}),
              Fn("nth", {cs(), V("xs"), pred_n(V("q"))})));
  add("bit", {pc("true")}, Cn(sym.at("1")));
  add("bit", {pc("false")}, Cn(sym.at("0")));

  for (auto& c : kit.clauses) p.clauses.push_back(c);

  std::vector<TypeError> errs = typecheck(p);
  if (!errs.empty())
    throw std::logic_error("emitted program fails to type-check: " +
                           errs.front().message);
  return p;
}

// ---------------------------------------------------------------------------
// Rendering with role comments.

std::string render_compiled(const Program& p) {
  static const std::map<std::string, std::string> roles = {
      {"run", "entry point: true iff the final state is accepting"},
      {"test", "final-state check"},
      {"rndf", "builds the option sequence, one nondeterministic choice per "
               "step"},
      {"rnf", "option-sequence spine; the zero branch wraps the last choice "
              "in a constant function to stay well typed"},
      {"cst", "constant option function"},
      {"cmp", "extends an option sequence by one indexed entry; lookups fall "
              "through to the tail sequence"},
      {"transition", "indexed transition table; terminal states absorb and "
                     "missing rows reject"},
      {"transat", "transition fired when leaving the given step"},
      {"get1", "projection: symbol written"},
      {"get2", "projection: head movement"},
      {"get3", "projection: next state"},
      {"stateat", "machine state after the given number of steps"},
      {"tapesymb", "symbol under the head"},
      {"pos", "head position after the given number of steps"},
      {"adjust", "head movement, saturating at both ends of the counter "
                 "range"},
      {"tape", "tape cell contents after the given number of steps"},
      {"tapehelp", "splits on whether the queried cell was just written"},
      {"inputtape", "initial tape: blank at position 0, then the input word"},
      {"nth", "input word lookup"},
      {"bit", "input bit as a tape symbol"},
  };
  std::ostringstream out;
  if (p.terminating) out << "# terminating\n";
  out << "# generated machine simulation; do not edit\n";
  for (size_t i = 2; i < p.sorts.size(); ++i)
    out << "sort " << p.sorts[i] << "\n";
  for (size_t i = 4; i < p.constructors.size(); ++i)
    out << "cons " << p.constructors[i].first << " : "
        << show_type(p.constructors[i].second) << "\n";
  for (auto& [name, ty] : p.functions)
    out << "fun " << name << " : " << show_type(ty) << "\n";
  std::string current;
  bool in_kit = false;
  for (auto& c : p.clauses) {
    if (c.function != current) {
      current = c.function;
      auto it = roles.find(current);
      if (it != roles.end()) {
        out << "# " << current << ": " << it->second << "\n";
      } else if (!in_kit) {
        out << "# bounded-counter arithmetic\n";
        in_kit = true;
      }
    }
    out << show_clause(c) << "\n";
  }
  return out.str();
}

}  // namespace consfree
