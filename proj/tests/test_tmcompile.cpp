#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>

#include "consfree/analysis.hpp"
#include "consfree/interp.hpp"
#include "consfree/parser.hpp"
#include "consfree/tmcompile.hpp"
#include "consfree/transform.hpp"
#include "consfree/turing.hpp"
#include "test_util.hpp"

using namespace consfree;

namespace {

uint64_t ipow(uint64_t b, uint64_t e) {
  uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

Machine load_tm(const std::string& name) {
  return parse_machine(testutil::slurp(std::string(MACHINE_DIR) + "/" + name));
}

// A test program wrapping counting clauses: main takes the input list plus
// `extra` number-typed arguments and returns `result`.
Program harness(const CountingKit& kit, int extra, TypePtr result,
                ExprPtr body) {
  Program p = base_program();
  TypePtr main_ty = result;
  for (int i = 0; i < extra; ++i) main_ty = arrow_type(kit.number_type, main_ty);
  main_ty = arrow_type(sort_type("list"), main_ty);
  p.functions.emplace_back("main", main_ty);
  for (const auto& f : kit.functions) p.functions.push_back(f);
  p.main = "main";
  p.terminating = true;
  Clause mc;
  mc.function = "main";
  mc.patterns.push_back(make_pvar("cs"));
  const char* names[] = {"x", "y"};
  for (int i = 0; i < extra; ++i) mc.patterns.push_back(make_pvar(names[i]));
  mc.body = body;
  p.clauses.push_back(mc);
  for (const auto& c : kit.clauses) p.clauses.push_back(c);
  auto errs = typecheck(p);
  REQUIRE(errs.empty());
  return p;
}

Value eval(const Program& p, const std::vector<Value>& inputs) {
  auto r = evaluate_one(p, inputs, {}, 10'000'000);
  REQUIRE(r.status == EvalStatus::Ok);
  return r.value;
}

// The tuple encoding of number i for input word `word` and width k:
// base-(n+1) digits, most significant first, each digit v the length-v
// suffix of the input.
Value rep0(const std::string& word, int k, uint64_t i) {
  uint64_t base = word.size() + 1;
  std::vector<Value> digits(k);
  for (int d = k - 1; d >= 0; --d) {
    uint64_t v = i % base;
    i /= base;
    digits[d] = data_from_bits(word.substr(word.size() - v));
  }
  Value out = digits[k - 1];
  for (int d = k - 2; d >= 0; --d) out = Value::pair(digits[d], out);
  return out;
}

ExprPtr cs() { return make_var("cs"); }

ExprPtr succ_chain(const CountingKit& kit, uint64_t i) {
  ExprPtr e = kit.zero();
  while (i--) e = kit.succ(cs(), e);
  return e;
}

bool eval_bool(const CountingKit& kit, ExprPtr body, const std::string& word) {
  Program p = harness(kit, 0, sort_type("bool"), body);
  Value v = eval(p, {data_from_bits(word)});
  REQUIRE(v.kind == Value::Kind::Cons);
  REQUIRE((v.head == "true" || v.head == "false"));
  return v.head == "true";
}

}  // namespace

TEST_CASE("digit width on hand-checked bounds") {
  CHECK(digit_width({1, 1}) == 1);
  CHECK(digit_width({4, 2}) == 3);
  CHECK(digit_width({1, 0}) == 1);
  CHECK(digit_width({2, 1}) == 2);
  CHECK(digit_width({1, 2}) == 2);
  CHECK(digit_width({2, 2}) == 3);
}

TEST_CASE("digit width satisfies its defining inequality") {
  for (StepPolynomial h :
       {StepPolynomial{1, 1}, StepPolynomial{4, 2}, StepPolynomial{2, 1},
        StepPolynomial{10, 3}, StepPolynomial{1, 0}}) {
    int k = (digit_width(h));
    CAPTURE(h.a);
    CAPTURE(h.b);
    for (unsigned __int128 n = 1; n <= 2000; ++n) {
      unsigned __int128 lhs = 1, rhs = h.a;
      for (int i = 0; i < k; ++i) lhs *= n + 1;
      for (uint64_t i = 0; i < h.b; ++i) rhs *= n;
      CHECK(lhs > rhs);
    }
  }
}

TEST_CASE("tuple counters agree with integer arithmetic, exhaustively") {
  for (int n = 0; n <= 3; ++n) {
    std::string word(n, '1');
    for (int k = 1; k <= 3; ++k) {
      CountingKit kit = gen_counting_order0(k, {1, 1});
      REQUIRE(kit.order == 0);
      REQUIRE(kit.width == k);
      uint64_t count = ipow(n + 1, k);
      CAPTURE(n);
      CAPTURE(k);
      for (uint64_t i = 0; i < count; ++i) {
        // Successor saturates at the maximum, predecessor at zero.
        Program ps = harness(kit, 1, kit.number_type,
                             kit.succ(cs(), make_var("x")));
        Value in = rep0(word, k, i);
        uint64_t up = i + 1 < count ? i + 1 : count - 1;
        CHECK(eval(ps, {data_from_bits(word), in}) == rep0(word, k, up));
        Program pp = harness(kit, 1, kit.number_type,
                             kit.pred(cs(), make_var("x")));
        uint64_t down = i == 0 ? 0 : i - 1;
        CHECK(eval(pp, {data_from_bits(word), in}) == rep0(word, k, down));
        Program pz = harness(kit, 1, sort_type("bool"),
                             kit.is_zero(cs(), make_var("x")));
        CHECK((eval(pz, {data_from_bits(word), in}) ==
               Value::cons(i == 0 ? "true" : "false")));
      }
      Program pe = harness(kit, 2, sort_type("bool"),
                           kit.equal(cs(), make_var("x"), make_var("y")));
      for (uint64_t i = 0; i < count; ++i) {
        for (uint64_t j = 0; j < count; ++j) {
          CHECK((eval(pe, {data_from_bits(word), rep0(word, k, i),
                           rep0(word, k, j)}) ==
                 Value::cons(i == j ? "true" : "false")));
        }
      }
    }
  }
}

TEST_CASE("the step-bound literal evaluates to a * n^b") {
  for (StepPolynomial h :
       {StepPolynomial{1, 1}, StepPolynomial{2, 1}, StepPolynomial{4, 2}}) {
    int k = digit_width(h);
    CountingKit kit = gen_counting_order0(k, h);
    for (int n = 0; n <= 3; ++n) {
      std::string word(n, '1');
      uint64_t hn = h.a * ipow(n, h.b);
      Program p = harness(kit, 0, kit.number_type, kit.h_literal(cs()));
      CAPTURE(h.a);
      CAPTURE(h.b);
      CAPTURE(n);
      CHECK(eval(p, {data_from_bits(word)}) == rep0(word, k, hn));
    }
  }
}

TEST_CASE("bit-graph counters behave like binary numbers") {
  // Input length 1, width 2: four bit positions, numbers below 16.
  CountingKit kit = gen_counting_order1(2, {1, 1});
  REQUIRE(kit.order == 1);
  const std::string word = "1";

  for (uint64_t i = 0; i < 16; ++i) {
    CHECK(eval_bool(kit, kit.is_zero(cs(), succ_chain(kit, i)), word) ==
          (i == 0));
    for (uint64_t j = 0; j < 16; ++j) {
      CHECK(eval_bool(kit, kit.equal(cs(), succ_chain(kit, i),
                                     succ_chain(kit, j)),
                      word) == (i == j));
    }
  }
  // pred(succ(x)) == x.
  for (uint64_t i = 0; i < 15; ++i) {
    CHECK(eval_bool(kit,
                    kit.equal(cs(), kit.pred(cs(), succ_chain(kit, i + 1)),
                              succ_chain(kit, i)),
                    word));
  }
}

TEST_CASE("bit-graph step bound is one-hot: only bit a*n^b is set") {
  // The bound only needs to dominate a*n^b; the one-hot value 2^(a*n^b)
  // is cheap to express as a bit graph and accept states absorb, so the
  // overshoot is harmless.
  StepPolynomial h{4, 2};
  CountingKit kit = gen_counting_order1(digit_width(h), h);
  // h(1) = 4, so the literal is the binary number 2^4 = 16.
  CHECK(eval_bool(kit, kit.equal(cs(), kit.h_literal(cs()),
                                 succ_chain(kit, 16)),
                  "1"));
  CHECK(!eval_bool(kit, kit.equal(cs(), kit.h_literal(cs()),
                                  succ_chain(kit, 4)),
                   "1"));
}

TEST_CASE("bit-graph counting clauses need (only) order-2 immutability") {
  CountingKit kit = gen_counting_order1(2, {1, 1});
  Program p = harness(kit, 0, sort_type("bool"),
                      kit.is_zero(cs(), kit.zero()));
  CHECK(!check_immutability(p, 1).pass());
  CHECK(check_immutability(p, 2).pass());
  CHECK(check_cons_free(p).pass());
}

TEST_CASE("compiled simulations are well formed") {
  for (const char* name : {"accept_blank.tm", "contains11.tm",
                           "guess_two.tm"}) {
    for (StepPolynomial h : {StepPolynomial{1, 1}, StepPolynomial{2, 1}}) {
      CAPTURE(name);
      CAPTURE(h.a);
      Program p = compile_machine(index_options(load_tm(name)), h);
      CHECK(p.terminating);
      CHECK(typecheck(p).empty());
      CHECK(data_order(p) == 1);
      CHECK(check_cons_free(p).pass());
      CHECK(check_immutability(p, 1).pass());
      CHECK(verify_order_collapsed(p).pass());
    }
  }
}

TEST_CASE("bit-graph compilation trades data order for immutability") {
  Program p =
      compile_machine(index_options(load_tm("accept_blank.tm")), {1, 1}, 1);
  CHECK(typecheck(p).empty());
  CHECK(data_order(p) == 2);
  CHECK(check_cons_free(p).pass());
  CHECK(!check_immutability(p, 1).pass());
  CHECK(check_immutability(p, 2).pass());
  // It still simulates the machine.
  auto out = enumerate_results(p, {data_from_bits("1")});
  REQUIRE(out.exhausted);
  CHECK(out.results.count(Value::cons("true")) == 1);
}

TEST_CASE("compiled simulation agrees with direct machine search") {
  Machine m = load_tm("contains11.tm");
  StepPolynomial h{2, 1};
  Program p = compile_machine(index_options(m), h);
  REQUIRE(typecheck(p).empty());
  for (const auto& w : testutil::words_up_to(3)) {
    CAPTURE(w);
    bool direct = run_machine(m, w, h.a * w.size()).accepted;
    auto out = enumerate_results(p, {data_from_bits(w)});
    REQUIRE(out.exhausted);
    CHECK(out.results.count(Value::cons("true")) == (direct ? 1 : 0));
  }
}

TEST_CASE("rendered simulations parse back to the same program") {
  Program p = compile_machine(index_options(load_tm("guess_two.tm")), {2, 1});
  std::string text = render_compiled(p);
  CHECK(text.find("# terminating") != std::string::npos);
  Program q = parse_program(text);
  CHECK(program_equal(p, q));
}
