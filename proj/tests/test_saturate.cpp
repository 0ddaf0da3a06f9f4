#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "consfree/errors.hpp"
#include "consfree/interp.hpp"
#include "consfree/parser.hpp"
#include "consfree/saturate.hpp"
#include "test_util.hpp"

using namespace consfree;

namespace {
Value T() { return Value::cons("true"); }
Value F() { return Value::cons("false"); }

std::set<Value> sat(const std::string& file, const std::string& bits,
                    SaturateStats* stats = nullptr) {
  Program p = testutil::load(file);
  return saturate(p, {data_from_bits(bits)}, stats);
}
}  // namespace

TEST_CASE("semantic universe sizes on hand-checked types") {
  Program p = testutil::load(std::string(CORPUS_DIR) + "/const_true.cf");
  std::vector<Value> in{data_from_bits("10")};
  auto b = sort_type("bool");
  auto l = sort_type("list");
  CHECK(semantic_universe_size(p, in, b) == 2);
  // Lists: the three suffixes of the input.
  CHECK(semantic_universe_size(p, in, l) == 3);
  CHECK(semantic_universe_size(p, in, product_type(b, l)) == 6);
  // bool => bool: one of two results at each of two arguments.
  CHECK(semantic_universe_size(p, in, arrow_type(b, b)) == 16);
  CHECK(semantic_universe(p, in, arrow_type(b, b)).size() == 16);
  // list => bool: 2^(3*2) graphs.
  CHECK(semantic_universe_size(p, in, arrow_type(l, b)) == 64);
  // Second-order universes blow past the cap.
  CHECK_THROWS_AS(
      semantic_universe(p, in, arrow_type(arrow_type(l, b), b), 1 << 12),
      UniverseTooLarge);
}

TEST_CASE("saturation on hand-checked programs") {
  CHECK(sat(std::string(CORPUS_DIR) + "/last.cf", "10") ==
        std::set<Value>{F()});
  CHECK(sat(std::string(CORPUS_DIR) + "/const_choose.cf", "") ==
        std::set<Value>{T(), F()});
  CHECK(sat(std::string(CORPUS_DIR) + "/pick_elem.cf", "01") ==
        std::set<Value>{T(), F()});
  CHECK(sat(std::string(CORPUS_DIR) + "/apply_twice.cf", "1") ==
        std::set<Value>{F()});
}

TEST_CASE("saturation equals enumeration across the corpus") {
  for (const auto& f : testutil::corpus_files()) {
    CAPTURE(f);
    Program p = testutil::load(f);
    for (const std::string& w : {"", "1", "01", "110"}) {
      CHECK(saturate(p, {data_from_bits(w)}) == testutil::run_all(p, w));
    }
  }
}

TEST_CASE("saturation preconditions") {
  CHECK_THROWS_AS(sat(std::string(SPECIAL_DIR) + "/bit_of_lowest.cf", "1"),
                  PreconditionViolation);  // no terminating pragma
  CHECK_THROWS_AS(sat(std::string(SPECIAL_DIR) + "/flip.cf", "1"),
                  PreconditionViolation);  // not cons-free
  CHECK_THROWS_AS(sat(std::string(SPECIAL_DIR) + "/fvar_choose.cf", "1"),
                  PreconditionViolation);  // inlining fails
}

TEST_CASE("statement bound parameters on hand-checked programs") {
  SaturateStats stats;
  sat(std::string(CORPUS_DIR) + "/last.cf", "10", &stats);
  CHECK(stats.T == 3);  // three list suffixes
  // 1 function, arity 1, body depth 3: N = T^(2*1*3 + 1).
  CHECK(stats.N == 2187);
  CHECK(stats.statements > 0);
  CHECK(stats.iterations >= 1);
}

TEST_CASE("the bound formula on a synthetic program") {
  Program p = parse_program(
      "# terminating\n"
      "fun main : bool => bool => bool\n"
      "fun g : bool => bool => bool\n"
      "fun h : bool => bool => bool\n"
      "main a b = g b a\n"
      "g a b = h a b\n"
      "h a b = false\n");
  REQUIRE(typecheck(p).empty());
  auto [t, n] = compute_T_N(p, {T(), T()});
  CHECK(t == 2);  // bool values: the input true plus the literal false
  // 3 functions, max arity 2, max body depth 2: 3 * 2^(2*2*2+1) = 1536.
  CHECK(n == 1536);
}

TEST_CASE("exhaustive pools reproduce plain saturation") {
  for (const auto& f : testutil::corpus_files()) {
    CAPTURE(f);
    Program p = testutil::load(f);
    for (const std::string& w : {"", "01"}) {
      std::vector<Value> in{data_from_bits(w)};
      auto full = saturate(p, in);
      auto pooled = np_saturate(p, in, NpMode::exhaustive());
      CHECK(pooled == full);
    }
  }
}

TEST_CASE("seeded pools stay inside the full result set") {
  for (const char* name :
       {"apply_pred.cf", "fvar_pick.cf", "choose_fun.cf", "apply_twice.cf"}) {
    std::string f = std::string(CORPUS_DIR) + "/" + name;
    CAPTURE(f);
    Program p = testutil::load(f);
    std::vector<Value> in{data_from_bits("01")};
    auto full = saturate(p, in);
    for (uint64_t seed = 0; seed < 20; ++seed) {
      auto some = np_saturate(p, in, NpMode::seeded(seed, 2));
      for (const auto& v : some) CHECK(full.count(v) == 1);
    }
  }
}

TEST_CASE("seeded runs are reproducible and grow with trials") {
  std::string f = std::string(CORPUS_DIR) + "/apply_pred.cf";
  Program p = testutil::load(f);
  std::vector<Value> in{data_from_bits("10")};
  auto a = np_saturate(p, in, NpMode::seeded(7, 3));
  auto b = np_saturate(p, in, NpMode::seeded(7, 3));
  CHECK(a == b);
  // More trials can only add results (the union over trials is monotone).
  auto more = np_saturate(p, in, NpMode::seeded(7, 8));
  for (const auto& v : a) CHECK(more.count(v) == 1);
}

TEST_CASE("pool statistics are reported for arrow-typed subexpressions") {
  SaturateStats stats;
  Program p = testutil::load(std::string(CORPUS_DIR) + "/apply_pred.cf");
  np_saturate(p, {data_from_bits("10")}, NpMode::exhaustive(), &stats);
  REQUIRE(!stats.pool_sizes.empty());
  // The dispatched predicate has type list => bool: 2^(3*2) graphs.
  CHECK(stats.pool_sizes.begin()->second == 64);
}
