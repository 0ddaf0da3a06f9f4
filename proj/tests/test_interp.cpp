#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "consfree/interp.hpp"
#include "consfree/parser.hpp"
#include "test_util.hpp"

using namespace consfree;

namespace {
Value T() { return Value::cons("true"); }
Value F() { return Value::cons("false"); }
}  // namespace

TEST_CASE("clause matching") {
  // last (x :: y :: zs)
  auto pat = make_pcons(
      "::", {make_pvar("x"),
             make_pcons("::", {make_pvar("y"), make_pvar("zs")})});
  auto ok = match_clause({pat}, {data_from_bits("101")});
  REQUIRE(ok.has_value());
  CHECK(ok->at("x") == T());
  CHECK(ok->at("y") == F());
  CHECK(ok->at("zs") == data_from_bits("1"));
  CHECK(!match_clause({pat}, {data_from_bits("1")}).has_value());

  auto pp = make_ppair(make_pvar("a"), make_pcons("nil", {}));
  auto m2 = match_clause({pp}, {Value::pair(T(), Value::cons("nil"))});
  REQUIRE(m2.has_value());
  CHECK(m2->at("a") == T());
  CHECK(!match_clause({pp}, {Value::pair(T(), data_from_bits("1"))})
             .has_value());
}

TEST_CASE("deterministic evaluation follows the choice stream") {
  Program p = testutil::load(std::string(CORPUS_DIR) + "/const_choose.cf");
  auto r0 = evaluate_one(p, {data_from_bits("")}, {0}, 1000);
  auto r1 = evaluate_one(p, {data_from_bits("")}, {1}, 1000);
  REQUIRE(r0.status == EvalStatus::Ok);
  REQUIRE(r1.status == EvalStatus::Ok);
  CHECK(r0.value == T());
  CHECK(r1.value == F());
  // An exhausted stream defaults to branch 0.
  auto rd = evaluate_one(p, {data_from_bits("")}, {}, 1000);
  REQUIRE(rd.status == EvalStatus::Ok);
  CHECK(rd.value == T());
}

TEST_CASE("last element, hand-checked") {
  Program p = testutil::load(std::string(CORPUS_DIR) + "/last.cf");
  CHECK(testutil::run_all(p, "101") == std::set<Value>{T()});
  CHECK(testutil::run_all(p, "10") == std::set<Value>{F()});
}

TEST_CASE("nondeterministic element pick enumerates every element") {
  Program p = testutil::load(std::string(CORPUS_DIR) + "/pick_elem.cf");
  CHECK(testutil::run_all(p, "") == std::set<Value>{F()});
  CHECK(testutil::run_all(p, "111") == std::set<Value>{T(), F()});
  CHECK(testutil::run_all(p, "00") == std::set<Value>{F()});
  CHECK(testutil::run_all(p, "01") == std::set<Value>{T(), F()});
}

TEST_CASE("fuel exhaustion is reported, and results grow with fuel") {
  Program p =
      testutil::load(std::string(SPECIAL_DIR) + "/bit_of_lowest.cf");
  EvalOptions tiny;
  tiny.fuel = 3;
  auto out = enumerate_results(p, {data_from_bits("1")}, tiny);
  CHECK(!out.exhausted);

  std::set<Value> prev;
  for (uint64_t fuel : {10ull, 40ull, 200ull}) {
    EvalOptions opts;
    opts.fuel = fuel;
    auto o = enumerate_results(p, {data_from_bits("1")}, opts);
    for (const auto& v : prev) CHECK(o.results.count(v) == 1);
    prev = o.results;
  }
}

TEST_CASE("memoization does not change observable results") {
  for (const auto& f : testutil::corpus_files()) {
    CAPTURE(f);
    Program p = testutil::load(f);
    for (const std::string& w : {"", "1", "01"}) {
      EvalOptions on, off;
      off.memoize = false;
      auto a = enumerate_results(p, {data_from_bits(w)}, on);
      auto b = enumerate_results(p, {data_from_bits(w)}, off);
      CHECK(a.results == b.results);
      CHECK(a.exhausted);
      CHECK(b.exhausted);
    }
  }
}

TEST_CASE("stuck evaluation reports a diagnostic") {
  Program p = parse_program("fun main : list => bool\n"
                            "main (x :: xs) = x\n");
  REQUIRE(typecheck(p).empty());
  auto r = evaluate_one(p, {data_from_bits("")}, {}, 1000);
  CHECK(r.status == EvalStatus::Stuck);
  CHECK(!r.message.empty());
  auto out = enumerate_results(p, {data_from_bits("")});
  CHECK(out.results.empty());
  CHECK(!out.stuck.empty());
}

TEST_CASE("data universe for the last-element program on 10") {
  Program p = testutil::load(std::string(CORPUS_DIR) + "/last.cf");
  auto B = collect_B(p, {data_from_bits("10")});
  std::set<Value> lists{data_from_bits("10"), data_from_bits("0"),
                        data_from_bits("")};
  std::set<Value> bools{T(), F()};
  CHECK(B.by_sort.at("list") == lists);
  CHECK(B.by_sort.at("bool") == bools);
  CHECK(B.contains(T()));
  CHECK(!B.contains(data_from_bits("11")));
}

TEST_CASE("the observer only ever sees values from the data universe") {
  for (const auto& f : testutil::corpus_files()) {
    CAPTURE(f);
    Program p = testutil::load(f);
    for (const std::string& w : {"", "10", "011"}) {
      auto B = collect_B(p, {data_from_bits(w)});
      size_t seen = 0, outside = 0;
      EvalOptions opts;
      opts.data_observer = [&](const Value& v) {
        ++seen;
        if (!B.contains(v)) ++outside;
      };
      auto out = enumerate_results(p, {data_from_bits(w)}, opts);
      CHECK(out.exhausted);
      CHECK(seen > 0);
      CHECK(outside == 0);
    }
  }
}
