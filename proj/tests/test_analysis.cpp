#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "consfree/analysis.hpp"
#include "consfree/parser.hpp"
#include "test_util.hpp"

using namespace consfree;

TEST_CASE("every corpus program typechecks") {
  for (const auto& f : testutil::corpus_files()) {
    CAPTURE(f);
    CHECK_NOTHROW(testutil::load(f));
  }
}

TEST_CASE("type errors are reported with locations") {
  Program p = parse_program("fun main : list => bool\n"
                            "main xs = if xs then true else false\n");
  auto errs = typecheck(p);
  REQUIRE(!errs.empty());
  CHECK(errs[0].clause == 0);

  Program q = parse_program("fun main : list => bool\n"
                            "fun isnil : list => bool\n"
                            "main xs = isnil xs xs\n"
                            "isnil nil = true\n"
                            "isnil (x :: xs) = false\n");
  CHECK(!typecheck(q).empty());  // over-application of a bool
}

TEST_CASE("data order on hand-checked examples") {
  auto order_of = [](const std::string& f) {
    Program p = testutil::load(f);
    return data_order(p);
  };
  CHECK(order_of(std::string(CORPUS_DIR) + "/last.cf") == 0);
  CHECK(order_of(std::string(CORPUS_DIR) + "/apply_pred.cf") == 1);
  CHECK(order_of(std::string(CORPUS_DIR) + "/apply_twice.cf") == 1);
  CHECK(order_of(std::string(SPECIAL_DIR) + "/bit_of_lowest.cf") == 1);
}

TEST_CASE("cons-freeness: corpus passes, list-rebuilding program fails") {
  for (const auto& f : testutil::corpus_files()) {
    CAPTURE(f);
    Program p = testutil::load(f);
    CHECK(check_cons_free(p).pass());
  }
  Program flip = testutil::load(std::string(SPECIAL_DIR) + "/flip.cf");
  auto report = check_cons_free(flip);
  REQUIRE(!report.pass());
  // The offending subexpression is the :: application that rebuilds the list.
  bool found = false;
  for (const auto& v : report.violations) {
    if (v.reason.find("::") != std::string::npos &&
        v.reason.find("constructor application") != std::string::npos) {
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("closed constructor data in bodies is allowed") {
  Program p = parse_program("fun main : list => bool\n"
                            "fun eq1 : list => bool\n"
                            "main xs = eq1 xs\n"
                            "eq1 (true :: nil) = true\n"
                            "eq1 xs = false\n");
  REQUIRE(typecheck(p).empty());
  CHECK(check_cons_free(p).pass());
}

TEST_CASE("immutability: corpus passes at order 1") {
  for (const auto& f : testutil::corpus_files()) {
    CAPTURE(f);
    Program p = testutil::load(f);
    CHECK(check_immutability(p, 1).pass());
  }
}

TEST_CASE("immutability is monotone in the order") {
  std::vector<std::string> files = testutil::corpus_files();
  for (const auto& dir : testutil::cf_files(SPECIAL_DIR)) files.push_back(dir);
  for (const auto& f : files) {
    CAPTURE(f);
    Program p = testutil::load(f);
    bool prev = check_immutability(p, 1).pass();
    for (int n = 2; n <= 4; ++n) {
      bool cur = check_immutability(p, n).pass();
      if (prev) CHECK(cur);
      prev = cur;
    }
  }
}

TEST_CASE("two order-1 variables in one clause break order-1 immutability") {
  Program p = parse_program(
      "fun main : bool => bool\n"
      "fun ap2 : (bool => bool) => (bool => bool) => bool => bool\n"
      "fun notb : bool => bool\n"
      "main b = ap2 notb notb b\n"
      "ap2 F G b = F (G b)\n"
      "notb true = false\n"
      "notb false = true\n");
  REQUIRE(typecheck(p).empty());
  CHECK(!check_immutability(p, 1).pass());
  CHECK(check_immutability(p, 2).pass());
}

TEST_CASE("an order-1 variable next to another order-1 subexpression fails") {
  // The clause body of mix mentions the order-1 variable F and also passes
  // the order-1 constant notb as an argument.
  Program p = parse_program(
      "fun main : bool => bool\n"
      "fun mix : (bool => bool) => bool => bool\n"
      "fun app : (bool => bool) => bool => bool\n"
      "fun notb : bool => bool\n"
      "main b = mix notb b\n"
      "mix F b = app notb (F b)\n"
      "app G b = G b\n"
      "notb true = false\n"
      "notb false = true\n");
  REQUIRE(typecheck(p).empty());
  CHECK(!check_immutability(p, 1).pass());
  // Repeated occurrences of the single variable itself stay legal.
  Program q = parse_program(
      "fun main : bool => bool\n"
      "fun dup : (bool => bool) => bool => bool\n"
      "fun notb : bool => bool\n"
      "main b = dup notb b\n"
      "dup F b = F (F b)\n"
      "notb true = false\n"
      "notb false = true\n");
  REQUIRE(typecheck(q).empty());
  CHECK(check_immutability(q, 1).pass());
}
