#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "consfree/analysis.hpp"
#include "consfree/interp.hpp"
#include "consfree/parser.hpp"
#include "consfree/printer.hpp"
#include "consfree/transform.hpp"
#include "test_util.hpp"

using namespace consfree;

namespace {
bool has_applied_branching_head(const ExprPtr& e) {
  if (!e) return false;
  if (e->kind == Expr::Kind::App &&
      (e->head->kind == Expr::Kind::If ||
       e->head->kind == Expr::Kind::Choose)) {
    return true;
  }
  for (const auto& c : expr_children(e)) {
    if (has_applied_branching_head(c)) return true;
  }
  return false;
}

bool has_bare_fvar_clause(const Program& p) {
  for (const auto& c : p.clauses) {
    if (c.body->kind == Expr::Kind::Var && c.body->type &&
        type_order(c.body->type) >= 1) {
      return true;
    }
  }
  return false;
}

Program normalized(const std::string& file) {
  Program p = testutil::load(file);
  Program q = compose_pushdown(p).after;
  auto t = eliminate_fvar_clauses(q);
  REQUIRE(!t.failed);
  Program r = t.after;
  REQUIRE(typecheck(r).empty());
  return r;
}
}  // namespace

TEST_CASE("pushdown moves a chosen head into the branches") {
  Program p = testutil::load(std::string(CORPUS_DIR) + "/choose_fun.cf");
  auto trace = compose_pushdown(p);
  CHECK(!trace.rewrites.empty());
  for (const auto& c : trace.after.clauses) {
    CHECK(!has_applied_branching_head(c.body));
  }
  // The main body is now a choose over two first-order calls.
  const Clause& main = trace.after.clauses[0];
  CHECK(show_expr(main.body) == "choose(isnil xs, any xs)");
}

TEST_CASE("pushdown handles applied if heads") {
  Program p = parse_program(
      "fun main : list => bool\n"
      "fun isnil : list => bool\n"
      "fun any : list => bool\n"
      "main xs = (if isnil xs then any else isnil) xs\n"
      "isnil nil = true\n"
      "isnil (x :: xs) = false\n"
      "any nil = false\n"
      "any (x :: xs) = if x then true else any xs\n");
  REQUIRE(typecheck(p).empty());
  auto trace = compose_pushdown(p);
  CHECK(!trace.rewrites.empty());
  CHECK(show_expr(trace.after.clauses[0].body) ==
        "if isnil xs then any xs else isnil xs");
}

TEST_CASE("pushdown is idempotent across the corpus") {
  for (const auto& f : testutil::corpus_files()) {
    CAPTURE(f);
    Program p = testutil::load(f);
    Program once = compose_pushdown(p).after;
    auto again = compose_pushdown(once);
    CHECK(again.rewrites.empty());
    CHECK(program_equal(again.after, once));
  }
}

TEST_CASE("functional-variable clauses are inlined away") {
  Program p = normalized(std::string(CORPUS_DIR) + "/fvar_pick.cf");
  CHECK(!has_bare_fvar_clause(p));
  // pick's clauses return their functional arguments; inlining resolves
  // the two statically dispatched call sites.
  for (const auto& c : p.clauses) {
    if (c.function == "main") {
      CHECK(show_expr(c.body).find("pick") == std::string::npos);
    }
  }
}

TEST_CASE("inlining fails when the dispatch argument is a choose") {
  Program p = testutil::load(std::string(SPECIAL_DIR) + "/fvar_choose.cf");
  Program q = compose_pushdown(p).after;
  auto t = eliminate_fvar_clauses(q);
  CHECK(t.failed);
  CHECK(t.failure.find("pick") != std::string::npos);
  CHECK(program_equal(t.after, q));  // returned unchanged
}

TEST_CASE("both passes preserve the result set across the corpus") {
  for (const auto& f : testutil::corpus_files()) {
    CAPTURE(f);
    Program p = testutil::load(f);
    Program q = normalized(f);
    for (const std::string& w : {"", "1", "10", "011"}) {
      CHECK(testutil::run_all(p, w) == testutil::run_all(q, w));
    }
  }
}

TEST_CASE("normalized corpus programs are order-collapsed") {
  for (const auto& f : testutil::corpus_files()) {
    CAPTURE(f);
    Program q = normalized(f);
    CHECK(verify_order_collapsed(q).pass());
  }
}

TEST_CASE("compose_apply distributes arguments over branches") {
  auto e = make_if(make_var("c"), make_fun("f", {}), make_fun("g", {}));
  auto r = compose_apply(e, {make_var("x")});
  CHECK(show_expr(r) == "if c then f x else g x");
  auto ch = make_choose({make_fun("f", {}), make_fun("g", {})});
  CHECK(show_expr(compose_apply(ch, {make_var("x")})) ==
        "choose(f x, g x)");
}
