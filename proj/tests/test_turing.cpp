#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "consfree/turing.hpp"
#include "test_util.hpp"

using namespace consfree;

namespace {
Machine load_tm(const std::string& name) {
  return parse_machine(testutil::slurp(std::string(MACHINE_DIR) + "/" + name));
}
}  // namespace

TEST_CASE("machine parsing round trip and validation") {
  for (const char* name : {"accept_blank.tm", "contains11.tm",
                           "guess_two.tm"}) {
    CAPTURE(name);
    Machine m = load_tm(name);
    CHECK(validate_machine(m).pass());
    Machine again = parse_machine(show_machine(m));
    CHECK(validate_machine(again).pass());
    CHECK(show_machine(again) == show_machine(m));
  }
}

TEST_CASE("validation rejects malformed machines") {
  Machine m = load_tm("accept_blank.tm");
  Machine no_blank = m;
  no_blank.symbols = {"0", "1"};
  CHECK(!validate_machine(no_blank).pass());

  Machine from_accept = m;
  from_accept.transitions.push_back({"accept", "_", "_", 'R', "reject"});
  CHECK(!validate_machine(from_accept).pass());

  Machine bad_symbol = m;
  bad_symbol.transitions.push_back({"start", "2", "_", 'R', "accept"});
  CHECK(!validate_machine(bad_symbol).pass());
}

TEST_CASE("option indexing is canonical and projects onto the base table") {
  Machine m = load_tm("contains11.tm");
  IndexedMachine im = index_options(m);
  CHECK(im.fan_out == 2);  // seek reading 1 has two options
  std::set<std::tuple<int, std::string, std::string>> keys;
  std::multiset<std::string> base, projected;
  for (const auto& t : m.transitions) {
    base.insert(t.from + "|" + t.read + "|" + t.write + "|" + t.dir + "|" +
                t.to);
  }
  for (const auto& row : im.rows) {
    CHECK(row.option >= 1);
    CHECK(row.option <= im.fan_out);
    CHECK(keys.insert({row.option, row.t.from, row.t.read}).second);
    projected.insert(row.t.from + "|" + row.t.read + "|" + row.t.write + "|" +
                     row.t.dir + "|" + row.t.to);
  }
  CHECK(projected == base);
  // Indexing is deterministic.
  IndexedMachine im2 = index_options(m);
  REQUIRE(im2.rows.size() == im.rows.size());
  for (size_t i = 0; i < im.rows.size(); ++i) {
    CHECK(im2.rows[i].option == im.rows[i].option);
    CHECK(im2.rows[i].t.from == im.rows[i].t.from);
    CHECK(im2.rows[i].t.read == im.rows[i].t.read);
  }
}

TEST_CASE("machine runs match independent word-level oracles") {
  Machine blank = load_tm("accept_blank.tm");
  Machine c11 = load_tm("contains11.tm");
  Machine guess = load_tm("guess_two.tm");
  for (const auto& w : testutil::words_up_to(5)) {
    uint64_t n = w.size();
    CAPTURE(w);
    CHECK(run_machine(blank, w, 1).accepted);
    CHECK(run_machine(c11, w, 2 * n + 1).accepted ==
          (w.find("11") != std::string::npos));
    CHECK(run_machine(guess, w, n + 2).accepted == !w.empty());
  }
}

TEST_CASE("accepting runs come with a replayable witness") {
  Machine c11 = load_tm("contains11.tm");
  for (const auto& w : testutil::words_up_to(4)) {
    auto out = run_machine(c11, w, 2 * w.size() + 1);
    if (out.accepted) {
      CAPTURE(w);
      CHECK(replay_witness(c11, w, out.witness));
      // A truncated witness no longer reaches accept.
      auto cut = out.witness;
      cut.pop_back();
      CHECK(!replay_witness(c11, w, cut));
    }
  }
}

TEST_CASE("a branch dies when it falls off the left tape edge") {
  Machine m;
  m.symbols = {"0", "1", "_"};
  m.states = {"start", "accept", "reject", "back"};
  m.transitions = {{"start", "_", "_", 'L', "back"},
                   {"back", "_", "_", 'R', "accept"}};
  REQUIRE(validate_machine(m).pass());
  CHECK(!run_machine(m, "1", 100).accepted);
}

TEST_CASE("step budget is respected") {
  Machine c11 = load_tm("contains11.tm");
  // Reaching accept on 011 takes 4 steps: off the blank, over the 0,
  // guess on the first 1, confirm on the second.
  CHECK(run_machine(c11, "011", 4).accepted);
  CHECK(!run_machine(c11, "011", 3).accepted);
}
