#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "consfree/ast.hpp"
#include "consfree/turing.hpp"

namespace consfree {

// Step bound h(n) = a * n^b.
struct StepPolynomial {
  uint64_t a = 1;
  uint64_t b = 1;
};

// Smallest digit width k with (n+1)^k > a*n^b for all n >= 1.
int digit_width(const StepPolynomial& h);

// Generated counting clauses: bounded numbers with successor, predecessor,
// zero test and equality, plus literals for zero and h(|cs|).
struct CountingKit {
  int order;  // 0: tuples of list suffixes, 1: bit-graph functions
  int width;  // digit width k
  TypePtr number_type;
  std::vector<std::pair<std::string, TypePtr>> functions;
  std::vector<Clause> clauses;

  std::function<ExprPtr()> zero;
  std::function<ExprPtr(ExprPtr cs)> h_literal;
  std::function<ExprPtr(ExprPtr cs, ExprPtr x)> is_zero;
  std::function<ExprPtr(ExprPtr cs, ExprPtr x)> succ;
  std::function<ExprPtr(ExprPtr cs, ExprPtr x)> pred;
  std::function<ExprPtr(ExprPtr cs, ExprPtr a, ExprPtr b)> equal;
};

// Base-(n+1) digit tuples; represents 0 .. (n+1)^k - 1 for input length n.
CountingKit gen_counting_order0(int k, const StepPolynomial& h);

// Bit-graph functions over the order-0 index space; represents
// 0 .. 2^((n+1)^k) - 1. The emitted clauses are order-2 immutable.
CountingKit gen_counting_order1(int k, const StepPolynomial& h);

// Emits the machine-simulation program: a cons-free program whose result
// set contains true iff the machine accepts the input word within h(n)
// steps. immutability_order 0 uses the tuple counters (the default NP
// pipeline); 1 swaps in the bit-graph counters.
Program compile_machine(const IndexedMachine& m, const StepPolynomial& h,
                        int immutability_order = 0);

// .cf rendering with comments naming the role of each clause group.
std::string render_compiled(const Program& p);

}  // namespace consfree
