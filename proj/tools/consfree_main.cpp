#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "consfree/analysis.hpp"
#include "consfree/errors.hpp"
#include "consfree/interp.hpp"
#include "consfree/parser.hpp"
#include "consfree/printer.hpp"
#include "consfree/saturate.hpp"
#include "consfree/tmcompile.hpp"
#include "consfree/transform.hpp"
#include "consfree/turing.hpp"

namespace {

using namespace consfree;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

Program load_program(const std::string& path) {
  Program p = parse_program(slurp(path));
  std::vector<TypeError> errs = typecheck(p);
  if (!errs.empty()) {
    std::ostringstream msg;
    msg << path << ": type errors:";
    for (auto& e : errs) msg << "\n  [" << e.path << "] " << e.message;
    throw std::runtime_error(msg.str());
  }
  return p;
}

std::vector<Value> parse_inputs(const std::vector<std::string>& words) {
  std::vector<Value> out;
  for (auto& w : words) out.push_back(data_from_bits(w));
  return out;
}

uint64_t default_fuel() {
  if (const char* env = std::getenv("CONSFREE_FUEL")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
    std::cerr << "warning: ignoring malformed CONSFREE_FUEL\n";
  }
  return 1'000'000;
}

void print_values(const std::set<Value>& values) {
  for (auto& v : values) std::cout << show_value(v) << "\n";
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

StepPolynomial parse_poly(const std::string& s) {
  auto parts = split_commas(s);
  if (parts.size() != 2)
    throw CLI::ValidationError("--poly", "expected a,b");
  StepPolynomial h;
  h.a = std::stoull(parts[0]);
  h.b = std::stoull(parts[1]);
  return h;
}

uint64_t poly_eval(const StepPolynomial& h, uint64_t n) {
  uint64_t out = h.a;
  for (uint64_t i = 0; i < h.b; ++i) out *= n;
  return out;
}

int cmd_check(const std::string& path) {
  Program p = parse_program(slurp(path));
  std::vector<TypeError> errs = typecheck(p);
  bool ok = errs.empty();
  if (ok) {
    std::cout << "type: pass\n";
    std::cout << "data order: " << data_order(p) << "\n";
  } else {
    std::cout << "type: fail\n";
    for (auto& e : errs)
      std::cout << "  [" << e.path << "] " << e.message << "\n";
  }
  AnalysisReport cf = check_cons_free(p);
  std::cout << "cons-free: " << (cf.pass() ? "pass" : "fail") << "\n";
  if (!cf.pass()) std::cout << cf.render();
  if (errs.empty()) {
    AnalysisReport imm = check_immutability(p, 1);
    std::cout << "immutable(1): " << (imm.pass() ? "pass" : "fail") << "\n";
    if (!imm.pass()) std::cout << imm.render();
    ok = ok && cf.pass() && imm.pass();
  } else {
    ok = false;
  }
  std::cout << "terminating pragma: " << (p.terminating ? "yes" : "no")
            << "\n";
  return ok ? 0 : 1;
}

int cmd_run(const std::string& path, const std::vector<std::string>& inputs,
            uint64_t fuel) {
  Program p = load_program(path);
  EvalOptions opts;
  opts.fuel = fuel;
  EvalOutcome out = enumerate_results(p, parse_inputs(inputs), opts);
  print_values(out.results);
  if (!out.exhausted)
    std::cerr << "warning: some branches ran out of fuel (" << fuel << ")\n";
  for (auto& s : out.stuck) std::cerr << "stuck: " << s << "\n";
  return 0;
}

void print_stats(const SaturateStats& stats) {
  std::cerr << "statements: " << stats.statements
            << "\niterations: " << stats.iterations << "\nT: " << stats.T
            << "\nN: " << stats.N << "\n";
  for (auto& [ty, n] : stats.pool_sizes)
    std::cerr << "pool " << ty << ": " << n << "\n";
}

int cmd_saturate(const std::string& path,
                 const std::vector<std::string>& inputs) {
  Program p = load_program(path);
  SaturateStats stats;
  std::set<Value> out = saturate(p, parse_inputs(inputs), &stats);
  print_values(out);
  print_stats(stats);
  return 0;
}

int cmd_np_run(const std::string& path,
               const std::vector<std::string>& inputs, bool exhaustive,
               uint64_t seed, uint64_t trials, uint64_t cap) {
  Program p = load_program(path);
  NpMode mode =
      exhaustive ? NpMode::exhaustive(cap) : NpMode::seeded(seed, trials);
  SaturateStats stats;
  std::set<Value> out = np_saturate(p, parse_inputs(inputs), mode, &stats);
  print_values(out);
  print_stats(stats);
  return 0;
}

int cmd_transform(const std::string& path, bool pushdown_only,
                  bool eliminate_only) {
  Program p = load_program(path);
  TransformTrace trace;
  Program result = p;
  auto log = [](const TransformTrace& t) {
    for (auto& r : t.rewrites)
      std::cerr << "clause " << r.clause << " at " << r.path << ": " << r.rule
                << "\n";
  };
  if (!eliminate_only) {
    trace = compose_pushdown(result);
    log(trace);
    result = trace.after;
  }
  if (!pushdown_only) {
    trace = eliminate_fvar_clauses(result);
    log(trace);
    if (trace.failed) {
      std::cerr << trace.failure << "\n";
      return 1;
    }
    result = trace.after;
  }
  std::cout << pretty_print(result);
  return 0;
}

int cmd_compile_tm(const std::string& path, const std::string& poly,
                   int order, const std::string& out_path) {
  Machine m = parse_machine(slurp(path));
  AnalysisReport valid = validate_machine(m);
  if (!valid.pass()) {
    std::cerr << path << ": invalid machine:\n" << valid.render();
    return 1;
  }
  Program p = compile_machine(index_options(m), parse_poly(poly), order);
  std::string text = render_compiled(p);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write file: " + out_path);
    out << text;
  }
  return 0;
}

int cmd_tm_run(const std::string& path, const std::string& word,
               uint64_t steps) {
  Machine m = parse_machine(slurp(path));
  AnalysisReport valid = validate_machine(m);
  if (!valid.pass()) {
    std::cerr << path << ": invalid machine:\n" << valid.render();
    return 1;
  }
  RunOutcome out = run_machine(m, word, steps);
  std::cout << (out.accepted ? "accept" : "reject") << "\n";
  if (out.accepted) {
    std::cout << "witness:";
    for (int r : out.witness) std::cout << " " << r;
    std::cout << "\n";
  }
  return 0;
}

int cmd_pipeline(const std::string& path, const std::string& poly,
                 const std::string& words, uint64_t fuel) {
  Machine m = parse_machine(slurp(path));
  AnalysisReport valid = validate_machine(m);
  if (!valid.pass()) {
    std::cerr << path << ": invalid machine:\n" << valid.render();
    return 1;
  }
  StepPolynomial h = parse_poly(poly);
  Program p = compile_machine(index_options(m), h, 0);
  bool all_ok = true;
  bool first = true;
  for (auto& w : split_commas(words)) {
    bool machine_accepts =
        run_machine(m, w, poly_eval(h, w.size())).accepted;
    EvalOptions opts;
    opts.fuel = fuel;
    EvalOutcome out =
        enumerate_results(p, {data_from_bits(w)}, opts);
    bool program_accepts = out.results.count(Value::cons("true")) != 0;
    bool ok = machine_accepts == program_accepts && out.exhausted;
    all_ok = all_ok && ok;
    if (!first) std::cout << ", ";
    first = false;
    std::cout << (w.empty() ? "(empty)" : w) << ": "
              << (ok ? (machine_accepts ? "OK (accept)" : "OK (reject)")
                     : "MISMATCH");
  }
  std::cout << "\n";
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cons-free program toolkit"};
  app.require_subcommand(1);

  std::string prog_path, machine_path, poly = "1,1", out_path, words;
  std::vector<std::string> inputs;
  uint64_t fuel = default_fuel();
  uint64_t seed = 0, trials = 1, cap = 1ull << 12, steps = 100;
  bool exhaustive = false, pushdown_only = false, eliminate_only = false;
  bool all_flag = false;
  int order = 0;

  auto* check = app.add_subcommand("check", "static analyses and report");
  check->add_option("program", prog_path)->required();

  auto* run = app.add_subcommand("run", "enumerate all result values");
  run->add_option("program", prog_path)->required();
  run->add_option("--input", inputs, "input word over {0,1}; repeatable")
      ->expected(-1);
  run->add_option("--fuel", fuel, "clause-firing budget per branch");
  run->add_flag("--all", all_flag, "enumerate every branch (default)");

  auto* sat = app.add_subcommand("saturate", "result values via saturation");
  sat->add_option("program", prog_path)->required();
  sat->add_option("--input", inputs)->expected(-1);

  auto* np = app.add_subcommand("np-run", "restricted saturation");
  np->add_option("program", prog_path)->required();
  np->add_option("--input", inputs)->expected(-1);
  np->add_flag("--exhaustive", exhaustive, "use the full graph universe");
  np->add_option("--seed", seed);
  np->add_option("--trials", trials);
  np->add_option("--cap", cap, "universe/pool size cap");

  auto* tr = app.add_subcommand("transform", "normalization passes");
  tr->add_option("program", prog_path)->required();
  tr->add_flag("--pushdown-only", pushdown_only);
  tr->add_flag("--eliminate-only", eliminate_only);

  auto* ct = app.add_subcommand("compile-tm", "emit a simulation program");
  ct->add_option("machine", machine_path)->required();
  ct->add_option("--poly", poly, "step bound a,b meaning a*n^b")->required();
  ct->add_option("--order", order, "immutability order 0 or 1");
  ct->add_option("-o,--output", out_path);

  auto* tm = app.add_subcommand("tm-run", "run the machine directly");
  tm->add_option("machine", machine_path)->required();
  tm->add_option("--word", words)->required();
  tm->add_option("--steps", steps);

  auto* pl = app.add_subcommand("pipeline", "compile and cross-check");
  pl->add_option("machine", machine_path)->required();
  pl->add_option("--poly", poly)->required();
  pl->add_option("--words", words, "comma-separated test words")->required();
  pl->add_option("--fuel", fuel);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*check) return cmd_check(prog_path);
    if (*run) return cmd_run(prog_path, inputs, fuel);
    if (*sat) return cmd_saturate(prog_path, inputs);
    if (*np) return cmd_np_run(prog_path, inputs, exhaustive, seed, trials,
                               cap);
    if (*tr) return cmd_transform(prog_path, pushdown_only, eliminate_only);
    if (*ct) return cmd_compile_tm(machine_path, poly, order, out_path);
    if (*tm) return cmd_tm_run(machine_path, words, steps);
    if (*pl) return cmd_pipeline(machine_path, poly, words, fuel);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const PreconditionViolation& e) {
    std::cerr << "precondition violation: " << e.what() << "\n";
    return 1;
  } catch (const UniverseTooLarge& e) {
    std::cerr << "universe too large: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
