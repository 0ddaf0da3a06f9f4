#pragma once

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "consfree/analysis.hpp"
#include "consfree/ast.hpp"
#include "consfree/interp.hpp"
#include "consfree/parser.hpp"

namespace testutil {

inline std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Parses and typechecks a .cf file; throws on any error.
inline consfree::Program load(const std::string& path) {
  consfree::Program p = consfree::parse_program(slurp(path));
  auto errs = consfree::typecheck(p);
  if (!errs.empty()) {
    throw std::runtime_error(path + ": type error: " + errs.front().message);
  }
  return p;
}

inline std::vector<std::string> cf_files(const std::string& dir) {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.path().extension() == ".cf") out.push_back(e.path().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<std::string> corpus_files() { return cf_files(CORPUS_DIR); }

// All {0,1} words of length <= max_len, shortest first.
inline std::vector<std::string> words_up_to(size_t max_len) {
  std::vector<std::string> out{""};
  for (size_t n = 1; n <= max_len; ++n) {
    for (size_t i = 0; i < (size_t{1} << n); ++i) {
      std::string w;
      for (size_t j = n; j-- > 0;) w += ((i >> j) & 1) ? '1' : '0';
      out.push_back(w);
    }
  }
  return out;
}

inline std::set<consfree::Value> run_all(const consfree::Program& p,
                                         const std::string& bits,
                                         uint64_t fuel = 1'000'000) {
  consfree::EvalOptions opts;
  opts.fuel = fuel;
  auto out = consfree::enumerate_results(
      p, {consfree::data_from_bits(bits)}, opts);
  if (!out.exhausted) {
    throw std::runtime_error("enumeration not exhausted within fuel");
  }
  return out.results;
}

}  // namespace testutil
