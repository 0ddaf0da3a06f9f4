#pragma once

#include <stdexcept>
#include <string>

namespace consfree {

struct ParseError : std::runtime_error {
  int line, col;
  ParseError(int line, int col, const std::string& msg)
      : std::runtime_error("parse error at " + std::to_string(line) + ":" +
                           std::to_string(col) + ": " + msg),
        line(line),
        col(col) {}
};

struct PreconditionViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UniverseTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace consfree
