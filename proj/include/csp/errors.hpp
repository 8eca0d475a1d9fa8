#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace csp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInstance : public Error {
 public:
  using Error::Error;
};

class IllegalMove : public Error {
 public:
  using Error::Error;
};

// Thrown when the reachable state space outgrows the caller's budget. The
// solver never answers from a partial table.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(std::size_t budget, std::size_t states_seen)
      : Error("state budget exceeded: more than " + std::to_string(budget) +
              " reachable states (" + std::to_string(states_seen) + " seen)"),
        budget_(budget),
        states_seen_(states_seen) {}

  std::size_t budget() const noexcept { return budget_; }
  std::size_t states_seen() const noexcept { return states_seen_; }

 private:
  std::size_t budget_;
  std::size_t states_seen_;
};

class PlyCapExceeded : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& what)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace csp
