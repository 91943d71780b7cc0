#pragma once

#include <stdexcept>
#include <string>

namespace pts {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unknown variable, relation or value.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Malformed arguments: arity mismatch, bad weight, mismatched domains.
class InputError : public Error {
 public:
  using Error::Error;
};

class DegenerateTeamError : public Error {
 public:
  using Error::Error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& msg, int line, int column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class UnsupportedSugarError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// No rewrite path from an atom into the requested target logic.
class NoPathError : public Error {
 public:
  using Error::Error;
};

// Formula outside the fragment an operation accepts.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Nonlinear input given to the linear decision procedure.
class FragmentError : public Error {
 public:
  using Error::Error;
};

class StrategyError : public Error {
 public:
  using Error::Error;
};

}  // namespace pts
