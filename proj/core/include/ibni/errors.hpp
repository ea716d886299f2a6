#pragma once

#include <stdexcept>
#include <string>

namespace ibni {

/// Base class for every error raised by the checker pipeline.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed program, policy, driver or script text.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, int line, int column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// A big-step rule had no applicable case (bad projection, deref of a
/// non-location, operator on mismatched primitive kinds, ...).
class EvalError : public Error {
 public:
  using Error::Error;
};

/// The queue head is addressed to a channel with no installed handler.
class StuckError : public Error {
 public:
  StuckError(const std::string& channel)
      : Error("stuck: no handler installed for channel '" + channel + "'"), channel_(channel) {}
  const std::string& channel() const { return channel_; }

 private:
  std::string channel_;
};

/// Symbolic exploration exceeded its configured path budget.
class PathBudgetError : public Error {
 public:
  using Error::Error;
};

/// A policy atom's truth depends on the value of a symbolic secret.
class SymbolicTruthError : public Error {
 public:
  using Error::Error;
};

/// The satisfiability procedure ran out of its conflict or size budget.
class SolverResourceError : public Error {
 public:
  using Error::Error;
};

/// An external solver process failed or replied with something unparseable.
class SolverProcessError : public Error {
 public:
  using Error::Error;
};

/// Ill-formed policy: unknown level, unbound variable, malformed lattice.
class PolicyError : public Error {
 public:
  using Error::Error;
};

}  // namespace ibni
