#pragma once

#include <stdexcept>
#include <string>

#include "ffsim/agentspeak/ast.hpp"

namespace ffsim::agentspeak {

/// Raised for both lexical and grammatical errors; carries the 1-based
/// source position of the offending token.
class ParseError : public std::runtime_error {
public:
  ParseError(std::string message, int line, int column)
      : std::runtime_error(message + " at " + std::to_string(line) + ":" +
                           std::to_string(column)),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

private:
  int line_;
  int column_;
};

/// Parses an agent program:
///
///   belief.                       ground initial belief
///   !goal.                        initial goal
///   trigger : context <- body.    plan (context optional)
///
/// Triggers are +lit, -lit, +!goal, -!goal. Context conditions are separated
/// by `&`; body steps by `;`. `//` starts a comment.
AgentProgram parse_program(const std::string& source);

}  // namespace ffsim::agentspeak
