#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wadge {

/// Syntax or validation error in a text document, with 1-based position.
class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

/// Operands defined over different alphabets.
class AlphabetMismatch : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace wadge
