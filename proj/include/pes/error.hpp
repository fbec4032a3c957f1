#pragma once

#include <stdexcept>
#include <string>

namespace pes {

enum class ErrorKind {
  lex,
  syntax,
  unresolved,
  duplicate,
  validation,   // alternation violations, undefined start, malformed bindings
  config,       // e.g. empty initial zone, invalid benchmark combination
  resource,     // zone cap exceeded; result inconclusive
  oracle_limit, // region oracle scale limits exceeded
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

// Error carrying a source position (1-based).
class SourceError : public Error {
public:
  SourceError(ErrorKind kind, int line, int column, const std::string& msg)
      : Error(kind, std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
        line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

private:
  int line_;
  int column_;
};

} // namespace pes
