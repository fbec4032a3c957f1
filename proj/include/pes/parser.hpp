#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "pes/ast.hpp"

namespace pes {

enum class TokenKind {
  keyword,    // section headers (with the colon), #define, mu, nu, time, backslash words, wait shortcuts
  identifier,
  integer,
  punct,      // ( ) { } [ ] , ; : = == != < <= > >= -> && ||
  end,
};

struct Token {
  TokenKind kind = TokenKind::end;
  std::string text;
  std::int64_t value = 0; // integer tokens
  int line = 1;
  int column = 1;

  bool is(TokenKind k, std::string_view t) const { return kind == k && text == t; }
  bool operator==(const Token& o) const {
    return kind == o.kind && text == o.text && value == o.value;
  }
};

// Splits source into tokens; the last token is always `end`. Text from "//" to the end of
// the line is skipped.
std::vector<Token> tokenize(std::string_view source);

// Parses and resolves a complete PES source.
PesFile parse_pes(std::string_view source);
// Same, with #define values replaced by `overrides`; every override must name a #define.
PesFile parse_pes(std::string_view source,
                  const std::map<std::string, std::int32_t>& overrides);

// Concrete syntax for a parsed file; parse_pes(pretty_print(f)) == f.
std::string pretty_print(const PesFile& file);

// One formula in concrete syntax, every compound node parenthesized.
std::string format_formula(const Formula& f);

} // namespace pes
