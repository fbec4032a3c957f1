#include <array>
#include <cctype>
#include <charconv>

#include "pes/error.hpp"
#include "pes/parser.hpp"

namespace pes {

namespace {

constexpr std::array section_words = {"CLOCKS",    "CONTROL",   "INITIALLY", "PREDICATE",
                                      "START",     "EQUATIONS", "INVARIANT", "TRANSITIONS"};
constexpr std::array plain_keywords = {"mu", "nu", "time", "UnableWaitInf", "AbleWaitInf"};
constexpr std::array backslash_words = {"forall", "exists", "rel", "AllAct", "ExistAct"};

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

template <std::size_t N>
bool contains(const std::array<const char*, N>& words, std::string_view w) {
  for (const char* k : words)
    if (w == k)
      return true;
  return false;
}

class Lexer {
public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space_and_comments();
      Token t;
      t.line = line_;
      t.column = col_;
      if (pos_ >= src_.size()) {
        t.kind = TokenKind::end;
        out.push_back(t);
        return out;
      }
      char c = src_[pos_];
      if (is_ident_start(c)) {
        std::string word = take_while(is_ident_char);
        if (contains(section_words, word) && peek() == ':') {
          advance();
          t.kind = TokenKind::keyword;
          t.text = word + ":";
        } else if (contains(plain_keywords, word)) {
          t.kind = TokenKind::keyword;
          t.text = word;
        } else {
          t.kind = TokenKind::identifier;
          t.text = word;
        }
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '-' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
        lex_integer(t);
      } else if (c == '#') {
        advance();
        while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t'))
          advance();
        std::string word = take_while(is_ident_char);
        if (word != "define")
          throw SourceError(ErrorKind::lex, t.line, t.column, "expected 'define' after '#'");
        t.kind = TokenKind::keyword;
        t.text = "#define";
      } else if (c == '\\') {
        advance();
        std::string word = take_while(is_ident_char);
        if (!contains(backslash_words, word))
          throw SourceError(ErrorKind::lex, t.line, t.column,
                            "unknown keyword '\\" + word + "'");
        t.kind = TokenKind::keyword;
        t.text = "\\" + word;
      } else {
        lex_punct(t);
      }
      out.push_back(std::move(t));
    }
  }

private:
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  template <class Pred>
  std::string take_while(Pred p) {
    std::size_t start = pos_;
    while (pos_ < src_.size() && p(src_[pos_]))
      advance();
    return std::string(src_.substr(start, pos_ - start));
  }

  void skip_space_and_comments() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n')
          advance();
      } else {
        break;
      }
    }
  }

  void lex_integer(Token& t) {
    std::size_t start = pos_;
    if (src_[pos_] == '-')
      advance();
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
      advance();
    std::string_view digits = src_.substr(start, pos_ - start);
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (ec != std::errc() || v > INT32_MAX / 4 || v < -(INT32_MAX / 4))
      throw SourceError(ErrorKind::lex, t.line, t.column,
                        "integer literal out of range: " + std::string(digits));
    t.kind = TokenKind::integer;
    t.text = std::string(digits);
    t.value = v;
  }

  void lex_punct(Token& t) {
    static constexpr std::array two = {"==", "!=", "<=", ">=", "->", "&&", "||"};
    for (const char* op : two) {
      if (peek() == op[0] && peek(1) == op[1]) {
        advance();
        advance();
        t.kind = TokenKind::punct;
        t.text = op;
        return;
      }
    }
    char c = peek();
    static constexpr std::string_view singles = "(){}[],;:=<>";
    if (singles.find(c) == std::string_view::npos)
      throw SourceError(ErrorKind::lex, t.line, t.column,
                        std::string("illegal character '") + c + "'");
    advance();
    t.kind = TokenKind::punct;
    t.text = std::string(1, c);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

} // namespace

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

const char* to_string(ErrorKind k) {
  switch (k) {
  case ErrorKind::lex: return "lex error";
  case ErrorKind::syntax: return "syntax error";
  case ErrorKind::unresolved: return "unresolved identifier";
  case ErrorKind::duplicate: return "duplicate definition";
  case ErrorKind::validation: return "validation error";
  case ErrorKind::config: return "configuration error";
  case ErrorKind::resource: return "resource limit exceeded";
  case ErrorKind::oracle_limit: return "oracle limit exceeded";
  }
  return "error";
}

const char* to_string(Parity p) { return p == Parity::mu ? "mu" : "nu"; }

} // namespace pes
