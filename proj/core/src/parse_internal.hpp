#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "mdl/errors.hpp"
#include "mdl/guard.hpp"
#include "mdl/source.hpp"
#include "mdl/term.hpp"

namespace mdl::detail {

enum class Tok : unsigned char {
  Ident,
  LBrace,      // {
  RBrace,      // }
  LParen,      // (
  RParen,      // )
  LChoice,     // (:
  RChoice,     // :)
  Less,        // <
  Greater,     // >
  Leq,         // <=
  Comma,
  Pipe,        // |
  Semi,
  Colon,
  AndAnd,
  OrOr,
  Arrow,       // ->
  Bang,
  Dollar,
  Caret,
  Dot,
  End,
};

const char* token_name(Tok t);

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourceSpan span;
};

class Lexer {
 public:
  Lexer(std::string_view source, std::string filename);
  const Token& peek() const { return current_; }
  Token next();  // returns current, advances

 private:
  void advance();
  SourceSpan span_from(std::size_t begin, int line, int column) const;

  std::string_view src_;
  std::shared_ptr<const std::string> file_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
  Token current_;
};

class Parser {
 public:
  Parser(std::string_view source, std::string filename) : lexer_(source, std::move(filename)) {}

  const Token& peek() const { return lexer_.peek(); }
  bool at(Tok kind) const { return peek().kind == kind; }
  Token expect(Tok kind, const char* what);
  bool accept(Tok kind);
  /// Accepts an identifier with the exact given text (contextual keyword).
  bool accept_word(const char* word);
  Token expect_word(const char* word);

  Term parse_term();
  Guard parse_guard();

  [[noreturn]] void fail(const std::string& message, std::vector<std::string> expected = {});

 private:
  Guard parse_guard_or();
  Guard parse_guard_and();
  Guard parse_guard_unary();
  std::vector<Element> parse_elements(Tok closer);

  Lexer lexer_;
};

}  // namespace mdl::detail
