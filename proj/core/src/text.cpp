#include "mdl/text.hpp"

#include <cctype>

#include "parse_internal.hpp"

namespace mdl {

namespace detail {

const char* token_name(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LChoice: return "'(:'";
    case Tok::RChoice: return "':)'";
    case Tok::Less: return "'<'";
    case Tok::Greater: return "'>'";
    case Tok::Leq: return "'<='";
    case Tok::Comma: return "','";
    case Tok::Pipe: return "'|'";
    case Tok::Semi: return "';'";
    case Tok::Colon: return "':'";
    case Tok::AndAnd: return "'&&'";
    case Tok::OrOr: return "'||'";
    case Tok::Arrow: return "'->'";
    case Tok::Bang: return "'!'";
    case Tok::Dollar: return "'$'";
    case Tok::Caret: return "'^'";
    case Tok::Dot: return "'.'";
    case Tok::End: return "end of input";
  }
  return "?";
}

Lexer::Lexer(std::string_view source, std::string filename)
    : src_(source), file_(std::make_shared<const std::string>(std::move(filename))) {
  advance();
}

Token Lexer::next() {
  Token out = current_;
  advance();
  return out;
}

SourceSpan Lexer::span_from(std::size_t begin, int line, int column) const {
  SourceSpan span;
  span.file = file_;
  span.line = line;
  span.column = column;
  span.byte_begin = begin;
  span.byte_end = pos_;
  return span;
}

void Lexer::advance() {
  // Skip whitespace and // comments.
  for (;;) {
    if (pos_ >= src_.size()) break;
    const char c = src_[pos_];
    if (c == '\n') {
      ++pos_;
      ++line_;
      column_ = 1;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++pos_;
      ++column_;
      continue;
    }
    if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
      while (pos_ < src_.size() && src_[pos_] != '\n') {
        ++pos_;
        ++column_;
      }
      continue;
    }
    break;
  }

  const std::size_t begin = pos_;
  const int line = line_;
  const int column = column_;
  auto make = [&](Tok kind, std::size_t length) {
    pos_ += length;
    column_ += static_cast<int>(length);
    current_ = Token{kind, std::string(src_.substr(begin, length)), span_from(begin, line, column)};
  };

  if (pos_ >= src_.size()) {
    current_ = Token{Tok::End, "", span_from(begin, line, column)};
    return;
  }

  const char c = src_[pos_];
  const char c1 = pos_ + 1 < src_.size() ? src_[pos_ + 1] : '\0';
  if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
    std::size_t end = pos_;
    while (end < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_')) {
      ++end;
    }
    make(Tok::Ident, end - pos_);
    return;
  }
  switch (c) {
    case '{': make(Tok::LBrace, 1); return;
    case '}': make(Tok::RBrace, 1); return;
    case '(': c1 == ':' ? make(Tok::LChoice, 2) : make(Tok::LParen, 1); return;
    case ')': make(Tok::RParen, 1); return;
    case ':': c1 == ')' ? make(Tok::RChoice, 2) : make(Tok::Colon, 1); return;
    case '<': c1 == '=' ? make(Tok::Leq, 2) : make(Tok::Less, 1); return;
    case '>': make(Tok::Greater, 1); return;
    case ',': make(Tok::Comma, 1); return;
    case '|': c1 == '|' ? make(Tok::OrOr, 2) : make(Tok::Pipe, 1); return;
    case ';': make(Tok::Semi, 1); return;
    case '&':
      if (c1 == '&') {
        make(Tok::AndAnd, 2);
        return;
      }
      break;
    case '-':
      if (c1 == '>') {
        make(Tok::Arrow, 2);
        return;
      }
      break;
    case '!': make(Tok::Bang, 1); return;
    case '$': make(Tok::Dollar, 1); return;
    case '^': make(Tok::Caret, 1); return;
    case '.': make(Tok::Dot, 1); return;
    default: break;
  }
  throw ParseError(std::string("unexpected character '") + c + "'", span_from(begin, line, column));
}

Token Parser::expect(Tok kind, const char* what) {
  if (!at(kind)) {
    fail(std::string("expected ") + token_name(kind) + (what ? std::string(" (") + what + ")" : "") + ", found " +
             token_name(peek().kind),
         {token_name(kind)});
  }
  return lexer_.next();
}

bool Parser::accept(Tok kind) {
  if (!at(kind)) return false;
  lexer_.next();
  return true;
}

bool Parser::accept_word(const char* word) {
  if (!at(Tok::Ident) || peek().text != word) return false;
  lexer_.next();
  return true;
}

Token Parser::expect_word(const char* word) {
  if (!at(Tok::Ident) || peek().text != word) {
    fail(std::string("expected '") + word + "', found " + token_name(peek().kind), {word});
  }
  return lexer_.next();
}

void Parser::fail(const std::string& message, std::vector<std::string> expected) {
  throw ParseError(message, peek().span, std::move(expected));
}

Guard Parser::parse_guard() {
  Guard lhs = parse_guard_or();
  if (accept(Tok::Arrow)) {
    return Guard::implication(std::move(lhs), parse_guard());  // right-associative
  }
  return lhs;
}

Guard Parser::parse_guard_or() {
  Guard out = parse_guard_and();
  while (accept(Tok::OrOr)) out = Guard::disjunction(std::move(out), parse_guard_and());
  return out;
}

Guard Parser::parse_guard_and() {
  Guard out = parse_guard_unary();
  while (accept(Tok::AndAnd)) out = Guard::conjunction(std::move(out), parse_guard_unary());
  return out;
}

Guard Parser::parse_guard_unary() {
  if (accept(Tok::Bang)) return Guard::negation(parse_guard_unary());
  if (accept(Tok::LParen)) {
    Guard inner = parse_guard();
    expect(Tok::RParen, "closing a guard group");
    return inner;
  }
  if (at(Tok::Ident)) {
    Token tok = lexer_.next();
    if (tok.text == "true") return Guard::constant(true);
    if (tok.text == "false") return Guard::constant(false);
    return Guard::var(tok.text);
  }
  fail("expected a guard", {"'!'", "'('", "'true'", "'false'", "identifier"});
}

namespace {

SourceSpan enclose(SourceSpan open, const SourceSpan& close) {
  open.byte_end = close.byte_end;
  return open;
}

}  // namespace

std::vector<Element> Parser::parse_elements(Tok closer) {
  std::vector<Element> elements;
  if (at(closer) || at(Tok::Pipe)) return elements;
  for (;;) {
    Token label = expect(Tok::Ident, "element label");
    Guard guard = Guard::constant(true);
    if (accept(Tok::LParen)) {
      guard = parse_guard();
      expect(Tok::RParen, "closing an element guard");
    }
    expect(Tok::Colon, "between label and term");
    Term payload = parse_term();
    elements.emplace_back(label.text, std::move(guard), std::move(payload));
    if (!accept(Tok::Comma)) break;
  }
  return elements;
}

Term Parser::parse_term() {
  const Token start = peek();
  switch (start.kind) {
    case Tok::Ident: {
      Token tok = lexer_.next();
      return Term::symbol(tok.text).with_span(tok.span);
    }
    case Tok::Dollar: {
      lexer_.next();
      Token name = expect(Tok::Ident, "down-coerced variable name");
      return Term::down_var(name.text).with_span(start.span);
    }
    case Tok::Caret: {
      lexer_.next();
      Token name = expect(Tok::Ident, "up-coerced variable name");
      return Term::up_var(name.text).with_span(start.span);
    }
    case Tok::LBrace: {
      lexer_.next();
      std::vector<Element> elements = parse_elements(Tok::RBrace);
      std::optional<std::string> tail;
      if (accept(Tok::Pipe)) {
        if (at(Tok::Caret)) fail("a record tail must be a down-coerced variable ($name)");
        expect(Tok::Dollar, "record tail");
        tail = expect(Tok::Ident, "record tail name").text;
      }
      Token close = expect(Tok::RBrace, "closing a record");
      return Term::record(std::move(elements), std::move(tail)).with_span(enclose(start.span, close.span));
    }
    case Tok::LChoice: {
      lexer_.next();
      std::vector<Element> elements = parse_elements(Tok::RChoice);
      std::optional<std::string> tail;
      if (accept(Tok::Pipe)) {
        if (at(Tok::Dollar)) fail("a choice tail must be an up-coerced variable (^name)");
        expect(Tok::Caret, "choice tail");
        tail = expect(Tok::Ident, "choice tail name").text;
      }
      Token close = expect(Tok::RChoice, "closing a choice");
      return Term::choice(std::move(elements), std::move(tail)).with_span(enclose(start.span, close.span));
    }
    case Tok::LParen: {
      lexer_.next();
      std::vector<Term> items;
      items.push_back(parse_term());
      while (accept(Tok::Comma)) items.push_back(parse_term());
      Token close = expect(Tok::RParen, "closing a tuple");
      return Term::tuple(std::move(items)).with_span(enclose(start.span, close.span));
    }
    case Tok::Less: {
      lexer_.next();
      std::vector<SwitchAlt> alts;
      for (;;) {
        Guard guard = parse_guard();
        expect(Tok::Colon, "between switch guard and term");
        Term body = parse_term();
        alts.emplace_back(std::move(guard), std::move(body));
        if (!accept(Tok::Comma)) break;
      }
      Token close = expect(Tok::Greater, "closing a switch");
      return Term::switch_of(std::move(alts)).with_span(enclose(start.span, close.span));
    }
    default:
      fail("expected a term, found " + std::string(token_name(start.kind)),
           {"identifier", "'('", "'{'", "'(:'", "'<'", "'$'", "'^'"});
  }
}

}  // namespace detail

Term parse_term(std::string_view source, std::string filename) {
  detail::Parser parser(source, std::move(filename));
  Term term = parser.parse_term();
  parser.expect(detail::Tok::End, "after the term");
  return term;
}

Guard parse_guard(std::string_view source, std::string filename) {
  detail::Parser parser(source, std::move(filename));
  Guard guard = parser.parse_guard();
  parser.expect(detail::Tok::End, "after the guard");
  return guard;
}

std::vector<ParsedConstraint> parse_constraint_file(std::string_view source, std::string filename) {
  detail::Parser parser(source, std::move(filename));
  std::vector<ParsedConstraint> out;
  while (!parser.at(detail::Tok::End)) {
    SourceSpan span = parser.peek().span;
    Term lhs = parser.parse_term();
    parser.expect(detail::Tok::Leq, "between constraint sides");
    Term rhs = parser.parse_term();
    parser.expect(detail::Tok::Semi, "terminating a constraint");
    out.push_back(ParsedConstraint{std::move(lhs), std::move(rhs), std::move(span)});
  }
  return out;
}

namespace {

void print_term_into(const Term& term, std::string& out) {
  switch (term.kind()) {
    case TermKind::Symbol:
      out += term.name();
      return;
    case TermKind::DownVar:
      out += '$';
      out += term.name();
      return;
    case TermKind::UpVar:
      out += '^';
      out += term.name();
      return;
    case TermKind::Tuple: {
      out += '(';
      for (std::size_t i = 0; i < term.items().size(); ++i) {
        if (i > 0) out += ", ";
        print_term_into(term.items()[i], out);
      }
      out += ')';
      return;
    }
    case TermKind::Record:
    case TermKind::Choice: {
      const bool record = term.kind() == TermKind::Record;
      out += record ? "{" : "(:";
      bool first = true;
      for (const Element& e : term.elements()) {
        out += first ? (record ? "" : " ") : ", ";
        first = false;
        out += e.label;
        if (!e.guard.is_true()) {
          out += '(';
          out += e.guard.to_string();
          out += ')';
        }
        out += ": ";
        print_term_into(e.term(), out);
      }
      if (term.tail()) {
        out += " | ";
        out += record ? '$' : '^';
        out += *term.tail();
      }
      out += record ? "}" : " :)";
      return;
    }
    case TermKind::Switch: {
      out += '<';
      for (std::size_t i = 0; i < term.alternatives().size(); ++i) {
        if (i > 0) out += ", ";
        out += term.alternatives()[i].guard.to_string();
        out += ": ";
        print_term_into(term.alternatives()[i].term(), out);
      }
      out += '>';
      return;
    }
  }
}

}  // namespace

std::string print_term(const Term& term) {
  std::string out;
  print_term_into(term, out);
  return out;
}

std::string print_guard(const Guard& guard) { return guard.to_string(); }

}  // namespace mdl
