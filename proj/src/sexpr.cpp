#include "htnkit/sexpr.hpp"

#include <cctype>

namespace htnkit {

std::string SourceSpan::str() const {
  return file + ":" + std::to_string(line) + ":" + std::to_string(column);
}

ParseError::ParseError(ParseErrorKind k, SourceSpan s, const std::string& message)
    : std::runtime_error(s.str() + ": " + parse_error_kind_name(k) + ": " + message),
      kind(k),
      span(std::move(s)) {}

const char* parse_error_kind_name(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::SyntaxError: return "syntax error";
    case ParseErrorKind::UndeclaredSymbol: return "undeclared symbol";
    case ParseErrorKind::ArityMismatch: return "arity mismatch";
    case ParseErrorKind::TypeMismatch: return "type mismatch";
    case ParseErrorKind::DuplicateDefinition: return "duplicate definition";
    case ParseErrorKind::DomainMismatch: return "domain mismatch";
  }
  return "error";
}

namespace {

class Reader {
 public:
  Reader(const std::string& text, std::string filename)
      : text_(text), file_(std::move(filename)) {}

  SExpr read_toplevel() {
    skip_trivia();
    SExpr e = read_expr();
    skip_trivia();
    if (pos_ < text_.size())
      throw ParseError(ParseErrorKind::SyntaxError, here(1), "trailing input after expression");
    return e;
  }

 private:
  const std::string& text_;
  std::string file_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;

  SourceSpan here(int length) const { return {file_, line_, col_, length}; }

  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  void advance() {
    if (text_[pos_] == '\n') {
      line_++;
      col_ = 1;
    } else {
      col_++;
    }
    pos_++;
  }

  void skip_trivia() {
    while (!eof()) {
      char c = peek();
      if (c == ';') {
        while (!eof() && peek() != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  static bool atom_char(char c) {
    if (std::isspace(static_cast<unsigned char>(c))) return false;
    return c != '(' && c != ')' && c != ';';
  }

  SExpr read_expr() {
    if (eof()) throw ParseError(ParseErrorKind::SyntaxError, here(0), "unexpected end of input");
    if (peek() == '(') {
      SExpr list;
      list.span = here(1);
      advance();
      skip_trivia();
      while (!eof() && peek() != ')') {
        list.items.push_back(read_expr());
        skip_trivia();
      }
      if (eof())
        throw ParseError(ParseErrorKind::SyntaxError, here(0), "missing ')'");
      advance();  // ')'
      return list;
    }
    if (peek() == ')')
      throw ParseError(ParseErrorKind::SyntaxError, here(1), "unexpected ')'");

    SExpr atom;
    atom.is_atom = true;
    atom.span = here(0);
    while (!eof() && atom_char(peek())) {
      atom.atom += static_cast<char>(std::tolower(static_cast<unsigned char>(peek())));
      advance();
    }
    atom.span.length = static_cast<int>(atom.atom.size());
    return atom;
  }
};

}  // namespace

SExpr read_sexpr(const std::string& text, const std::string& filename) {
  return Reader(text, filename).read_toplevel();
}

}  // namespace htnkit
