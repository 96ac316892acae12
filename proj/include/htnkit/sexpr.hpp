#ifndef HTNKIT_SEXPR_HPP
#define HTNKIT_SEXPR_HPP

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

// S-expression reader shared by the domain/problem parser. Atoms are
// lowercased (the language is case-insensitive); `;` starts a comment.

namespace htnkit {

struct SourceSpan {
  std::string file;
  int line = 1;    // 1-based
  int column = 1;  // 1-based
  int length = 0;

  std::string str() const;
};

enum class ParseErrorKind {
  SyntaxError,
  UndeclaredSymbol,
  ArityMismatch,
  TypeMismatch,
  DuplicateDefinition,
  DomainMismatch,
};

struct ParseError : std::runtime_error {
  ParseErrorKind kind;
  SourceSpan span;
  ParseError(ParseErrorKind kind, SourceSpan span, const std::string& message);
};

const char* parse_error_kind_name(ParseErrorKind kind);

struct SExpr {
  bool is_atom = false;
  std::string atom;           // lowercased token text when is_atom
  std::vector<SExpr> items;   // children when list
  SourceSpan span;

  bool is_list() const { return !is_atom; }
};

// Reads exactly one toplevel expression; trailing garbage is a SyntaxError.
SExpr read_sexpr(const std::string& text, const std::string& filename);

}  // namespace htnkit

#endif
