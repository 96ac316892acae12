#ifndef HTNKIT_PARSER_HPP
#define HTNKIT_PARSER_HPP

#include <string>

#include "htnkit/ast.hpp"
#include "htnkit/sexpr.hpp"

namespace htnkit {

// Both parsers throw ParseError with a SourceSpan inside the offending token.
LiftedDomain parse_domain(const std::string& text, const std::string& filename = "<domain>");
LiftedProblem parse_problem(const std::string& text, const LiftedDomain& domain,
                            const std::string& filename = "<problem>");

// Canonical pretty-printers; parse(print(x)) is structurally equal to x.
std::string print_domain(const LiftedDomain& domain);
std::string print_problem(const LiftedProblem& problem);

}  // namespace htnkit

#endif
