#ifndef HTNKIT_GENERATORS_HPP
#define HTNKIT_GENERATORS_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

// Benchmark generators. All output is a pure function of the parameters and
// the seed; random choices go through a local helper so files are
// byte-identical across platforms.

namespace htnkit {

struct GeneratedInstance {
  std::string domain_text;
  std::string problem_text;
};

// Random connected road map with trucks and package delivery goals on the
// logistics-mini hierarchy. Every instance is solvable by construction.
GeneratedInstance gen_transport(int trucks, int packages, int locations, std::uint64_t seed);

// Context-free grammar in a normalized form: every right-hand side has at
// most two symbols (terminals or nonterminals); empty means epsilon.
struct Cfg {
  struct Production {
    std::string lhs;
    std::vector<std::string> rhs;
  };
  std::vector<std::string> terminals;
  std::vector<std::string> nonterminals;
  std::string start;
  std::vector<Production> productions;
};

// Deterministic finite automaton over the grammar's terminals; the
// transition function must be total.
struct Dfa {
  std::vector<std::string> states;
  std::string start;
  std::vector<std::string> accepting;
  std::map<std::pair<std::string, std::string>, std::string> transition;
};

struct GrammarNotNormalized : std::runtime_error {
  explicit GrammarNotNormalized(const std::string& message);
};

// Hierarchy encodes the grammar (task per nonterminal, ordered method per
// production, action per terminal); the automaton runs in the state. The
// instance is solvable iff the intersection language is nonempty.
GeneratedInstance gen_grammar_intersection(const Cfg& cfg, const Dfa& dfa, std::uint64_t seed);

struct GrammarSpec {
  Cfg cfg;
  Dfa dfa;
};

// Line-oriented description: `terminals`, `nonterminals`, `start`, `prod`,
// `dfa-states`, `dfa-start`, `dfa-accept`, `dfa-trans`; `#` comments.
GrammarSpec parse_grammar_spec(const std::string& text);

std::string format_grammar_spec(const GrammarSpec& spec);

}  // namespace htnkit

#endif
