#include "htnkit/generators.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "htnkit/parser.hpp"

namespace htnkit {

GrammarNotNormalized::GrammarNotNormalized(const std::string& message)
    : std::runtime_error(message) {}

namespace {

// Uniform draw independent of the standard library's distribution details.
std::uint64_t rand_below(std::mt19937_64& rng, std::uint64_t n) {
  if (n == 0) return 0;
  std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                        std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % n;
}

const char* kTransportDomain = R"((define (domain transport)
  (:requirements :hierarchy :typing :negative-preconditions :method-preconditions)
  (:types
    truck - object
    package - object
    location - object)
  (:predicates
    (at ?t - truck ?l - location)
    (pat ?p - package ?l - location)
    (in ?p - package ?t - truck)
    (road ?a - location ?b - location))
  (:task deliver :parameters (?p - package ?l - location))
  (:task get-to :parameters (?t - truck ?l - location))
  (:action drive
    :parameters (?t - truck ?a - location ?b - location)
    :precondition (and (at ?t ?a) (road ?a ?b))
    :effect (and (not (at ?t ?a)) (at ?t ?b)))
  (:action load
    :parameters (?t - truck ?l - location ?p - package)
    :precondition (and (at ?t ?l) (pat ?p ?l))
    :effect (and (not (pat ?p ?l)) (in ?p ?t)))
  (:action unload
    :parameters (?t - truck ?l - location ?p - package)
    :precondition (and (at ?t ?l) (in ?p ?t))
    :effect (and (not (in ?p ?t)) (pat ?p ?l)))
  (:method m-deliver
    :parameters (?p - package ?lp - location ?lg - location ?t - truck)
    :task (deliver ?p ?lg)
    :precondition (and (pat ?p ?lp))
    :ordered-subtasks (and
      (get-to ?t ?lp)
      (load ?t ?lp ?p)
      (get-to ?t ?lg)
      (unload ?t ?lg ?p)))
  (:method m-noop
    :parameters (?t - truck ?l - location)
    :task (get-to ?t ?l)
    :precondition (and (at ?t ?l))
    :ordered-subtasks ())
  (:method m-drive
    :parameters (?t - truck ?l - location ?via - location)
    :task (get-to ?t ?l)
    :ordered-subtasks (and
      (get-to ?t ?via)
      (drive ?t ?via ?l))))
)";

}  // namespace

GeneratedInstance gen_transport(int trucks, int packages, int locations, std::uint64_t seed) {
  if (trucks < 1 || packages < 1 || locations < 1)
    throw std::invalid_argument("gen_transport needs at least one truck, package and location");
  std::mt19937_64 rng(seed ^ 0x7472616e73ULL);

  auto loc = [](int i) { return "l" + std::to_string(i + 1); };
  auto trk = [](int i) { return "t" + std::to_string(i + 1); };
  auto pkg = [](int i) { return "p" + std::to_string(i + 1); };

  // Random spanning tree plus a few extra links; both directions of every
  // road are declared, so the map is strongly connected.
  std::set<std::pair<int, int>> roads;
  for (int i = 1; i < locations; ++i) {
    int parent = static_cast<int>(rand_below(rng, i));
    roads.emplace(std::min(i, parent), std::max(i, parent));
  }
  if (locations > 1) {
    int extras = static_cast<int>(rand_below(rng, locations));
    for (int e = 0; e < extras; ++e) {
      int a = static_cast<int>(rand_below(rng, locations));
      int b = static_cast<int>(rand_below(rng, locations));
      if (a != b) roads.emplace(std::min(a, b), std::max(a, b));
    }
  }

  std::ostringstream os;
  os << "(define (problem transport-t" << trucks << "p" << packages << "l" << locations << "s"
     << seed << ")\n";
  os << "  (:domain transport)\n";
  os << "  (:objects\n";
  for (int i = 0; i < trucks; ++i) os << "    " << trk(i) << " - truck\n";
  for (int i = 0; i < packages; ++i) os << "    " << pkg(i) << " - package\n";
  for (int i = 0; i < locations; ++i) os << "    " << loc(i) << " - location\n";
  os << "  )\n";

  std::vector<int> package_at(packages), package_goal(packages);
  os << "  (:htn :ordered-subtasks (and\n";
  for (int i = 0; i < packages; ++i) {
    package_at[i] = static_cast<int>(rand_below(rng, locations));
    package_goal[i] = static_cast<int>(rand_below(rng, locations));
    os << "    (deliver " << pkg(i) << " " << loc(package_goal[i]) << ")\n";
  }
  os << "  ))\n";

  os << "  (:init\n";
  for (int i = 0; i < trucks; ++i)
    os << "    (at " << trk(i) << " " << loc(static_cast<int>(rand_below(rng, locations)))
       << ")\n";
  for (int i = 0; i < packages; ++i)
    os << "    (pat " << pkg(i) << " " << loc(package_at[i]) << ")\n";
  for (const auto& [a, b] : roads) {
    os << "    (road " << loc(a) << " " << loc(b) << ")\n";
    os << "    (road " << loc(b) << " " << loc(a) << ")\n";
  }
  os << "  )\n";
  os << "  (:goal (and\n";
  for (int i = 0; i < packages; ++i)
    os << "    (pat " << pkg(i) << " " << loc(package_goal[i]) << ")\n";
  os << "  ))\n)\n";

  return {kTransportDomain, os.str()};
}

// ---------------------------------------------------------------------------
// Grammar intersection.

namespace {

void validate_symbol(const std::string& s, const char* what) {
  if (s.empty()) throw std::invalid_argument(std::string(what) + " must not be empty");
  for (char c : s) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
              c == '-' || c == '_';
    if (!ok)
      throw std::invalid_argument(std::string(what) + " '" + s + "' has unsupported characters");
  }
}

void validate_grammar(const Cfg& cfg, const Dfa& dfa) {
  std::set<std::string> terminals(cfg.terminals.begin(), cfg.terminals.end());
  std::set<std::string> nonterminals(cfg.nonterminals.begin(), cfg.nonterminals.end());
  for (const auto& t : cfg.terminals) validate_symbol(t, "terminal");
  for (const auto& n : cfg.nonterminals) validate_symbol(n, "nonterminal");
  if (!nonterminals.count(cfg.start))
    throw std::invalid_argument("start symbol is not a nonterminal");
  for (const auto& p : cfg.productions) {
    if (!nonterminals.count(p.lhs))
      throw std::invalid_argument("production for undeclared nonterminal " + p.lhs);
    if (p.rhs.size() > 2)
      throw GrammarNotNormalized("production for " + p.lhs + " has " +
                                 std::to_string(p.rhs.size()) + " symbols, at most 2 allowed");
    for (const auto& s : p.rhs)
      if (!terminals.count(s) && !nonterminals.count(s))
        throw std::invalid_argument("production symbol " + s + " is undeclared");
  }
  std::set<std::string> states(dfa.states.begin(), dfa.states.end());
  for (const auto& q : dfa.states) validate_symbol(q, "dfa state");
  if (!states.count(dfa.start)) throw std::invalid_argument("dfa start state is undeclared");
  for (const auto& q : dfa.accepting)
    if (!states.count(q)) throw std::invalid_argument("dfa accepting state is undeclared");
  for (const auto& [key, to] : dfa.transition) {
    if (!states.count(key.first) || !states.count(to))
      throw std::invalid_argument("dfa transition uses an undeclared state");
    if (!terminals.count(key.second))
      throw std::invalid_argument("dfa transition uses an undeclared terminal");
  }
  for (const auto& q : dfa.states)
    for (const auto& t : cfg.terminals)
      if (!dfa.transition.count({q, t}))
        throw std::invalid_argument("dfa is not total: no transition from " + q + " on " + t);
}

}  // namespace

GeneratedInstance gen_grammar_intersection(const Cfg& cfg, const Dfa& dfa, std::uint64_t seed) {
  validate_grammar(cfg, dfa);
  (void)seed;  // the encoding is deterministic; the seed only names the instance

  std::ostringstream d;
  d << "(define (domain grammar-intersection)\n";
  d << "  (:requirements :hierarchy :typing :negative-preconditions :method-preconditions)\n";
  d << "  (:types qstate - object)\n";
  d << "  (:predicates\n";
  d << "    (cur ?q - qstate)\n";
  d << "    (fin ?q - qstate)\n";
  for (const auto& t : cfg.terminals)
    d << "    (tr-" << t << " ?q1 - qstate ?q2 - qstate)\n";
  d << "  )\n";
  for (const auto& n : cfg.nonterminals) d << "  (:task nt-" << n << " :parameters ())\n";
  d << "  (:task finish :parameters ())\n";
  for (const auto& t : cfg.terminals) {
    d << "  (:action read-" << t << "\n";
    d << "    :parameters (?q1 - qstate ?q2 - qstate)\n";
    d << "    :precondition (and (cur ?q1) (tr-" << t << " ?q1 ?q2))\n";
    d << "    :effect (and (not (cur ?q1)) (cur ?q2)))\n";
  }
  d << "  (:action accept\n";
  d << "    :parameters (?q - qstate)\n";
  d << "    :precondition (and (cur ?q) (fin ?q)))\n";
  for (std::size_t i = 0; i < cfg.productions.size(); ++i) {
    const auto& p = cfg.productions[i];
    std::set<std::string> terminals(cfg.terminals.begin(), cfg.terminals.end());
    d << "  (:method m-p" << i << "\n    :parameters (";
    bool first = true;
    for (std::size_t j = 0; j < p.rhs.size(); ++j) {
      if (terminals.count(p.rhs[j])) {
        if (!first) d << " ";
        d << "?q" << j << "a - qstate ?q" << j << "b - qstate";
        first = false;
      }
    }
    d << ")\n    :task (nt-" << p.lhs << ")\n";
    if (p.rhs.empty()) {
      d << "    :ordered-subtasks ())\n";
    } else {
      d << "    :ordered-subtasks (and";
      for (std::size_t j = 0; j < p.rhs.size(); ++j) {
        if (terminals.count(p.rhs[j]))
          d << " (read-" << p.rhs[j] << " ?q" << j << "a ?q" << j << "b)";
        else
          d << " (nt-" << p.rhs[j] << ")";
      }
      d << "))\n";
    }
  }
  d << "  (:method m-fin\n";
  d << "    :parameters (?q - qstate)\n";
  d << "    :task (finish)\n";
  d << "    :ordered-subtasks (accept ?q))\n";
  d << ")\n";

  std::ostringstream p;
  p << "(define (problem grammar-s" << seed << ")\n";
  p << "  (:domain grammar-intersection)\n";
  p << "  (:objects\n";
  for (const auto& q : dfa.states) p << "    " << q << " - qstate\n";
  p << "  )\n";
  p << "  (:htn :ordered-subtasks (and (nt-" << cfg.start << ") (finish)))\n";
  p << "  (:init\n";
  p << "    (cur " << dfa.start << ")\n";
  for (const auto& q : dfa.accepting) p << "    (fin " << q << ")\n";
  for (const auto& [key, to] : dfa.transition)
    p << "    (tr-" << key.second << " " << key.first << " " << to << ")\n";
  p << "  )\n)\n";

  return {d.str(), p.str()};
}

GrammarSpec parse_grammar_spec(const std::string& text) {
  GrammarSpec spec;
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  auto bad = [&](const std::string& msg) {
    throw std::invalid_argument("grammar spec line " + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(is, line)) {
    line_no++;
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw) || kw[0] == '#') continue;
    std::vector<std::string> rest;
    std::string tok;
    while (ls >> tok) rest.push_back(tok);
    if (kw == "terminals") {
      spec.cfg.terminals = rest;
    } else if (kw == "nonterminals") {
      spec.cfg.nonterminals = rest;
    } else if (kw == "start") {
      if (rest.size() != 1) bad("start takes one symbol");
      spec.cfg.start = rest[0];
    } else if (kw == "prod") {
      if (rest.empty()) bad("prod needs a left-hand side");
      Cfg::Production p;
      p.lhs = rest[0];
      p.rhs.assign(rest.begin() + 1, rest.end());
      spec.cfg.productions.push_back(std::move(p));
    } else if (kw == "dfa-states") {
      spec.dfa.states = rest;
    } else if (kw == "dfa-start") {
      if (rest.size() != 1) bad("dfa-start takes one state");
      spec.dfa.start = rest[0];
    } else if (kw == "dfa-accept") {
      spec.dfa.accepting = rest;
    } else if (kw == "dfa-trans") {
      if (rest.size() != 3) bad("dfa-trans takes: from terminal to");
      if (!spec.dfa.transition.emplace(std::make_pair(rest[0], rest[1]), rest[2]).second)
        bad("duplicate transition");
    } else {
      bad("unknown keyword " + kw);
    }
  }
  return spec;
}

std::string format_grammar_spec(const GrammarSpec& spec) {
  std::ostringstream os;
  auto words = [&](const char* kw, const std::vector<std::string>& items) {
    os << kw;
    for (const auto& s : items) os << " " << s;
    os << "\n";
  };
  words("terminals", spec.cfg.terminals);
  words("nonterminals", spec.cfg.nonterminals);
  os << "start " << spec.cfg.start << "\n";
  for (const auto& p : spec.cfg.productions) {
    os << "prod " << p.lhs;
    for (const auto& s : p.rhs) os << " " << s;
    os << "\n";
  }
  words("dfa-states", spec.dfa.states);
  os << "dfa-start " << spec.dfa.start << "\n";
  words("dfa-accept", spec.dfa.accepting);
  for (const auto& [key, to] : spec.dfa.transition)
    os << "dfa-trans " << key.first << " " << key.second << " " << to << "\n";
  return os.str();
}

}  // namespace htnkit
