#include "htnkit/parser.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace htnkit {

const Predicate* LiftedDomain::find_predicate(const std::string& n) const {
  for (const auto& p : predicates)
    if (p.name == n) return &p;
  return nullptr;
}

const LiftedTask* LiftedDomain::find_task(const std::string& n) const {
  for (const auto& t : tasks)
    if (t.name == n) return &t;
  return nullptr;
}

const LiftedAction* LiftedDomain::find_action(const std::string& n) const {
  for (const auto& a : actions)
    if (a.name == n) return &a;
  return nullptr;
}

namespace {

const std::set<std::string> kKnownRequirements = {
    ":hierarchy", ":typing", ":negative-preconditions", ":method-preconditions",
    ":action-costs"};

[[noreturn]] void fail(ParseErrorKind kind, const SExpr& at, const std::string& message) {
  throw ParseError(kind, at.span, message);
}

bool is_keyword(const std::string& s) { return !s.empty() && s[0] == ':'; }
bool is_variable(const std::string& s) { return !s.empty() && s[0] == '?'; }

const std::string& expect_atom(const SExpr& e, const std::string& what) {
  if (!e.is_atom) fail(ParseErrorKind::SyntaxError, e, "expected " + what);
  return e.atom;
}

const std::string& expect_name(const SExpr& e, const std::string& what) {
  const std::string& s = expect_atom(e, what);
  if (is_keyword(s) || is_variable(s) || s == "-")
    fail(ParseErrorKind::SyntaxError, e, "expected " + what + ", got '" + s + "'");
  return s;
}

bool head_is(const SExpr& e, const std::string& kw) {
  return e.is_list() && !e.items.empty() && e.items[0].is_atom && e.items[0].atom == kw;
}

// Type hierarchy helpers over TypeDecl lists. "object" is the implicit root.
struct TypeTable {
  std::map<std::string, std::vector<std::string>> parents;

  bool declared(const std::string& t) const { return t == "object" || parents.count(t) > 0; }

  bool is_subtype(const std::string& t, const std::string& ancestor) const {
    if (ancestor == "object" || t == ancestor) return true;
    auto it = parents.find(t);
    if (it == parents.end()) return false;
    for (const auto& p : it->second)
      if (is_subtype(p, ancestor)) return true;
    return false;
  }

  // Two types overlap when some declared type lies below both.
  bool overlap(const std::string& a, const std::string& b) const {
    if (is_subtype(a, b) || is_subtype(b, a)) return true;
    for (const auto& [t, _] : parents)
      if (is_subtype(t, a) && is_subtype(t, b)) return true;
    return false;
  }
};

TypeTable make_type_table(const LiftedDomain& d) {
  TypeTable tt;
  for (const auto& t : d.types) tt.parents[t.name] = t.parents;
  return tt;
}

// name* ( "-" type name* )* with a default type for untyped tails.
template <typename Sink>
void parse_typed_list(const std::vector<SExpr>& items, std::size_t begin, bool variables,
                      const Sink& sink) {
  std::vector<const SExpr*> pending;
  for (std::size_t i = begin; i < items.size(); ++i) {
    const SExpr& e = items[i];
    const std::string& tok = expect_atom(e, variables ? "a variable" : "a name");
    if (tok == "-") {
      if (pending.empty())
        fail(ParseErrorKind::SyntaxError, e, "dangling '-' in typed list");
      if (i + 1 >= items.size())
        fail(ParseErrorKind::SyntaxError, e, "missing type after '-'");
      const std::string& ty = expect_name(items[i + 1], "a type name");
      for (const SExpr* p : pending) sink(*p, p->atom, ty);
      pending.clear();
      ++i;
      continue;
    }
    if (variables && !is_variable(tok))
      fail(ParseErrorKind::SyntaxError, e, "expected a variable, got '" + tok + "'");
    if (!variables && (is_variable(tok) || is_keyword(tok)))
      fail(ParseErrorKind::SyntaxError, e, "expected a name, got '" + tok + "'");
    pending.push_back(&e);
  }
  for (const SExpr* p : pending) sink(*p, p->atom, "object");
}

struct ScopeChecker {
  const LiftedDomain& domain;
  const TypeTable& types;
  const std::vector<TypedVar>& params;

  const TypedVar* find_param(const std::string& name) const {
    for (const auto& v : params)
      if (v.name == name) return &v;
    return nullptr;
  }

  // Validates one term against the expected parameter type. Constants are
  // resolved against declared objects only when `objects` is present
  // (problem scope); domain-level constants are checked at grounding.
  void check_term(const SExpr& at, const Term& term, const TypedVar& expected,
                  const std::vector<TypedObject>* objects) const {
    if (term.is_variable()) {
      const TypedVar* v = find_param(term.text);
      if (!v)
        fail(ParseErrorKind::UndeclaredSymbol, at, "variable " + term.text + " is not declared");
      if (!types.overlap(v->type, expected.type))
        fail(ParseErrorKind::TypeMismatch, at,
             term.text + " has type " + v->type + ", expected " + expected.type);
      return;
    }
    if (objects) {
      const TypedObject* obj = nullptr;
      for (const auto& o : *objects)
        if (o.name == term.text) obj = &o;
      if (!obj)
        fail(ParseErrorKind::UndeclaredSymbol, at, "object " + term.text + " is not declared");
      if (!types.is_subtype(obj->type, expected.type))
        fail(ParseErrorKind::TypeMismatch, at,
             term.text + " has type " + obj->type + ", expected " + expected.type);
    }
  }

  Atom parse_atom(const SExpr& e, const std::vector<TypedObject>* objects) const {
    if (!e.is_list() || e.items.empty())
      fail(ParseErrorKind::SyntaxError, e, "expected an atom");
    const std::string& pred = expect_name(e.items[0], "a predicate name");
    const Predicate* decl = domain.find_predicate(pred);
    if (!decl)
      fail(ParseErrorKind::UndeclaredSymbol, e.items[0], "predicate " + pred + " is not declared");
    if (e.items.size() - 1 != decl->params.size())
      fail(ParseErrorKind::ArityMismatch, e,
           pred + " takes " + std::to_string(decl->params.size()) + " arguments, got " +
               std::to_string(e.items.size() - 1));
    Atom atom;
    atom.predicate = pred;
    for (std::size_t i = 1; i < e.items.size(); ++i) {
      Term t{expect_atom(e.items[i], "a term")};
      check_term(e.items[i], t, decl->params[i - 1], objects);
      atom.args.push_back(std::move(t));
    }
    return atom;
  }

  // Conjunction of possibly negated atoms: (), atom, (not atom), (and ...).
  Conjunction parse_conjunction(const SExpr& e, const std::vector<TypedObject>* objects,
                                bool allow_negation) const {
    Conjunction out;
    auto add_literal = [&](const SExpr& lit) {
      if (head_is(lit, "not")) {
        if (!allow_negation)
          fail(ParseErrorKind::SyntaxError, lit, "negation is not allowed here");
        if (lit.items.size() != 2)
          fail(ParseErrorKind::SyntaxError, lit, "(not ...) takes exactly one atom");
        out.push_back({true, parse_atom(lit.items[1], objects)});
      } else {
        out.push_back({false, parse_atom(lit, objects)});
      }
    };
    if (!e.is_list()) fail(ParseErrorKind::SyntaxError, e, "expected a formula");
    if (e.items.empty()) return out;
    if (head_is(e, "and")) {
      for (std::size_t i = 1; i < e.items.size(); ++i) add_literal(e.items[i]);
      return out;
    }
    add_literal(e);
    return out;
  }
};

std::vector<TypedVar> parse_parameters(const SExpr& e, const TypeTable& types) {
  if (!e.is_list()) fail(ParseErrorKind::SyntaxError, e, "expected a parameter list");
  std::vector<TypedVar> params;
  parse_typed_list(e.items, 0, true, [&](const SExpr& at, const std::string& name,
                                         const std::string& type) {
    if (!types.declared(type))
      fail(ParseErrorKind::UndeclaredSymbol, at, "type " + type + " is not declared");
    for (const auto& v : params)
      if (v.name == name)
        fail(ParseErrorKind::DuplicateDefinition, at, "parameter " + name + " declared twice");
    params.push_back({name, type});
  });
  return params;
}

// Keyword-sectioned body walker: ":kw value value :kw2 ..." as found in
// :action/:method/:htn bodies.
class SectionCursor {
 public:
  SectionCursor(const std::vector<SExpr>& items, std::size_t begin)
      : items_(items), pos_(begin) {}

  bool at_keyword(const std::string& kw) const {
    return pos_ < items_.size() && items_[pos_].is_atom && items_[pos_].atom == kw;
  }
  bool done() const { return pos_ >= items_.size(); }
  const SExpr& current() const { return items_[pos_]; }

  const SExpr& take_value(const std::string& what) {
    ++pos_;  // keyword
    if (pos_ >= items_.size())
      fail(ParseErrorKind::SyntaxError, items_[pos_ - 1], "missing " + what);
    return items_[pos_++];
  }

 private:
  const std::vector<SExpr>& items_;
  std::size_t pos_;
};

struct ParsedNetwork {
  SubtaskNetwork network;
};

Subtask parse_subtask_body(const SExpr& e, const std::string& label, const LiftedDomain& domain,
                           const TypeTable& types, const std::vector<TypedVar>& params,
                           const std::vector<TypedObject>* objects) {
  if (!e.is_list() || e.items.empty())
    fail(ParseErrorKind::SyntaxError, e, "expected a subtask");
  const std::string& name = expect_name(e.items[0], "an action or task name");
  const std::vector<TypedVar>* sig = nullptr;
  if (const LiftedTask* t = domain.find_task(name)) {
    sig = &t->params;
  } else if (const LiftedAction* a = domain.find_action(name)) {
    sig = &a->params;
  } else {
    fail(ParseErrorKind::UndeclaredSymbol, e.items[0],
         name + " is not a declared action or task");
  }
  if (e.items.size() - 1 != sig->size())
    fail(ParseErrorKind::ArityMismatch, e,
         name + " takes " + std::to_string(sig->size()) + " arguments, got " +
             std::to_string(e.items.size() - 1));
  Subtask st;
  st.label = label;
  st.name = name;
  ScopeChecker scope{domain, types, params};
  for (std::size_t i = 1; i < e.items.size(); ++i) {
    Term t{expect_atom(e.items[i], "a term")};
    scope.check_term(e.items[i], t, (*sig)[i - 1], objects);
    st.args.push_back(std::move(t));
  }
  return st;
}

// subtasknet := "(and" labeled-subtask* ")" | labeled-subtask | "()"
// labeled-subtask := "(" LABEL "(" NAME term* ")" ")" | "(" NAME term* ")"
std::vector<Subtask> parse_subtask_net(const SExpr& e, const LiftedDomain& domain,
                                       const TypeTable& types,
                                       const std::vector<TypedVar>& params,
                                       const std::vector<TypedObject>* objects) {
  std::vector<Subtask> out;
  std::set<std::string> labels;
  auto parse_one = [&](const SExpr& item) {
    if (!item.is_list() || item.items.empty())
      fail(ParseErrorKind::SyntaxError, item, "expected a subtask");
    Subtask st;
    if (item.items.size() == 2 && item.items[1].is_list()) {
      const std::string& label = expect_name(item.items[0], "a subtask label");
      st = parse_subtask_body(item.items[1], label, domain, types, params, objects);
    } else {
      st = parse_subtask_body(item, "_t" + std::to_string(out.size()), domain, types, params,
                              objects);
    }
    if (!labels.insert(st.label).second)
      fail(ParseErrorKind::DuplicateDefinition, item, "subtask label " + st.label + " reused");
    out.push_back(std::move(st));
  };

  if (!e.is_list()) fail(ParseErrorKind::SyntaxError, e, "expected a subtask network");
  if (e.items.empty()) return out;
  if (head_is(e, "and")) {
    for (std::size_t i = 1; i < e.items.size(); ++i) parse_one(e.items[i]);
    return out;
  }
  parse_one(e);
  return out;
}

// ordset := "(and" "(" "<" LABEL LABEL ")"* ")" | "(" "<" LABEL LABEL ")"
std::vector<std::pair<std::string, std::string>> parse_ordering(
    const SExpr& e, const std::vector<Subtask>& subtasks) {
  std::vector<std::pair<std::string, std::string>> out;
  auto has_label = [&](const std::string& l) {
    return std::any_of(subtasks.begin(), subtasks.end(),
                       [&](const Subtask& s) { return s.label == l; });
  };
  auto parse_one = [&](const SExpr& item) {
    if (!head_is(item, "<") || item.items.size() != 3)
      fail(ParseErrorKind::SyntaxError, item, "expected (< label label)");
    const std::string& before = expect_name(item.items[1], "a subtask label");
    const std::string& after = expect_name(item.items[2], "a subtask label");
    if (!has_label(before))
      fail(ParseErrorKind::UndeclaredSymbol, item.items[1], "unknown subtask label " + before);
    if (!has_label(after))
      fail(ParseErrorKind::UndeclaredSymbol, item.items[2], "unknown subtask label " + after);
    if (before == after)
      fail(ParseErrorKind::SyntaxError, item, "ordering must be irreflexive");
    out.emplace_back(before, after);
  };
  if (!e.is_list()) fail(ParseErrorKind::SyntaxError, e, "expected ordering constraints");
  if (head_is(e, "and")) {
    for (std::size_t i = 1; i < e.items.size(); ++i) parse_one(e.items[i]);
  } else if (!e.items.empty()) {
    parse_one(e);
  }
  return out;
}

void check_network_acyclic(const SExpr& at, const SubtaskNetwork& net) {
  // DFS over label edges; the ground invariant demands acyclicity.
  std::map<std::string, std::vector<std::string>> succ;
  for (const auto& [b, a] : net.ordering) succ[b].push_back(a);
  std::set<std::string> done, path;
  std::function<void(const std::string&)> visit = [&](const std::string& l) {
    if (done.count(l)) return;
    if (!path.insert(l).second)
      fail(ParseErrorKind::SyntaxError, at, "ordering constraints form a cycle");
    for (const auto& n : succ[l]) visit(n);
    path.erase(l);
    done.insert(l);
  };
  for (const auto& s : net.subtasks) visit(s.label);
}

// (:subtasks net [:ordering ord]) or (:ordered-subtasks net), starting at the
// cursor's current keyword.
SubtaskNetwork parse_network_sections(SectionCursor& cur, const SExpr& parent,
                                      const LiftedDomain& domain, const TypeTable& types,
                                      const std::vector<TypedVar>& params,
                                      const std::vector<TypedObject>* objects) {
  SubtaskNetwork net;
  if (cur.at_keyword(":ordered-subtasks")) {
    const SExpr& v = cur.take_value("subtasks after :ordered-subtasks");
    net.totally_ordered_form = true;
    net.subtasks = parse_subtask_net(v, domain, types, params, objects);
    return net;
  }
  if (cur.at_keyword(":subtasks")) {
    const SExpr& v = cur.take_value("subtasks after :subtasks");
    net.subtasks = parse_subtask_net(v, domain, types, params, objects);
    if (cur.at_keyword(":ordering")) {
      const SExpr& o = cur.take_value("constraints after :ordering");
      net.ordering = parse_ordering(o, net.subtasks);
      check_network_acyclic(o, net);
    }
    return net;
  }
  fail(ParseErrorKind::SyntaxError, cur.done() ? parent : cur.current(),
       "expected :subtasks or :ordered-subtasks");
}

void parse_requirements(const SExpr& e, LiftedDomain& d) {
  for (std::size_t i = 1; i < e.items.size(); ++i) {
    const std::string& req = expect_atom(e.items[i], "a requirement keyword");
    if (!kKnownRequirements.count(req))
      fail(ParseErrorKind::SyntaxError, e.items[i], "unsupported requirement " + req);
    d.requirements.push_back(req);
  }
}

void parse_types(const SExpr& e, LiftedDomain& d) {
  std::map<std::string, std::size_t> index;
  parse_typed_list(e.items, 1, false,
                   [&](const SExpr& at, const std::string& name, const std::string& parent) {
                     if (name == "object")
                       fail(ParseErrorKind::DuplicateDefinition, at,
                            "type object is built in");
                     auto it = index.find(name);
                     if (it == index.end()) {
                       index[name] = d.types.size();
                       d.types.push_back({name, {}});
                       it = index.find(name);
                     }
                     auto& parents = d.types[it->second].parents;
                     if (parent != "object" &&
                         std::find(parents.begin(), parents.end(), parent) == parents.end())
                       parents.push_back(parent);
                   });
  // Parents must themselves be declared and the hierarchy must stay acyclic.
  TypeTable tt = make_type_table(d);
  for (const auto& t : d.types)
    for (const auto& p : t.parents) {
      if (!tt.declared(p))
        fail(ParseErrorKind::UndeclaredSymbol, e, "type " + p + " is not declared");
      if (tt.is_subtype(p, t.name))
        fail(ParseErrorKind::SyntaxError, e, "type hierarchy cycle through " + t.name);
    }
}

void parse_predicates(const SExpr& e, LiftedDomain& d, const TypeTable& types) {
  for (std::size_t i = 1; i < e.items.size(); ++i) {
    const SExpr& p = e.items[i];
    if (!p.is_list() || p.items.empty())
      fail(ParseErrorKind::SyntaxError, p, "expected a predicate declaration");
    Predicate pred;
    pred.name = expect_name(p.items[0], "a predicate name");
    if (d.find_predicate(pred.name))
      fail(ParseErrorKind::DuplicateDefinition, p.items[0],
           "predicate " + pred.name + " declared twice");
    pred.params = parse_parameters(SExpr{false, "", {p.items.begin() + 1, p.items.end()}, p.span},
                                   types);
    d.predicates.push_back(std::move(pred));
  }
}

void check_unique_task_name(const SExpr& at, const LiftedDomain& d, const std::string& name) {
  if (d.find_task(name) || d.find_action(name))
    fail(ParseErrorKind::DuplicateDefinition, at, name + " is already declared");
}

void parse_task(const SExpr& e, LiftedDomain& d, const TypeTable& types) {
  if (e.items.size() < 2) fail(ParseErrorKind::SyntaxError, e, "expected (:task name ...)");
  LiftedTask task;
  task.name = expect_name(e.items[1], "a task name");
  check_unique_task_name(e.items[1], d, task.name);
  SectionCursor cur(e.items, 2);
  if (!cur.at_keyword(":parameters"))
    fail(ParseErrorKind::SyntaxError, e, "task needs :parameters");
  task.params = parse_parameters(cur.take_value("parameter list"), types);
  if (!cur.done()) fail(ParseErrorKind::SyntaxError, cur.current(), "unexpected token in :task");
  d.tasks.push_back(std::move(task));
}

void parse_action(const SExpr& e, LiftedDomain& d, const TypeTable& types) {
  if (e.items.size() < 2) fail(ParseErrorKind::SyntaxError, e, "expected (:action name ...)");
  LiftedAction action;
  action.name = expect_name(e.items[1], "an action name");
  check_unique_task_name(e.items[1], d, action.name);
  SectionCursor cur(e.items, 2);
  if (!cur.at_keyword(":parameters"))
    fail(ParseErrorKind::SyntaxError, e, "action needs :parameters");
  action.params = parse_parameters(cur.take_value("parameter list"), types);
  ScopeChecker scope{d, types, action.params};
  if (cur.at_keyword(":precondition"))
    action.precondition = scope.parse_conjunction(cur.take_value("precondition"), nullptr, true);
  if (cur.at_keyword(":effect")) {
    const SExpr& eff = cur.take_value("effect");
    // Peel any (increase (total-cost) k) off the conjunction first.
    SExpr cleaned = eff;
    if (head_is(cleaned, "increase")) {
      SExpr wrapped;
      wrapped.span = cleaned.span;
      SExpr and_atom;
      and_atom.is_atom = true;
      and_atom.atom = "and";
      and_atom.span = cleaned.span;
      wrapped.items.push_back(and_atom);
      wrapped.items.push_back(cleaned);
      cleaned = wrapped;
    }
    if (head_is(cleaned, "and")) {
      std::vector<SExpr> kept;
      kept.push_back(cleaned.items[0]);
      for (std::size_t i = 1; i < cleaned.items.size(); ++i) {
        const SExpr& item = cleaned.items[i];
        if (head_is(item, "increase")) {
          if (item.items.size() != 3 || !head_is(item.items[1], "total-cost") ||
              !item.items[2].is_atom)
            fail(ParseErrorKind::SyntaxError, item, "expected (increase (total-cost) <int>)");
          try {
            action.cost = std::stoi(item.items[2].atom);
          } catch (const std::exception&) {
            fail(ParseErrorKind::SyntaxError, item.items[2], "cost must be an integer");
          }
          if (action.cost < 0)
            fail(ParseErrorKind::SyntaxError, item.items[2], "cost must be nonnegative");
          continue;
        }
        kept.push_back(item);
      }
      cleaned.items = std::move(kept);
    }
    action.effect = scope.parse_conjunction(cleaned, nullptr, true);
  }
  if (!cur.done())
    fail(ParseErrorKind::SyntaxError, cur.current(), "unexpected token in :action");
  d.actions.push_back(std::move(action));
}

void parse_method(const SExpr& e, LiftedDomain& d, const TypeTable& types) {
  if (e.items.size() < 2) fail(ParseErrorKind::SyntaxError, e, "expected (:method name ...)");
  LiftedMethod method;
  method.name = expect_name(e.items[1], "a method name");
  for (const auto& m : d.methods)
    if (m.name == method.name)
      fail(ParseErrorKind::DuplicateDefinition, e.items[1],
           "method " + method.name + " declared twice");
  SectionCursor cur(e.items, 2);
  if (!cur.at_keyword(":parameters"))
    fail(ParseErrorKind::SyntaxError, e, "method needs :parameters");
  method.params = parse_parameters(cur.take_value("parameter list"), types);
  if (!cur.at_keyword(":task")) fail(ParseErrorKind::SyntaxError, e, "method needs :task");
  {
    const SExpr& t = cur.take_value("task");
    if (!t.is_list() || t.items.empty())
      fail(ParseErrorKind::SyntaxError, t, "expected (task-name term*)");
    method.task = expect_name(t.items[0], "a task name");
    const LiftedTask* decl = d.find_task(method.task);
    if (!decl)
      fail(ParseErrorKind::UndeclaredSymbol, t.items[0],
           method.task + " is not a declared abstract task");
    if (t.items.size() - 1 != decl->params.size())
      fail(ParseErrorKind::ArityMismatch, t,
           method.task + " takes " + std::to_string(decl->params.size()) + " arguments, got " +
               std::to_string(t.items.size() - 1));
    ScopeChecker scope{d, types, method.params};
    for (std::size_t i = 1; i < t.items.size(); ++i) {
      Term term{expect_atom(t.items[i], "a term")};
      scope.check_term(t.items[i], term, decl->params[i - 1], nullptr);
      method.task_args.push_back(std::move(term));
    }
  }
  ScopeChecker scope{d, types, method.params};
  if (cur.at_keyword(":precondition"))
    method.precondition = scope.parse_conjunction(cur.take_value("precondition"), nullptr, true);
  method.network = parse_network_sections(cur, e, d, types, method.params, nullptr);
  if (!cur.done())
    fail(ParseErrorKind::SyntaxError, cur.current(), "unexpected token in :method");
  d.methods.push_back(std::move(method));
}

}  // namespace

LiftedDomain parse_domain(const std::string& text, const std::string& filename) {
  SExpr root = read_sexpr(text, filename);
  if (!head_is(root, "define"))
    fail(ParseErrorKind::SyntaxError, root, "expected (define (domain ...) ...)");
  if (root.items.size() < 2 || !head_is(root.items[1], "domain") ||
      root.items[1].items.size() != 2)
    fail(ParseErrorKind::SyntaxError, root, "expected (domain <name>)");

  LiftedDomain d;
  d.name = expect_name(root.items[1].items[1], "a domain name");

  bool saw_requirements = false, saw_types = false, saw_predicates = false;
  for (std::size_t i = 2; i < root.items.size(); ++i) {
    const SExpr& block = root.items[i];
    if (head_is(block, ":requirements")) {
      if (saw_requirements)
        fail(ParseErrorKind::DuplicateDefinition, block, "duplicate :requirements");
      saw_requirements = true;
      parse_requirements(block, d);
    } else if (head_is(block, ":types")) {
      if (saw_types) fail(ParseErrorKind::DuplicateDefinition, block, "duplicate :types");
      saw_types = true;
      parse_types(block, d);
    } else if (head_is(block, ":predicates")) {
      if (saw_predicates)
        fail(ParseErrorKind::DuplicateDefinition, block, "duplicate :predicates");
      saw_predicates = true;
      parse_predicates(block, d, make_type_table(d));
    } else if (head_is(block, ":task")) {
      parse_task(block, d, make_type_table(d));
    } else if (head_is(block, ":action")) {
      parse_action(block, d, make_type_table(d));
    } else if (head_is(block, ":method")) {
      parse_method(block, d, make_type_table(d));
    } else {
      fail(ParseErrorKind::SyntaxError, block, "unexpected block in domain");
    }
  }
  return d;
}

LiftedProblem parse_problem(const std::string& text, const LiftedDomain& domain,
                            const std::string& filename) {
  SExpr root = read_sexpr(text, filename);
  if (!head_is(root, "define"))
    fail(ParseErrorKind::SyntaxError, root, "expected (define (problem ...) ...)");
  if (root.items.size() < 3 || !head_is(root.items[1], "problem") ||
      root.items[1].items.size() != 2)
    fail(ParseErrorKind::SyntaxError, root, "expected (problem <name>)");

  LiftedProblem p;
  p.name = expect_name(root.items[1].items[1], "a problem name");
  if (!head_is(root.items[2], ":domain") || root.items[2].items.size() != 2)
    fail(ParseErrorKind::SyntaxError, root.items[2], "expected (:domain <name>)");
  p.domain_name = expect_name(root.items[2].items[1], "a domain name");
  if (p.domain_name != domain.name)
    fail(ParseErrorKind::DomainMismatch, root.items[2].items[1],
         "problem is for domain " + p.domain_name + ", not " + domain.name);

  TypeTable types = make_type_table(domain);
  const SExpr* htn_block = nullptr;
  const SExpr* init_block = nullptr;
  const SExpr* goal_block = nullptr;

  for (std::size_t i = 3; i < root.items.size(); ++i) {
    const SExpr& block = root.items[i];
    if (head_is(block, ":objects")) {
      parse_typed_list(block.items, 1, false,
                       [&](const SExpr& at, const std::string& name, const std::string& type) {
                         if (!types.declared(type))
                           fail(ParseErrorKind::UndeclaredSymbol, at,
                                "type " + type + " is not declared");
                         for (const auto& o : p.objects)
                           if (o.name == name)
                             fail(ParseErrorKind::DuplicateDefinition, at,
                                  "object " + name + " declared twice");
                         p.objects.push_back({name, type});
                       });
    } else if (head_is(block, ":htn")) {
      if (htn_block) fail(ParseErrorKind::DuplicateDefinition, block, "duplicate :htn");
      htn_block = &block;
    } else if (head_is(block, ":init")) {
      if (init_block) fail(ParseErrorKind::DuplicateDefinition, block, "duplicate :init");
      init_block = &block;
    } else if (head_is(block, ":goal")) {
      if (goal_block) fail(ParseErrorKind::DuplicateDefinition, block, "duplicate :goal");
      goal_block = &block;
    } else {
      fail(ParseErrorKind::SyntaxError, block, "unexpected block in problem");
    }
  }

  if (!htn_block) fail(ParseErrorKind::SyntaxError, root, "problem needs an :htn block");
  if (!init_block) fail(ParseErrorKind::SyntaxError, root, "problem needs an :init block");

  std::vector<TypedVar> no_params;
  ScopeChecker scope{domain, types, no_params};

  {
    SectionCursor cur(htn_block->items, 1);
    p.initial_network =
        parse_network_sections(cur, *htn_block, domain, types, no_params, &p.objects);
    if (!cur.done())
      fail(ParseErrorKind::SyntaxError, cur.current(), "unexpected token in :htn");
    if (p.initial_network.subtasks.empty())
      fail(ParseErrorKind::SyntaxError, *htn_block, "initial task network must not be empty");
  }

  std::set<std::string> seen_init;
  for (std::size_t i = 1; i < init_block->items.size(); ++i) {
    Atom atom = scope.parse_atom(init_block->items[i], &p.objects);
    for (const Term& t : atom.args)
      if (t.is_variable())
        fail(ParseErrorKind::SyntaxError, init_block->items[i], "init atoms must be ground");
    std::string key = atom.predicate;
    for (const Term& t : atom.args) key += " " + t.text;
    if (seen_init.insert(key).second) p.init.push_back(std::move(atom));
  }

  if (goal_block) {
    if (goal_block->items.size() != 2)
      fail(ParseErrorKind::SyntaxError, *goal_block, "expected (:goal <formula>)");
    p.goal = scope.parse_conjunction(goal_block->items[1], &p.objects, true);
    p.has_goal = true;
    for (const Literal& lit : p.goal)
      for (const Term& t : lit.atom.args)
        if (t.is_variable())
          fail(ParseErrorKind::SyntaxError, goal_block->items[1], "goal must be ground");
  }
  return p;
}

}  // namespace htnkit
