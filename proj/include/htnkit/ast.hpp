#ifndef HTNKIT_AST_HPP
#define HTNKIT_AST_HPP

#include <string>
#include <vector>

// Lifted (first-order) domain and problem ASTs produced by the parser.
// Nodes carry no source spans; all span-bearing diagnostics are raised
// while parsing, so equality can be plain structural comparison.

namespace htnkit {

struct TypedVar {
  std::string name;  // includes the leading '?'
  std::string type;  // "object" when no type is written
  bool operator==(const TypedVar&) const = default;
};

// A variable or an object constant.
struct Term {
  std::string text;
  bool is_variable() const { return !text.empty() && text[0] == '?'; }
  bool operator==(const Term&) const = default;
};

struct Atom {
  std::string predicate;
  std::vector<Term> args;
  bool operator==(const Atom&) const = default;
};

struct Literal {
  bool negated = false;
  Atom atom;
  bool operator==(const Literal&) const = default;
};

// Conjunction of literals; the only formula shape in this fragment.
using Conjunction = std::vector<Literal>;

struct TypeDecl {
  std::string name;
  std::vector<std::string> parents;  // empty means object
  bool operator==(const TypeDecl&) const = default;
};

struct Predicate {
  std::string name;
  std::vector<TypedVar> params;
  bool operator==(const Predicate&) const = default;
};

struct LiftedAction {
  std::string name;
  std::vector<TypedVar> params;
  Conjunction precondition;
  Conjunction effect;   // positive = add, negated = delete
  int cost = 1;         // from (increase (total-cost) k); 1 when absent
  bool operator==(const LiftedAction&) const = default;
};

struct LiftedTask {
  std::string name;
  std::vector<TypedVar> params;
  bool operator==(const LiftedTask&) const = default;
};

struct Subtask {
  std::string label;  // explicit label or generated "_t<i>"
  std::string name;   // action or abstract task name
  std::vector<Term> args;
  bool operator==(const Subtask&) const = default;
};

// Subtasks plus ordering, as written: either the :ordered-subtasks surface
// form (implicit chain) or :subtasks with explicit (< a b) constraints.
struct SubtaskNetwork {
  bool totally_ordered_form = false;
  std::vector<Subtask> subtasks;
  std::vector<std::pair<std::string, std::string>> ordering;  // label pairs
  bool operator==(const SubtaskNetwork&) const = default;
};

struct LiftedMethod {
  std::string name;
  std::vector<TypedVar> params;
  std::string task;
  std::vector<Term> task_args;
  Conjunction precondition;
  SubtaskNetwork network;
  bool operator==(const LiftedMethod&) const = default;
};

struct LiftedDomain {
  std::string name;
  std::vector<std::string> requirements;
  std::vector<TypeDecl> types;  // excludes the implicit root "object"
  std::vector<Predicate> predicates;
  std::vector<LiftedTask> tasks;
  std::vector<LiftedAction> actions;
  std::vector<LiftedMethod> methods;
  bool operator==(const LiftedDomain&) const = default;

  const Predicate* find_predicate(const std::string& name) const;
  const LiftedTask* find_task(const std::string& name) const;
  const LiftedAction* find_action(const std::string& name) const;
};

struct TypedObject {
  std::string name;
  std::string type;
  bool operator==(const TypedObject&) const = default;
};

struct LiftedProblem {
  std::string name;
  std::string domain_name;
  std::vector<TypedObject> objects;
  SubtaskNetwork initial_network;
  std::vector<Atom> init;
  Conjunction goal;  // empty = no goal section
  bool has_goal = false;
  bool operator==(const LiftedProblem&) const = default;
};

}  // namespace htnkit

#endif
