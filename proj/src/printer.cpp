#include <sstream>

#include "htnkit/parser.hpp"

namespace htnkit {

namespace {

void print_terms(std::ostream& os, const std::vector<Term>& terms) {
  for (const auto& t : terms) os << ' ' << t.text;
}

void print_typed_vars(std::ostream& os, const std::vector<TypedVar>& vars) {
  os << '(';
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (i) os << ' ';
    os << vars[i].name << " - " << vars[i].type;
  }
  os << ')';
}

void print_atom(std::ostream& os, const Atom& a) {
  os << '(' << a.predicate;
  print_terms(os, a.args);
  os << ')';
}

void print_literal(std::ostream& os, const Literal& lit) {
  if (lit.negated) {
    os << "(not ";
    print_atom(os, lit.atom);
    os << ')';
  } else {
    print_atom(os, lit.atom);
  }
}

void print_conjunction(std::ostream& os, const Conjunction& c) {
  os << "(and";
  for (const auto& lit : c) {
    os << ' ';
    print_literal(os, lit);
  }
  os << ')';
}

void print_subtask(std::ostream& os, const Subtask& st, std::size_t position) {
  // Generated labels are omitted when they match their position again.
  bool implicit = st.label == "_t" + std::to_string(position);
  if (!implicit) os << '(' << st.label << ' ';
  os << '(' << st.name;
  print_terms(os, st.args);
  os << ')';
  if (!implicit) os << ')';
}

void print_network(std::ostream& os, const SubtaskNetwork& net, const std::string& indent) {
  os << (net.totally_ordered_form ? ":ordered-subtasks" : ":subtasks");
  if (net.subtasks.empty()) {
    os << " ()";
  } else {
    os << " (and";
    for (std::size_t i = 0; i < net.subtasks.size(); ++i) {
      os << '\n' << indent << "  ";
      print_subtask(os, net.subtasks[i], i);
    }
    os << ')';
  }
  if (!net.ordering.empty()) {
    os << '\n' << indent << ":ordering (and";
    for (const auto& [b, a] : net.ordering) os << " (< " << b << ' ' << a << ')';
    os << ')';
  }
}

}  // namespace

std::string print_domain(const LiftedDomain& d) {
  std::ostringstream os;
  os << "(define (domain " << d.name << ")";
  if (!d.requirements.empty()) {
    os << "\n  (:requirements";
    for (const auto& r : d.requirements) os << ' ' << r;
    os << ')';
  }
  if (!d.types.empty()) {
    os << "\n  (:types";
    for (const auto& t : d.types) {
      if (t.parents.empty()) {
        os << "\n    " << t.name << " - object";
      } else {
        for (const auto& p : t.parents) os << "\n    " << t.name << " - " << p;
      }
    }
    os << ')';
  }
  if (!d.predicates.empty()) {
    os << "\n  (:predicates";
    for (const auto& p : d.predicates) {
      os << "\n    (" << p.name;
      for (const auto& v : p.params) os << ' ' << v.name << " - " << v.type;
      os << ')';
    }
    os << ')';
  }
  for (const auto& t : d.tasks) {
    os << "\n  (:task " << t.name << " :parameters ";
    print_typed_vars(os, t.params);
    os << ')';
  }
  for (const auto& a : d.actions) {
    os << "\n  (:action " << a.name << "\n    :parameters ";
    print_typed_vars(os, a.params);
    if (!a.precondition.empty()) {
      os << "\n    :precondition ";
      print_conjunction(os, a.precondition);
    }
    if (!a.effect.empty() || a.cost != 1) {
      os << "\n    :effect (and";
      for (const auto& lit : a.effect) {
        os << ' ';
        print_literal(os, lit);
      }
      if (a.cost != 1) os << " (increase (total-cost) " << a.cost << ')';
      os << ')';
    }
    os << ')';
  }
  for (const auto& m : d.methods) {
    os << "\n  (:method " << m.name << "\n    :parameters ";
    print_typed_vars(os, m.params);
    os << "\n    :task (" << m.task;
    print_terms(os, m.task_args);
    os << ')';
    if (!m.precondition.empty()) {
      os << "\n    :precondition ";
      print_conjunction(os, m.precondition);
    }
    os << "\n    ";
    print_network(os, m.network, "    ");
    os << ')';
  }
  os << "\n)";
  return os.str();
}

std::string print_problem(const LiftedProblem& p) {
  std::ostringstream os;
  os << "(define (problem " << p.name << ")\n  (:domain " << p.domain_name << ")";
  if (!p.objects.empty()) {
    os << "\n  (:objects";
    for (const auto& o : p.objects) os << "\n    " << o.name << " - " << o.type;
    os << ')';
  }
  os << "\n  (:htn ";
  print_network(os, p.initial_network, "  ");
  os << ')';
  os << "\n  (:init";
  for (const auto& a : p.init) {
    os << "\n    ";
    print_atom(os, a);
  }
  os << ')';
  if (p.has_goal) {
    os << "\n  (:goal ";
    print_conjunction(os, p.goal);
    os << ')';
  }
  os << "\n)";
  return os.str();
}

}  // namespace htnkit
