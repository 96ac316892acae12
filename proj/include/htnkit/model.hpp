#ifndef HTNKIT_MODEL_HPP
#define HTNKIT_MODEL_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Ground HTN model: facts, actions, abstract tasks, decomposition methods,
// task networks, plans and decomposition witnesses. All ids are dense
// integers assigned at construction; names are kept alongside for printing.

namespace htnkit {

using FactId = int;
using ActionId = int;
using TaskId = int;
using MethodId = int;
using NodeId = int;

enum class TaskKind { Primitive, Abstract };

// Reference to a ground action (Primitive) or ground abstract task (Abstract).
struct TaskRef {
  TaskKind kind = TaskKind::Primitive;
  int index = -1;

  bool operator==(const TaskRef&) const = default;
  bool is_primitive() const { return kind == TaskKind::Primitive; }
};

struct Fact {
  FactId id = -1;
  std::string name;
  std::vector<std::string> args;
};

// State is a sorted, duplicate-free set of fact ids.
struct State {
  std::vector<FactId> facts;

  bool operator==(const State&) const = default;
  bool contains(FactId f) const;
  bool contains_all(const std::vector<FactId>& fs) const;
  void normalize();  // sort + unique
};

struct GroundAction {
  ActionId id = -1;
  std::string name;
  std::vector<std::string> args;
  std::vector<FactId> pre;  // sorted
  std::vector<FactId> add;  // sorted, disjoint from del
  std::vector<FactId> del;  // sorted
  int cost = 1;
};

// Partially ordered multiset of task occurrences. Node ids are unique within
// a network; ordering holds explicit constraint edges (not the closure) and
// must stay acyclic.
struct TaskNetwork {
  struct Node {
    NodeId id = -1;
    TaskRef task;
    bool operator==(const Node&) const = default;
  };

  std::vector<Node> nodes;                          // insertion order
  std::vector<std::pair<NodeId, NodeId>> ordering;  // sorted, unique edges
  NodeId next_id = 0;

  bool operator==(const TaskNetwork&) const = default;

  NodeId add_node(TaskRef task);
  void add_edge(NodeId before, NodeId after);
  const Node* find(NodeId id) const;
  bool empty() const { return nodes.empty(); }
  std::size_t size() const { return nodes.size(); }

  // Node ids with no incoming constraint edge, ascending.
  std::vector<NodeId> unconstrained() const;
  bool is_acyclic() const;
  // True iff the transitive closure of `ordering` is a total order.
  bool is_totally_ordered() const;
  // The unique topological order; requires is_totally_ordered().
  std::vector<NodeId> total_order() const;
};

struct AbstractTask {
  TaskId id = -1;
  std::string name;
  std::vector<std::string> args;
  std::vector<MethodId> methods;  // ascending
};

struct Method {
  MethodId id = -1;
  std::string name;  // lifted method name; instances share it
  std::vector<std::string> args;
  TaskId task = -1;
  TaskNetwork network;
  std::vector<FactId> pre;  // sorted; empty when no method precondition
};

struct Plan {
  std::vector<ActionId> steps;
  bool operator==(const Plan&) const = default;
};

// Decomposition tree proving a plan derivable from the initial network.
// Leaf nodes are plan positions 0..n-1; other ids label abstract nodes.
// `roots` lists the nodes instantiating the initial network, in its node
// declaration order. Children of an abstract node correspond positionally
// to the nodes of the applied method's network.
struct DecompositionWitness {
  struct Node {
    TaskRef task;
    std::optional<MethodId> method;  // present iff task is abstract
    std::vector<int> children;       // ids; empty for leaves
  };

  std::vector<int> roots;
  std::vector<std::pair<int, Node>> nodes;  // sorted by id

  const Node* find(int id) const;
  std::size_t size() const { return nodes.size(); }
};

struct GroundModel {
  std::vector<Fact> facts;
  std::vector<GroundAction> actions;
  std::vector<AbstractTask> tasks;
  std::vector<Method> methods;
  State init;
  TaskNetwork initial_network;
  std::vector<FactId> goal;  // sorted; empty = no goal
  bool trivially_unsolvable = false;

  std::string fact_str(FactId f) const;
  std::string task_ref_str(TaskRef t) const;
};

// ---------------------------------------------------------------------------
// Errors

struct PreconditionUnsatisfied : std::runtime_error {
  std::vector<FactId> missing;
  explicit PreconditionUnsatisfied(std::vector<FactId> missing_facts);
};

struct NodeNotFound : std::runtime_error {
  NodeId node;
  explicit NodeNotFound(NodeId n);
};

struct MethodTaskMismatch : std::runtime_error {
  NodeId node;
  MethodId method;
  MethodTaskMismatch(NodeId n, MethodId m);
};

// ---------------------------------------------------------------------------
// Operations

// STRIPS application: requires a.pre subset of state, yields (state \ del) u add.
State apply_action(const State& state, const GroundAction& a);

bool is_applicable(const State& state, const GroundAction& a);

struct ExecutionResult {
  bool executable = false;
  State final_state;
  int failing_step = -1;  // -1 when executable
};

// Sequential application of every plan step; never throws.
ExecutionResult is_executable(const Plan& plan, const State& init,
                              const std::vector<GroundAction>& actions);

// Decompose `node` (labelled with m.task) by m: the node is removed, fresh
// copies of m.network's nodes are inserted, m.network's internal ordering is
// kept, and every external constraint through the node is inherited by all
// inserted nodes.
TaskNetwork apply_method(const TaskNetwork& tn, NodeId node, const Method& m);

struct Linearizations {
  std::vector<std::vector<NodeId>> orders;
  bool truncated = false;  // cap was hit
};

// All topological orders of tn in lexicographic node-id order, at most cap.
Linearizations linearizations(const TaskNetwork& tn, std::size_t cap);

// Classical STRIPS model, input to the HTN conversion.
struct ClassicalModel {
  std::vector<Fact> facts;
  std::vector<GroundAction> actions;
  State init;
  std::vector<FactId> goal;  // sorted
};

// Standard encoding: one abstract task `top`; one method per action x with
// subtasks [x, top]; one method closing the recursion with a single
// `goal-check` action whose precondition is the goal. HTN solutions minus
// the goal-check step are exactly the classical plans.
GroundModel classical_to_htn(const ClassicalModel& classical);

}  // namespace htnkit

#endif
