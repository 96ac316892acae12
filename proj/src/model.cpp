#include "htnkit/model.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>
#include <sstream>

namespace htnkit {

namespace {

std::string atom_str(const std::string& name, const std::vector<std::string>& args) {
  std::string out = "(" + name;
  for (const auto& a : args) {
    out += ' ';
    out += a;
  }
  out += ')';
  return out;
}

std::vector<FactId> set_minus(const std::vector<FactId>& a, const std::vector<FactId>& b) {
  std::vector<FactId> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<FactId> set_union(const std::vector<FactId>& a, const std::vector<FactId>& b) {
  std::vector<FactId> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

bool State::contains(FactId f) const {
  return std::binary_search(facts.begin(), facts.end(), f);
}

bool State::contains_all(const std::vector<FactId>& fs) const {
  return std::includes(facts.begin(), facts.end(), fs.begin(), fs.end());
}

void State::normalize() {
  std::sort(facts.begin(), facts.end());
  facts.erase(std::unique(facts.begin(), facts.end()), facts.end());
}

NodeId TaskNetwork::add_node(TaskRef task) {
  NodeId id = next_id++;
  nodes.push_back({id, task});
  return id;
}

void TaskNetwork::add_edge(NodeId before, NodeId after) {
  auto edge = std::make_pair(before, after);
  auto it = std::lower_bound(ordering.begin(), ordering.end(), edge);
  if (it == ordering.end() || *it != edge) ordering.insert(it, edge);
}

const TaskNetwork::Node* TaskNetwork::find(NodeId id) const {
  for (const auto& n : nodes)
    if (n.id == id) return &n;
  return nullptr;
}

std::vector<NodeId> TaskNetwork::unconstrained() const {
  std::vector<NodeId> out;
  for (const auto& n : nodes) {
    bool has_pred = false;
    for (const auto& [before, after] : ordering) {
      if (after == n.id) {
        has_pred = true;
        break;
      }
    }
    if (!has_pred) out.push_back(n.id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool TaskNetwork::is_acyclic() const {
  // Kahn's algorithm over the explicit edges.
  std::map<NodeId, int> indegree;
  for (const auto& n : nodes) indegree[n.id] = 0;
  for (const auto& [b, a] : ordering) {
    if (!indegree.count(b) || !indegree.count(a)) return false;  // dangling edge
    if (b == a) return false;
    indegree[a]++;
  }
  std::vector<NodeId> queue;
  for (const auto& [id, deg] : indegree)
    if (deg == 0) queue.push_back(id);
  std::size_t removed = 0;
  while (!queue.empty()) {
    NodeId id = queue.back();
    queue.pop_back();
    removed++;
    for (const auto& [b, a] : ordering) {
      if (b == id && --indegree[a] == 0) queue.push_back(a);
    }
  }
  return removed == nodes.size();
}

bool TaskNetwork::is_totally_ordered() const {
  if (nodes.size() <= 1) return is_acyclic();
  if (!is_acyclic()) return false;
  // Transitive closure by repeated relaxation; networks are small.
  std::map<NodeId, std::set<NodeId>> succ;
  for (const auto& [b, a] : ordering) succ[b].insert(a);
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto& [b, as] : succ) {
      std::set<NodeId> extra;
      for (NodeId a : as) {
        auto it = succ.find(a);
        if (it == succ.end()) continue;
        for (NodeId a2 : it->second)
          if (!as.count(a2)) extra.insert(a2);
      }
      if (!extra.empty()) {
        as.insert(extra.begin(), extra.end());
        changed = true;
      }
    }
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < nodes.size(); ++j) {
      NodeId x = nodes[i].id, y = nodes[j].id;
      bool xy = succ.count(x) && succ[x].count(y);
      bool yx = succ.count(y) && succ[y].count(x);
      if (!xy && !yx) return false;
    }
  }
  return true;
}

std::vector<NodeId> TaskNetwork::total_order() const {
  std::vector<NodeId> order;
  std::set<NodeId> emitted;
  while (order.size() < nodes.size()) {
    NodeId pick = -1;
    for (const auto& n : nodes) {
      if (emitted.count(n.id)) continue;
      bool free = true;
      for (const auto& [b, a] : ordering) {
        if (a == n.id && !emitted.count(b)) {
          free = false;
          break;
        }
      }
      if (free) {
        pick = n.id;
        break;
      }
    }
    if (pick < 0) throw std::logic_error("total_order on cyclic network");
    order.push_back(pick);
    emitted.insert(pick);
  }
  return order;
}

const DecompositionWitness::Node* DecompositionWitness::find(int id) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), id,
                             [](const auto& p, int key) { return p.first < key; });
  if (it == nodes.end() || it->first != id) return nullptr;
  return &it->second;
}

std::string GroundModel::fact_str(FactId f) const {
  return atom_str(facts[f].name, facts[f].args);
}

std::string GroundModel::task_ref_str(TaskRef t) const {
  if (t.is_primitive()) return atom_str(actions[t.index].name, actions[t.index].args);
  return atom_str(tasks[t.index].name, tasks[t.index].args);
}

PreconditionUnsatisfied::PreconditionUnsatisfied(std::vector<FactId> missing_facts)
    : std::runtime_error("action precondition unsatisfied"), missing(std::move(missing_facts)) {}

NodeNotFound::NodeNotFound(NodeId n)
    : std::runtime_error("task network node not found: " + std::to_string(n)), node(n) {}

MethodTaskMismatch::MethodTaskMismatch(NodeId n, MethodId m)
    : std::runtime_error("method " + std::to_string(m) + " does not decompose the task at node " +
                         std::to_string(n)),
      node(n),
      method(m) {}

bool is_applicable(const State& state, const GroundAction& a) {
  return state.contains_all(a.pre);
}

State apply_action(const State& state, const GroundAction& a) {
  if (!state.contains_all(a.pre)) {
    std::vector<FactId> missing;
    for (FactId f : a.pre)
      if (!state.contains(f)) missing.push_back(f);
    throw PreconditionUnsatisfied(std::move(missing));
  }
  State out;
  out.facts = set_union(set_minus(state.facts, a.del), a.add);
  return out;
}

ExecutionResult is_executable(const Plan& plan, const State& init,
                              const std::vector<GroundAction>& actions) {
  ExecutionResult res;
  res.final_state = init;
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    const GroundAction& a = actions.at(plan.steps[i]);
    if (!is_applicable(res.final_state, a)) {
      res.failing_step = static_cast<int>(i);
      return res;
    }
    res.final_state = apply_action(res.final_state, a);
  }
  res.executable = true;
  return res;
}

TaskNetwork apply_method(const TaskNetwork& tn, NodeId node, const Method& m) {
  const TaskNetwork::Node* target = tn.find(node);
  if (!target) throw NodeNotFound(node);
  if (target->task.is_primitive() || target->task.index != m.task)
    throw MethodTaskMismatch(node, m.id);

  TaskNetwork out;
  out.next_id = tn.next_id;
  for (const auto& n : tn.nodes)
    if (n.id != node) out.nodes.push_back(n);

  // Fresh copies of the method's nodes, in declaration order.
  std::map<NodeId, NodeId> fresh;  // method-local id -> new id
  std::vector<NodeId> inserted;
  for (const auto& n : m.network.nodes) {
    NodeId id = out.next_id++;
    fresh[n.id] = id;
    out.nodes.push_back({id, n.task});
    inserted.push_back(id);
  }

  for (const auto& [b, a] : tn.ordering) {
    if (b == node && a == node) continue;
    if (b == node) {
      for (NodeId c : inserted) out.add_edge(c, a);
    } else if (a == node) {
      for (NodeId c : inserted) out.add_edge(b, c);
    } else {
      out.add_edge(b, a);
    }
  }
  for (const auto& [b, a] : m.network.ordering) out.add_edge(fresh.at(b), fresh.at(a));

  // Decomposition of an acyclic network stays acyclic; revalidate anyway.
  if (!out.is_acyclic()) throw std::logic_error("apply_method produced an ordering cycle");
  return out;
}

namespace {

void enumerate_orders(const TaskNetwork& tn, std::set<NodeId>& emitted,
                      std::vector<NodeId>& prefix, std::size_t cap, Linearizations& out) {
  if (out.truncated) return;
  if (prefix.size() == tn.nodes.size()) {
    if (out.orders.size() >= cap) {
      out.truncated = true;
      return;
    }
    out.orders.push_back(prefix);
    return;
  }
  std::vector<NodeId> candidates;
  for (const auto& n : tn.nodes) {
    if (emitted.count(n.id)) continue;
    bool free = true;
    for (const auto& [b, a] : tn.ordering) {
      if (a == n.id && !emitted.count(b)) {
        free = false;
        break;
      }
    }
    if (free) candidates.push_back(n.id);
  }
  std::sort(candidates.begin(), candidates.end());
  for (NodeId c : candidates) {
    emitted.insert(c);
    prefix.push_back(c);
    enumerate_orders(tn, emitted, prefix, cap, out);
    prefix.pop_back();
    emitted.erase(c);
    if (out.truncated) return;
  }
}

}  // namespace

Linearizations linearizations(const TaskNetwork& tn, std::size_t cap) {
  if (cap == 0) throw std::invalid_argument("linearizations cap must be positive");
  if (!tn.is_acyclic()) throw std::invalid_argument("linearizations on cyclic network");
  Linearizations out;
  std::set<NodeId> emitted;
  std::vector<NodeId> prefix;
  enumerate_orders(tn, emitted, prefix, cap, out);
  return out;
}

GroundModel classical_to_htn(const ClassicalModel& classical) {
  GroundModel m;
  m.facts = classical.facts;
  m.actions = classical.actions;
  m.init = classical.init;

  GroundAction check;
  check.id = static_cast<ActionId>(m.actions.size());
  check.name = "goal-check";
  check.pre = classical.goal;
  check.cost = 0;
  m.actions.push_back(check);

  AbstractTask top;
  top.id = 0;
  top.name = "top";
  m.tasks.push_back(top);

  for (const GroundAction& a : classical.actions) {
    Method via;
    via.id = static_cast<MethodId>(m.methods.size());
    via.name = "m-do-" + std::to_string(a.id) + "-" + a.name;
    via.task = top.id;
    NodeId act = via.network.add_node({TaskKind::Primitive, a.id});
    NodeId rec = via.network.add_node({TaskKind::Abstract, top.id});
    via.network.add_edge(act, rec);
    m.tasks[0].methods.push_back(via.id);
    m.methods.push_back(std::move(via));
  }

  Method finish;
  finish.id = static_cast<MethodId>(m.methods.size());
  finish.name = "m-goal";
  finish.task = top.id;
  finish.network.add_node({TaskKind::Primitive, check.id});
  m.tasks[0].methods.push_back(finish.id);
  m.methods.push_back(std::move(finish));

  m.initial_network.add_node({TaskKind::Abstract, top.id});
  return m;
}

}  // namespace htnkit
