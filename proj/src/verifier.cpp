#include "htnkit/verifier.hpp"

#include <algorithm>
#include <cctype>
#include <climits>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace htnkit {

const char* verify_failure_name(VerifyFailure f) {
  switch (f) {
    case VerifyFailure::None: return "none";
    case VerifyFailure::ParseError: return "parse-error";
    case VerifyFailure::UnknownAction: return "unknown-action";
    case VerifyFailure::NotExecutable: return "not-executable";
    case VerifyFailure::WitnessMalformed: return "witness-malformed";
    case VerifyFailure::MethodMismatch: return "method-mismatch";
    case VerifyFailure::OrderViolation: return "order-violation";
    case VerifyFailure::LeafPlanMismatch: return "leaf-plan-mismatch";
    case VerifyFailure::GoalUnsatisfied: return "goal-unsatisfied";
    case VerifyFailure::BoundExceeded: return "bound-exceeded";
  }
  return "unknown";
}

std::string Verdict::str() const {
  if (accepted) return "accepted";
  std::string out = std::string("rejected: ") + verify_failure_name(failure);
  if (index >= 0) out += " at " + std::to_string(index);
  if (!detail.empty()) out += " (" + detail + ")";
  return out;
}

namespace {

Verdict reject(VerifyFailure f, int index, std::string detail, std::uint64_t checks) {
  Verdict v;
  v.failure = f;
  v.index = index;
  v.detail = std::move(detail);
  v.elementary_checks = checks;
  return v;
}

struct Interval {
  int lo = INT_MAX;
  int hi = -1;
  bool empty() const { return hi < lo; }
  void merge(const Interval& other) {
    lo = std::min(lo, other.lo);
    hi = std::max(hi, other.hi);
  }
};

}  // namespace

Verdict verify(const GroundModel& m, const Plan& plan, const DecompositionWitness& w) {
  std::uint64_t checks = 0;
  const int n = static_cast<int>(plan.steps.size());

  for (int i = 0; i < n; ++i) {
    checks++;
    if (plan.steps[i] < 0 || plan.steps[i] >= static_cast<int>(m.actions.size()))
      return reject(VerifyFailure::UnknownAction, i, "plan step has no such action", checks);
  }

  // Stage 1: witness shape.
  std::map<int, const DecompositionWitness::Node*> node_of;
  for (const auto& [id, node] : w.nodes) {
    checks++;
    if (id < 0)
      return reject(VerifyFailure::WitnessMalformed, id, "negative node id", checks);
    if (!node_of.emplace(id, &node).second)
      return reject(VerifyFailure::WitnessMalformed, id, "node id defined twice", checks);
  }
  std::map<int, int> parents;
  for (const auto& [id, node] : w.nodes) {
    for (int c : node.children) {
      checks++;
      if (!node_of.count(c))
        return reject(VerifyFailure::WitnessMalformed, id,
                      "child " + std::to_string(c) + " does not exist", checks);
      parents[c]++;
    }
  }
  for (const auto& [id, count] : parents) {
    checks++;
    if (count > 1)
      return reject(VerifyFailure::WitnessMalformed, id, "node has several parents", checks);
  }
  std::set<int> root_set(w.roots.begin(), w.roots.end());
  if (root_set.size() != w.roots.size())
    return reject(VerifyFailure::WitnessMalformed, -1, "duplicate root entries", checks);
  for (int r : w.roots) {
    checks++;
    if (!node_of.count(r))
      return reject(VerifyFailure::WitnessMalformed, r, "root node does not exist", checks);
    if (parents.count(r))
      return reject(VerifyFailure::WitnessMalformed, r, "root node has a parent", checks);
  }
  for (const auto& [id, node] : w.nodes) {
    checks++;
    if (!parents.count(id) && !root_set.count(id))
      return reject(VerifyFailure::WitnessMalformed, id, "node unreachable from the roots",
                    checks);
  }

  // Leaves are exactly the plan positions and carry the plan's actions.
  for (int i = 0; i < n; ++i) {
    checks++;
    auto it = node_of.find(i);
    if (it == node_of.end())
      return reject(VerifyFailure::LeafPlanMismatch, i, "plan step missing from witness",
                    checks);
    const auto& node = *it->second;
    if (!node.task.is_primitive())
      return reject(VerifyFailure::LeafPlanMismatch, i, "plan position labelled abstract",
                    checks);
    if (node.task.index != plan.steps[i])
      return reject(VerifyFailure::LeafPlanMismatch, i,
                    "leaf action differs from plan step", checks);
    if (node.method || !node.children.empty())
      return reject(VerifyFailure::WitnessMalformed, i,
                    "primitive node with method or children", checks);
  }
  for (const auto& [id, node] : w.nodes) {
    checks++;
    if (node.task.is_primitive()) {
      if (id >= n)
        return reject(VerifyFailure::LeafPlanMismatch, id,
                      "primitive node is not a plan position", checks);
      if (node.task.index < 0 || node.task.index >= static_cast<int>(m.actions.size()))
        return reject(VerifyFailure::UnknownAction, id, "no such action", checks);
    } else {
      if (id < n)
        return reject(VerifyFailure::LeafPlanMismatch, id,
                      "abstract node occupies a plan position", checks);
      if (node.task.index < 0 || node.task.index >= static_cast<int>(m.tasks.size()))
        return reject(VerifyFailure::UnknownAction, id, "no such abstract task", checks);
      if (!node.method)
        return reject(VerifyFailure::WitnessMalformed, id, "abstract node without method",
                      checks);
    }
  }

  // Stage 2: root children instantiate the initial network; each abstract
  // node's children match its method's network positionally.
  if (w.roots.size() != m.initial_network.nodes.size())
    return reject(VerifyFailure::WitnessMalformed, -1,
                  "root count differs from the initial network", checks);
  for (std::size_t i = 0; i < w.roots.size(); ++i) {
    checks++;
    if (!(node_of.at(w.roots[i])->task == m.initial_network.nodes[i].task))
      return reject(VerifyFailure::WitnessMalformed, w.roots[i],
                    "root task differs from the initial network", checks);
  }
  for (const auto& [id, node] : w.nodes) {
    if (node.task.is_primitive()) continue;
    MethodId mid = *node.method;
    checks++;
    if (mid < 0 || mid >= static_cast<int>(m.methods.size()))
      return reject(VerifyFailure::MethodMismatch, id, "no such method", checks);
    const Method& method = m.methods[mid];
    if (method.task != node.task.index)
      return reject(VerifyFailure::MethodMismatch, id,
                    "method decomposes a different task", checks);
    if (node.children.size() != method.network.size())
      return reject(VerifyFailure::MethodMismatch, id,
                    "child count differs from the method network", checks);
    for (std::size_t i = 0; i < node.children.size(); ++i) {
      checks++;
      if (!(node_of.at(node.children[i])->task == method.network.nodes[i].task))
        return reject(VerifyFailure::MethodMismatch, id,
                      "child task differs from the method network", checks);
    }
  }

  // Stage 3: ordering constraints hold over the plan positions of leaves.
  // Each node maps to the interval of its leaf positions; a constraint
  // (u, v) needs u's whole interval before v's.
  std::map<int, Interval> intervals;
  std::function<Interval(int)> leaf_interval = [&](int id) -> Interval {
    auto memo = intervals.find(id);
    if (memo != intervals.end()) return memo->second;
    const auto& node = *node_of.at(id);
    Interval iv;
    checks++;
    if (node.task.is_primitive()) {
      iv.lo = iv.hi = id;
    } else {
      for (int c : node.children) iv.merge(leaf_interval(c));
    }
    intervals[id] = iv;
    return iv;
  };

  auto check_edges = [&](const TaskNetwork& net, const std::vector<int>& members,
                         int reported_node) -> Verdict {
    std::map<NodeId, std::size_t> position;
    for (std::size_t i = 0; i < net.nodes.size(); ++i) position[net.nodes[i].id] = i;
    for (const auto& [b, a] : net.ordering) {
      checks++;
      Interval before = leaf_interval(members[position.at(b)]);
      Interval after = leaf_interval(members[position.at(a)]);
      if (before.empty() || after.empty()) continue;
      if (before.hi >= after.lo) {
        Verdict v = reject(VerifyFailure::OrderViolation, reported_node,
                           "constrained leaves overlap in the plan", checks);
        v.leaf_pair = {before.hi, after.lo};
        return v;
      }
    }
    Verdict ok;
    ok.accepted = true;
    return ok;
  };

  {
    Verdict v = check_edges(m.initial_network, w.roots, -1);
    if (!v.accepted) return v;
    for (const auto& [id, node] : w.nodes) {
      if (node.task.is_primitive()) continue;
      v = check_edges(m.methods[*node.method].network, node.children, id);
      if (!v.accepted) return v;
    }
  }

  // Stage 4: executability.
  ExecutionResult exec = is_executable(plan, m.init, m.actions);
  checks += plan.steps.size() + 1;
  if (!exec.executable)
    return reject(VerifyFailure::NotExecutable, exec.failing_step,
                  "precondition unsatisfied", checks);

  // Stage 5: goal.
  checks += m.goal.size();
  if (!exec.final_state.contains_all(m.goal))
    return reject(VerifyFailure::GoalUnsatisfied, -1, "goal does not hold at the end", checks);

  Verdict v;
  v.accepted = true;
  v.elementary_checks = checks;
  return v;
}

// ---------------------------------------------------------------------------
// Witness-free verification: exhaustive decomposition search matching the
// plan prefix by prefix.

namespace {

struct SearchNet {
  struct N {
    int id;
    TaskRef task;
  };
  std::vector<N> nodes;
  std::vector<std::pair<int, int>> edges;

  bool has_pred(int id) const {
    for (const auto& [b, a] : edges)
      if (a == id) return true;
    return false;
  }

  int primitive_count() const {
    int k = 0;
    for (const auto& n : nodes) k += n.task.is_primitive() ? 1 : 0;
    return k;
  }

  std::string key(int plan_pos, int used) const {
    std::string out = std::to_string(plan_pos) + "." + std::to_string(used) + "|";
    for (const auto& n : nodes)
      out += (n.task.is_primitive() ? "a" : "t") + std::to_string(n.task.index) + ",";
    out += "|";
    for (const auto& [b, a] : edges) out += std::to_string(b) + "<" + std::to_string(a) + ",";
    return out;
  }
};

struct DerivabilitySearch {
  const GroundModel& m;
  const Plan& plan;
  int depth_bound;
  bool bound_hit = false;
  int next_id = 0;
  std::set<std::string> failed;

  bool dfs(const SearchNet& net, int plan_pos, int used) {
    const int n = static_cast<int>(plan.steps.size());
    if (net.nodes.empty()) return plan_pos == n;
    if (net.primitive_count() > n - plan_pos) return false;
    std::string key = net.key(plan_pos, used);
    if (failed.count(key)) return false;

    for (const auto& node : net.nodes) {
      if (net.has_pred(node.id)) continue;
      if (node.task.is_primitive()) {
        if (plan_pos >= n || node.task.index != plan.steps[plan_pos]) continue;
        SearchNet rest;
        for (const auto& keep : net.nodes)
          if (keep.id != node.id) rest.nodes.push_back(keep);
        for (const auto& [b, a] : net.edges)
          if (b != node.id && a != node.id) rest.edges.emplace_back(b, a);
        if (dfs(rest, plan_pos + 1, used)) return true;
      } else {
        for (MethodId mid : m.tasks[node.task.index].methods) {
          if (used >= depth_bound) {
            bound_hit = true;
            break;
          }
          const Method& method = m.methods[mid];
          SearchNet next;
          std::map<NodeId, int> fresh;
          for (const auto& keep : net.nodes)
            if (keep.id != node.id) next.nodes.push_back(keep);
          for (const auto& sub : method.network.nodes) {
            fresh[sub.id] = next_id;
            next.nodes.push_back({next_id++, sub.task});
          }
          for (const auto& [b, a] : net.edges) {
            if (b == node.id && a == node.id) continue;
            if (b == node.id) {
              for (const auto& [_, c] : fresh) next.edges.emplace_back(c, a);
            } else if (a == node.id) {
              for (const auto& [_, c] : fresh) next.edges.emplace_back(b, c);
            } else {
              next.edges.emplace_back(b, a);
            }
          }
          for (const auto& [b, a] : method.network.ordering)
            next.edges.emplace_back(fresh.at(b), fresh.at(a));
          if (dfs(next, plan_pos, used + 1)) return true;
        }
      }
    }
    failed.insert(std::move(key));
    return false;
  }
};

}  // namespace

Verdict verify_without_witness(const GroundModel& m, const Plan& plan, int depth_bound) {
  std::uint64_t checks = 0;
  if (depth_bound < 1) {
    return reject(VerifyFailure::BoundExceeded, -1, "depth bound must be at least 1", checks);
  }
  for (std::size_t i = 0; i < plan.steps.size(); ++i) {
    if (plan.steps[i] < 0 || plan.steps[i] >= static_cast<int>(m.actions.size()))
      return reject(VerifyFailure::UnknownAction, static_cast<int>(i),
                    "plan step has no such action", checks);
  }
  ExecutionResult exec = is_executable(plan, m.init, m.actions);
  if (!exec.executable)
    return reject(VerifyFailure::NotExecutable, exec.failing_step, "precondition unsatisfied",
                  checks);
  if (!exec.final_state.contains_all(m.goal))
    return reject(VerifyFailure::GoalUnsatisfied, -1, "goal does not hold at the end", checks);

  DerivabilitySearch search{m, plan, depth_bound, false, 0, {}};
  SearchNet initial;
  std::map<NodeId, int> ids;
  for (const auto& node : m.initial_network.nodes) {
    ids[node.id] = search.next_id;
    initial.nodes.push_back({search.next_id++, node.task});
  }
  for (const auto& [b, a] : m.initial_network.ordering)
    initial.edges.emplace_back(ids.at(b), ids.at(a));

  if (search.dfs(initial, 0, 0)) {
    Verdict v;
    v.accepted = true;
    return v;
  }
  if (search.bound_hit)
    return reject(VerifyFailure::BoundExceeded, -1,
                  "no decomposition found within the depth bound", checks);
  return reject(VerifyFailure::LeafPlanMismatch, -1, "no decomposition derives this plan",
                checks);
}

// ---------------------------------------------------------------------------
// Plan+witness text format.

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

std::string lowercase(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// "(name arg arg)" -> tokens; empty on malformed input.
std::vector<std::string> parse_paren_atom(const std::string& text) {
  std::string trimmed = text;
  auto first = trimmed.find_first_not_of(" \t");
  auto last = trimmed.find_last_not_of(" \t");
  if (first == std::string::npos) return {};
  trimmed = trimmed.substr(first, last - first + 1);
  if (trimmed.size() < 2 || trimmed.front() != '(' || trimmed.back() != ')') return {};
  return split_ws(lowercase(trimmed.substr(1, trimmed.size() - 2)));
}

Verdict parse_reject(VerifyFailure f, int line, const std::string& detail) {
  Verdict v;
  v.failure = f;
  v.index = line;
  v.detail = detail;
  return v;
}

}  // namespace

PlanFileResult parse_plan_file(const std::string& text, const GroundModel& m) {
  PlanFileResult result;
  // Raw structure first; all ids resolve in a second pass.
  struct RawStep {
    int index;
    std::vector<std::string> atom;
    int line;
  };
  struct RawNode {
    int id;
    std::vector<std::string> atom;
    std::string method;
    std::vector<int> children;
    int line;
  };
  std::vector<RawStep> steps;
  std::vector<RawNode> nodes;
  std::vector<int> roots;
  bool saw_begin = false, saw_root = false, saw_end = false;

  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    line_no++;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto last = line.find_last_not_of(" \t\r");
    std::string body = line.substr(first, last - first + 1);
    if (body[0] == '#') continue;
    if (saw_end) continue;  // trailing content is ignored
    if (!saw_begin) {
      if (body != "==>") {
        result.error = parse_reject(VerifyFailure::ParseError, line_no,
                                    "expected ==> before any plan content");
        return result;
      }
      saw_begin = true;
      continue;
    }
    if (body == "<==") {
      saw_end = true;
      continue;
    }
    std::vector<std::string> toks = split_ws(body);
    if (lowercase(toks[0]) == "root") {
      if (saw_root) {
        result.error = parse_reject(VerifyFailure::ParseError, line_no, "second root line");
        return result;
      }
      saw_root = true;
      for (std::size_t i = 1; i < toks.size(); ++i) {
        try {
          roots.push_back(std::stoi(toks[i]));
        } catch (const std::exception&) {
          result.error = parse_reject(VerifyFailure::ParseError, line_no, "bad root id");
          return result;
        }
      }
      continue;
    }
    int id;
    try {
      id = std::stoi(toks[0]);
    } catch (const std::exception&) {
      result.error = parse_reject(VerifyFailure::ParseError, line_no, "expected a numeric id");
      return result;
    }
    auto arrow = body.find("->");
    if (!saw_root) {
      if (arrow != std::string::npos) {
        result.error = parse_reject(VerifyFailure::ParseError, line_no,
                                    "decomposition line before the root line");
        return result;
      }
      auto open = body.find('(');
      if (open == std::string::npos) {
        result.error = parse_reject(VerifyFailure::ParseError, line_no, "expected (action ...)");
        return result;
      }
      RawStep step{id, parse_paren_atom(body.substr(open)), line_no};
      if (step.atom.empty()) {
        result.error = parse_reject(VerifyFailure::ParseError, line_no, "malformed action atom");
        return result;
      }
      steps.push_back(std::move(step));
    } else {
      if (arrow == std::string::npos) {
        result.error = parse_reject(VerifyFailure::ParseError, line_no,
                                    "decomposition line needs '-> <method> <children>'");
        return result;
      }
      auto open = body.find('(');
      if (open == std::string::npos || open > arrow) {
        result.error = parse_reject(VerifyFailure::ParseError, line_no, "expected (task ...)");
        return result;
      }
      RawNode node;
      node.id = id;
      node.line = line_no;
      node.atom = parse_paren_atom(body.substr(open, body.rfind(')', arrow) - open + 1));
      if (node.atom.empty()) {
        result.error = parse_reject(VerifyFailure::ParseError, line_no, "malformed task atom");
        return result;
      }
      std::vector<std::string> tail = split_ws(body.substr(arrow + 2));
      if (tail.empty()) {
        result.error = parse_reject(VerifyFailure::ParseError, line_no, "missing method name");
        return result;
      }
      node.method = lowercase(tail[0]);
      for (std::size_t i = 1; i < tail.size(); ++i) {
        try {
          node.children.push_back(std::stoi(tail[i]));
        } catch (const std::exception&) {
          result.error = parse_reject(VerifyFailure::ParseError, line_no, "bad child id");
          return result;
        }
      }
      nodes.push_back(std::move(node));
    }
  }
  if (!saw_begin) {
    result.error = parse_reject(VerifyFailure::ParseError, line_no, "missing ==> marker");
    return result;
  }
  if (!saw_root) {
    result.error = parse_reject(VerifyFailure::ParseError, line_no, "missing root line");
    return result;
  }
  if (!saw_end) {
    result.error = parse_reject(VerifyFailure::ParseError, line_no, "missing <== marker");
    return result;
  }

  // Step indices must be 0..n-1, each exactly once.
  const int n = static_cast<int>(steps.size());
  std::vector<const RawStep*> by_index(n, nullptr);
  for (const auto& s : steps) {
    if (s.index < 0 || s.index >= n || by_index[s.index]) {
      result.error = parse_reject(VerifyFailure::ParseError, s.line,
                                  "step indices must be contiguous and unique");
      return result;
    }
    by_index[s.index] = &s;
  }

  // Resolve ground actions by name and arguments.
  std::map<std::string, ActionId> action_ids;
  for (const auto& a : m.actions) {
    std::string key = a.name;
    for (const auto& arg : a.args) key += " " + arg;
    action_ids[key] = a.id;
  }
  std::map<std::string, TaskId> task_ids;
  for (const auto& t : m.tasks) {
    std::string key = t.name;
    for (const auto& arg : t.args) key += " " + arg;
    task_ids[key] = t.id;
  }
  auto join = [](const std::vector<std::string>& toks) {
    std::string key;
    for (const auto& t : toks) {
      if (!key.empty()) key += " ";
      key += t;
    }
    return key;
  };

  for (int i = 0; i < n; ++i) {
    auto it = action_ids.find(join(by_index[i]->atom));
    if (it == action_ids.end()) {
      result.error = parse_reject(VerifyFailure::UnknownAction, by_index[i]->line,
                                  "unknown action " + join(by_index[i]->atom));
      return result;
    }
    result.plan.steps.push_back(it->second);
  }

  std::set<int> node_ids;
  for (const auto& node : nodes) {
    if (node.id < n) {
      result.error = parse_reject(VerifyFailure::ParseError, node.line,
                                  "decomposition id collides with plan steps");
      return result;
    }
    if (!node_ids.insert(node.id).second) {
      result.error = parse_reject(VerifyFailure::ParseError, node.line, "node id defined twice");
      return result;
    }
  }
  auto known_id = [&](int id) { return (id >= 0 && id < n) || node_ids.count(id); };
  for (int r : roots) {
    if (!known_id(r)) {
      result.error = parse_reject(VerifyFailure::ParseError, 0,
                                  "root id " + std::to_string(r) + " is undefined");
      return result;
    }
  }

  // Leaf witness entries mirror the plan.
  for (int i = 0; i < n; ++i) {
    DecompositionWitness::Node leaf;
    leaf.task = {TaskKind::Primitive, result.plan.steps[i]};
    result.witness.nodes.emplace_back(i, std::move(leaf));
  }

  // Children labels are needed to pick among same-named method instances,
  // so resolve tasks first.
  std::map<int, TaskRef> task_of;
  for (int i = 0; i < n; ++i) task_of[i] = {TaskKind::Primitive, result.plan.steps[i]};
  for (const auto& node : nodes) {
    auto it = task_ids.find(join(node.atom));
    if (it == task_ids.end()) {
      result.error = parse_reject(VerifyFailure::UnknownAction, node.line,
                                  "unknown abstract task " + join(node.atom));
      return result;
    }
    task_of[node.id] = {TaskKind::Abstract, it->second};
  }

  for (const auto& node : nodes) {
    for (int c : node.children) {
      if (!known_id(c)) {
        result.error = parse_reject(VerifyFailure::ParseError, node.line,
                                    "child id " + std::to_string(c) + " is undefined");
        return result;
      }
    }
    TaskId tid = task_of[node.id].index;
    MethodId chosen = -1, named = -1;
    for (MethodId mid : m.tasks[tid].methods) {
      const Method& method = m.methods[mid];
      if (method.name != node.method) continue;
      if (named < 0) named = mid;
      if (method.network.size() != node.children.size()) continue;
      bool match = true;
      for (std::size_t i = 0; i < node.children.size(); ++i) {
        if (!(task_of.at(node.children[i]) == method.network.nodes[i].task)) {
          match = false;
          break;
        }
      }
      if (match) {
        chosen = mid;
        break;
      }
    }
    if (named < 0) {
      result.error = parse_reject(VerifyFailure::MethodMismatch, node.line,
                                  "task has no method named " + node.method);
      return result;
    }
    DecompositionWitness::Node wn;
    wn.task = task_of[node.id];
    wn.method = chosen >= 0 ? chosen : named;  // verify() reports the precise mismatch
    wn.children = node.children;
    result.witness.nodes.emplace_back(node.id, std::move(wn));
  }
  std::sort(result.witness.nodes.begin(), result.witness.nodes.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  result.witness.roots = roots;
  result.ok = true;
  return result;
}

std::string print_plan_file(const GroundModel& m, const Plan& plan,
                            const DecompositionWitness& w) {
  std::ostringstream os;
  os << "==>\n";
  for (std::size_t i = 0; i < plan.steps.size(); ++i)
    os << i << " " << m.task_ref_str({TaskKind::Primitive, plan.steps[i]}) << "\n";
  os << "root";
  for (int r : w.roots) os << " " << r;
  os << "\n";
  // Depth-first over abstract nodes, children in method order.
  std::function<void(int)> emit = [&](int id) {
    const DecompositionWitness::Node* node = w.find(id);
    if (!node || node->task.is_primitive()) return;
    os << id << " " << m.task_ref_str(node->task) << " -> "
       << (node->method ? m.methods[*node->method].name : "?");
    for (int c : node->children) os << " " << c;
    os << "\n";
    for (int c : node->children) emit(c);
  };
  for (int r : w.roots) emit(r);
  os << "<==\n";
  return os.str();
}

}  // namespace htnkit
