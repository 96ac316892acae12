#include "oracles.hpp"

#include <algorithm>
#include <climits>
#include <functional>
#include <map>
#include <string>

namespace htnkit::oracle {

namespace {

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

// Small progression network with stable integer ids.
struct Net {
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
};

std::string label_str(const TaskRef& t) {
  return (t.is_primitive() ? "a" : "t") + std::to_string(t.index);
}

// Renaming-insensitive encoding: nodes are grouped by label and every
// within-group permutation is tried; the lexicographically smallest encoding
// wins. Exact for the tiny networks the oracle sees.
std::string canonical_net_key(const Net& net) {
  const std::size_t n = net.nodes.size();
  std::vector<std::size_t> base(n);
  for (std::size_t i = 0; i < n; ++i) base[i] = i;
  std::sort(base.begin(), base.end(), [&](std::size_t a, std::size_t b) {
    auto la = label_str(net.nodes[a].task), lb = label_str(net.nodes[b].task);
    if (la != lb) return la < lb;
    return a < b;
  });

  auto encode = [&](const std::vector<std::size_t>& order) {
    std::map<int, int> pos;
    for (std::size_t i = 0; i < n; ++i) pos[net.nodes[order[i]].id] = static_cast<int>(i);
    std::string out;
    for (std::size_t i = 0; i < n; ++i) out += label_str(net.nodes[order[i]].task) + ",";
    std::vector<std::pair<int, int>> edges;
    for (const auto& [b, a] : net.edges) edges.emplace_back(pos.at(b), pos.at(a));
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    out += "|";
    for (const auto& [b, a] : edges) out += std::to_string(b) + "<" + std::to_string(a) + ";";
    return out;
  };

  // Group bounds within the sorted base order.
  std::vector<std::pair<std::size_t, std::size_t>> groups;
  std::size_t at = 0;
  long long perm_count = 1;
  const long long kPermCap = 40320;
  while (at < n) {
    std::size_t end = at + 1;
    while (end < n &&
           label_str(net.nodes[base[end]].task) == label_str(net.nodes[base[at]].task))
      end++;
    groups.emplace_back(at, end);
    for (std::size_t k = 2; k <= end - at && perm_count <= kPermCap; ++k)
      perm_count *= static_cast<long long>(k);
    at = end;
  }
  if (perm_count > kPermCap) {
    // Too many interchangeable nodes for exhaustive permutation; order by
    // iterated neighbourhood signatures instead. Equal keys still imply
    // isomorphic networks, some isomorphic pairs may just miss each other.
    std::map<int, std::size_t> pos;
    for (std::size_t i = 0; i < n; ++i) pos[net.nodes[i].id] = i;
    std::vector<std::string> sig(n);
    for (std::size_t i = 0; i < n; ++i) sig[i] = label_str(net.nodes[i].task);
    for (std::size_t round = 0; round < 3; ++round) {
      std::vector<std::string> next(n);
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::string> preds, succs;
        for (const auto& [b, a] : net.edges) {
          if (pos.at(a) == i) preds.push_back(sig[pos.at(b)]);
          if (pos.at(b) == i) succs.push_back(sig[pos.at(a)]);
        }
        std::sort(preds.begin(), preds.end());
        std::sort(succs.begin(), succs.end());
        next[i] = sig[i] + "(";
        for (const auto& s : preds) next[i] += s + ",";
        next[i] += ")(";
        for (const auto& s : succs) next[i] += s + ",";
        next[i] += ")";
      }
      sig.swap(next);
    }
    std::vector<std::size_t> order = base;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      auto la = label_str(net.nodes[a].task), lb = label_str(net.nodes[b].task);
      if (la != lb) return la < lb;
      return sig[a] < sig[b];
    });
    return encode(order);
  }

  std::string best;
  std::vector<std::size_t> order = base;
  std::function<void(std::size_t)> permute = [&](std::size_t g) {
    if (g == groups.size()) {
      std::string enc = encode(order);
      if (best.empty() || enc < best) best = enc;
      return;
    }
    auto [lo, hi] = groups[g];
    std::vector<std::size_t> slice(order.begin() + lo, order.begin() + hi);
    std::sort(slice.begin(), slice.end());
    do {
      std::copy(slice.begin(), slice.end(), order.begin() + lo);
      permute(g + 1);
    } while (std::next_permutation(slice.begin(), slice.end()));
  };
  permute(0);
  return best;
}

std::string state_key(const State& s) {
  std::string out;
  for (FactId f : s.facts) out += std::to_string(f) + ".";
  return out;
}

// The suffix set of a configuration (the plans completing it within the
// remaining budget) only depends on (state, network, budget), so it is
// memoized under the renaming-insensitive network key. A loop back into a
// configuration that is still open on the stack contributes nothing (a plan
// derived through the loop is derivable without it); a result is memoized
// once every such loop has closed inside its own subtree.
struct ProgressionSearch {
  const GroundModel& m;
  const ProgressionOptions& opts;
  std::map<std::string, std::set<std::vector<ActionId>>> memo;
  std::map<std::string, int> open;  // key -> stack depth
  int next_id = 0;
  std::uint64_t calls = 0;
  static constexpr int kNoLoop = INT_MAX;
  // Fail loudly instead of hanging when a model is out of the oracle's reach.
  static constexpr std::uint64_t kCallBudget = 5'000'000;

  Net initial() {
    Net net;
    std::map<NodeId, int> ids;
    for (const auto& node : m.initial_network.nodes) {
      ids[node.id] = next_id;
      net.nodes.push_back({next_id++, node.task});
    }
    for (const auto& [b, a] : m.initial_network.ordering)
      net.edges.emplace_back(ids.at(b), ids.at(a));
    return net;
  }

  Net without(const Net& net, int id) const {
    Net out;
    for (const auto& n : net.nodes)
      if (n.id != id) out.nodes.push_back(n);
    for (const auto& [b, a] : net.edges)
      if (b != id && a != id) out.edges.emplace_back(b, a);
    return out;
  }

  Net decomposed(const Net& net, int id, const Method& method) {
    Net out;
    std::map<NodeId, int> fresh;
    for (const auto& n : net.nodes)
      if (n.id != id) out.nodes.push_back(n);
    for (const auto& sub : method.network.nodes) {
      fresh[sub.id] = next_id;
      out.nodes.push_back({next_id++, sub.task});
    }
    for (const auto& [b, a] : net.edges) {
      if (b == id && a == id) continue;
      if (b == id) {
        for (const auto& [_, c] : fresh) out.edges.emplace_back(c, a);
      } else if (a == id) {
        for (const auto& [_, c] : fresh) out.edges.emplace_back(b, c);
      } else {
        out.edges.emplace_back(b, a);
      }
    }
    for (const auto& [b, a] : method.network.ordering)
      out.edges.emplace_back(fresh.at(b), fresh.at(a));
    return out;
  }

  // `loop_depth` reports the shallowest open stack depth this subtree looped
  // back into; kNoLoop when none.
  std::set<std::vector<ActionId>> suffixes(const State& state, const Net& net,
                                           std::size_t budget, int depth, int& loop_depth) {
    if (++calls > kCallBudget)
      throw std::runtime_error("progression oracle exceeded its call budget");
    std::set<std::vector<ActionId>> result;
    if (net.nodes.empty()) {
      if (state.contains_all(m.goal)) result.insert(std::vector<ActionId>{});
      return result;
    }
    std::size_t primitives = 0;
    for (const auto& n : net.nodes) primitives += n.task.is_primitive() ? 1 : 0;
    if (primitives > budget) return result;

    std::string key =
        state_key(state) + "|" + std::to_string(budget) + "|" + canonical_net_key(net);
    auto hit = memo.find(key);
    if (hit != memo.end()) return hit->second;
    if (auto reentry = open.find(key); reentry != open.end()) {
      loop_depth = std::min(loop_depth, reentry->second);
      return result;
    }
    open[key] = depth;
    int sub_loop = kNoLoop;

    for (const auto& node : net.nodes) {
      if (net.has_pred(node.id)) continue;
      if (node.task.is_primitive()) {
        if (budget == 0) continue;
        const GroundAction& a = m.actions[node.task.index];
        if (!is_applicable(state, a)) continue;
        auto subs = suffixes(apply_action(state, a), without(net, node.id), budget - 1,
                             depth + 1, sub_loop);
        for (const auto& s : subs) {
          std::vector<ActionId> plan{a.id};
          plan.insert(plan.end(), s.begin(), s.end());
          result.insert(std::move(plan));
        }
      } else {
        for (MethodId mid : m.tasks[node.task.index].methods) {
          const Method& method = m.methods[mid];
          if (opts.method_preconditions && !state.contains_all(method.pre)) continue;
          if (net.nodes.size() - 1 + method.network.size() > opts.max_network_size) continue;
          auto subs =
              suffixes(state, decomposed(net, node.id, method), budget, depth + 1, sub_loop);
          result.insert(subs.begin(), subs.end());
        }
      }
    }
    open.erase(key);
    // Loops that closed within this subtree are absorbed here; the result is
    // then the exact fixpoint and safe to store.
    if (sub_loop >= depth) {
      memo[key] = result;
    } else {
      loop_depth = std::min(loop_depth, sub_loop);
    }
    return result;
  }
};

}  // namespace

std::set<std::vector<ActionId>> progression_solutions(const GroundModel& m,
                                                      const ProgressionOptions& opts) {
  ProgressionSearch search{m, opts, {}, {}, 0};
  Net net = search.initial();
  int loop_depth = ProgressionSearch::kNoLoop;
  return search.suffixes(m.init, net, opts.max_plan_length, 0, loop_depth);
}

namespace {

// Minimum completion cost within the budget; same progression semantics as
// the set enumeration but with scalar payloads, so it scales to the full
// random suite. Same loop-absorption discipline.
struct MinCostSearch {
  const GroundModel& m;
  const ProgressionOptions& opts;
  std::map<std::string, std::optional<long long>> memo;
  std::map<std::string, int> open;
  int next_id = 0;
  std::uint64_t calls = 0;
  ProgressionSearch nets{m, opts, {}, {}, 0, 0};  // reuse the net helpers

  std::optional<long long> best(const State& state, const Net& net, std::size_t budget,
                                int depth, int& loop_depth) {
    if (++calls > ProgressionSearch::kCallBudget)
      throw std::runtime_error("min-cost oracle exceeded its call budget");
    if (net.nodes.empty())
      return state.contains_all(m.goal) ? std::optional<long long>(0) : std::nullopt;
    std::size_t primitives = 0;
    for (const auto& n : net.nodes) primitives += n.task.is_primitive() ? 1 : 0;
    if (primitives > budget) return std::nullopt;

    std::string key =
        state_key(state) + "|" + std::to_string(budget) + "|" + canonical_net_key(net);
    auto hit = memo.find(key);
    if (hit != memo.end()) return hit->second;
    if (auto reentry = open.find(key); reentry != open.end()) {
      loop_depth = std::min(loop_depth, reentry->second);
      return std::nullopt;
    }
    open[key] = depth;
    int sub_loop = ProgressionSearch::kNoLoop;
    std::optional<long long> result;

    for (const auto& node : net.nodes) {
      if (net.has_pred(node.id)) continue;
      if (node.task.is_primitive()) {
        if (budget == 0) continue;
        const GroundAction& a = m.actions[node.task.index];
        if (!is_applicable(state, a)) continue;
        auto sub = best(apply_action(state, a), nets.without(net, node.id), budget - 1,
                        depth + 1, sub_loop);
        if (sub && (!result || a.cost + *sub < *result)) result = a.cost + *sub;
      } else {
        for (MethodId mid : m.tasks[node.task.index].methods) {
          const Method& method = m.methods[mid];
          if (opts.method_preconditions && !state.contains_all(method.pre)) continue;
          if (net.nodes.size() - 1 + method.network.size() > opts.max_network_size) continue;
          auto sub = best(state, nets.decomposed(net, node.id, method), budget, depth + 1,
                          sub_loop);
          if (sub && (!result || *sub < *result)) result = *sub;
        }
      }
    }
    open.erase(key);
    if (sub_loop >= depth) {
      memo[key] = result;
    } else {
      loop_depth = std::min(loop_depth, sub_loop);
    }
    return result;
  }
};

}  // namespace

std::optional<long long> optimal_cost(const GroundModel& m, const ProgressionOptions& opts) {
  MinCostSearch search{m, opts, {}, {}, 0, 0, {m, opts, {}, {}, 0, 0}};
  Net net = search.nets.initial();
  int loop_depth = ProgressionSearch::kNoLoop;
  return search.best(m.init, net, opts.max_plan_length, 0, loop_depth);
}

// ---------------------------------------------------------------------------
// Witness tree enumeration.

namespace {

struct TreeBuilder {
  const GroundModel& m;
  std::size_t max_methods, max_leaves, cap;
  TreeEnumeration result;

  std::size_t leaf_count(const Tree& tree) const {
    std::size_t k = 0;
    for (const auto& n : tree.nodes) k += n.task.is_primitive() ? 1 : 0;
    return k;
  }

  void expand(Tree tree, std::size_t methods_used) {
    if (result.exceeded) return;
    int open = -1;
    for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
      if (!tree.nodes[i].task.is_primitive() && !tree.nodes[i].method) {
        open = static_cast<int>(i);
        break;
      }
    }
    if (open < 0) {
      if (result.trees.size() >= cap) {
        result.exceeded = true;
        return;
      }
      result.trees.push_back(std::move(tree));
      return;
    }
    if (methods_used >= max_methods) {
      result.exceeded = true;
      return;
    }
    for (MethodId mid : m.tasks[tree.nodes[open].task.index].methods) {
      const Method& method = m.methods[mid];
      Tree next = tree;
      next.nodes[open].method = mid;
      for (const auto& sub : method.network.nodes) {
        next.nodes[open].children.push_back(static_cast<int>(next.nodes.size()));
        next.nodes.push_back({sub.task, std::nullopt, {}});
      }
      if (leaf_count(next) > max_leaves) {
        result.exceeded = true;
        continue;
      }
      expand(std::move(next), methods_used + 1);
    }
  }
};

}  // namespace

TreeEnumeration enumerate_trees(const GroundModel& m, std::size_t max_methods,
                                std::size_t max_leaves, std::size_t cap) {
  TreeBuilder builder{m, max_methods, max_leaves, cap, {}};
  Tree root;
  for (const auto& node : m.initial_network.nodes) {
    root.roots.push_back(static_cast<int>(root.nodes.size()));
    root.nodes.push_back({node.task, std::nullopt, {}});
  }
  builder.expand(std::move(root), 0);
  return builder.result;
}

std::vector<std::vector<ActionId>> tree_leaf_orders(const GroundModel& m, const Tree& tree,
                                                    std::size_t cap) {
  // Leaves of each subtree, then one constraint edge per pair of leaves
  // under the two sides of every ordering constraint.
  std::vector<std::vector<int>> leaves_under(tree.nodes.size());
  std::function<void(int)> collect = [&](int at) {
    if (tree.nodes[at].task.is_primitive()) {
      leaves_under[at].push_back(at);
      return;
    }
    for (int c : tree.nodes[at].children) {
      collect(c);
      leaves_under[at].insert(leaves_under[at].end(), leaves_under[c].begin(),
                              leaves_under[c].end());
    }
  };
  for (int r : tree.roots) collect(r);

  TaskNetwork leaf_net;
  std::map<int, NodeId> leaf_node;
  for (std::size_t i = 0; i < tree.nodes.size(); ++i)
    if (tree.nodes[i].task.is_primitive())
      leaf_node[static_cast<int>(i)] = leaf_net.add_node(tree.nodes[i].task);

  auto constrain = [&](const TaskNetwork& network, const std::vector<int>& members) {
    std::map<NodeId, std::size_t> position;
    for (std::size_t i = 0; i < network.nodes.size(); ++i) position[network.nodes[i].id] = i;
    for (const auto& [b, a] : network.ordering) {
      for (int lb : leaves_under[members[position.at(b)]])
        for (int la : leaves_under[members[position.at(a)]])
          leaf_net.add_edge(leaf_node.at(lb), leaf_node.at(la));
    }
  };
  constrain(m.initial_network, tree.roots);
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    const auto& node = tree.nodes[i];
    if (node.task.is_primitive() || !node.method) continue;
    constrain(m.methods[*node.method].network, node.children);
  }

  Linearizations lin = linearizations(leaf_net, cap);
  std::map<NodeId, int> tree_of_leaf;
  for (const auto& [tree_idx, node_id] : leaf_node) tree_of_leaf[node_id] = tree_idx;
  std::vector<std::vector<ActionId>> out;
  for (const auto& order : lin.orders) {
    std::vector<ActionId> plan;
    for (NodeId id : order) plan.push_back(tree.nodes[tree_of_leaf.at(id)].task.index);
    out.push_back(std::move(plan));
  }
  return out;
}

DecompositionWitness tree_to_witness(const Tree& tree, const std::vector<int>& leaf_order) {
  DecompositionWitness w;
  std::map<int, int> final_id;
  for (std::size_t pos = 0; pos < leaf_order.size(); ++pos)
    final_id[leaf_order[pos]] = static_cast<int>(pos);
  int next = static_cast<int>(leaf_order.size());
  std::vector<int> bfs;
  for (int r : tree.roots)
    if (!tree.nodes[r].task.is_primitive()) {
      final_id[r] = next++;
      bfs.push_back(r);
    }
  for (std::size_t at = 0; at < bfs.size(); ++at) {
    for (int c : tree.nodes[bfs[at]].children) {
      if (!tree.nodes[c].task.is_primitive()) {
        final_id[c] = next++;
        bfs.push_back(c);
      }
    }
  }
  for (int r : tree.roots) w.roots.push_back(final_id.at(r));
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    DecompositionWitness::Node node;
    node.task = tree.nodes[i].task;
    node.method = tree.nodes[i].method;
    for (int c : tree.nodes[i].children) node.children.push_back(final_id.at(c));
    w.nodes.emplace_back(final_id.at(static_cast<int>(i)), std::move(node));
  }
  std::sort(w.nodes.begin(), w.nodes.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return w;
}

// ---------------------------------------------------------------------------
// Product construction: shortest word in the intersection.

std::optional<int> product_min_word(const Cfg& cfg, const Dfa& dfa) {
  const int kInf = 1 << 28;
  std::map<std::string, int> state_index;
  for (std::size_t i = 0; i < dfa.states.size(); ++i)
    state_index[dfa.states[i]] = static_cast<int>(i);
  const int q_count = static_cast<int>(dfa.states.size());

  std::set<std::string> terminals(cfg.terminals.begin(), cfg.terminals.end());
  std::map<std::string, int> nt_index;
  for (std::size_t i = 0; i < cfg.nonterminals.size(); ++i)
    nt_index[cfg.nonterminals[i]] = static_cast<int>(i);
  const int nt_count = static_cast<int>(cfg.nonterminals.size());

  // len[q][X][q']: shortest word deriving X that moves the automaton q -> q'.
  std::vector<std::vector<std::vector<int>>> len(
      q_count, std::vector<std::vector<int>>(nt_count, std::vector<int>(q_count, kInf)));
  auto sym_len = [&](int q, const std::string& sym, int q2) -> int {
    if (terminals.count(sym)) {
      auto it = dfa.transition.find({dfa.states[q], sym});
      return (it != dfa.transition.end() && state_index.at(it->second) == q2) ? 1 : kInf;
    }
    return len[q][nt_index.at(sym)][q2];
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& p : cfg.productions) {
      int x = nt_index.at(p.lhs);
      for (int q = 0; q < q_count; ++q) {
        for (int q2 = 0; q2 < q_count; ++q2) {
          int candidate = kInf;
          if (p.rhs.empty()) {
            candidate = q == q2 ? 0 : kInf;
          } else if (p.rhs.size() == 1) {
            candidate = sym_len(q, p.rhs[0], q2);
          } else {
            for (int r = 0; r < q_count; ++r) {
              int a = sym_len(q, p.rhs[0], r);
              int b = sym_len(r, p.rhs[1], q2);
              if (a < kInf && b < kInf) candidate = std::min(candidate, a + b);
            }
          }
          if (candidate < len[q][x][q2]) {
            len[q][x][q2] = candidate;
            changed = true;
          }
        }
      }
    }
  }

  int best = kInf;
  int q0 = state_index.at(dfa.start);
  for (const auto& f : dfa.accepting)
    best = std::min(best, len[q0][nt_index.at(cfg.start)][state_index.at(f)]);
  if (best >= kInf) return std::nullopt;
  return best;
}

// ---------------------------------------------------------------------------
// Random inputs.

GroundModel random_tiny_model(std::mt19937_64& rng, const RandomModelOptions& opts) {
  GroundModel m;
  int fact_count = 3 + static_cast<int>(rand_below(rng, 6));  // 3..8
  for (int i = 0; i < fact_count; ++i)
    m.facts.push_back({i, "f" + std::to_string(i), {}});

  auto random_fact_set = [&](int max_size) {
    std::vector<FactId> out;
    int size = static_cast<int>(rand_below(rng, max_size + 1));
    for (int i = 0; i < size; ++i)
      out.push_back(static_cast<FactId>(rand_below(rng, fact_count)));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };

  int action_count = 2 + static_cast<int>(rand_below(rng, 2));  // 2..3
  for (int i = 0; i < action_count; ++i) {
    GroundAction a;
    a.id = i;
    a.name = "act" + std::to_string(i);
    a.pre = random_fact_set(2);
    a.add = random_fact_set(2);
    for (FactId f : random_fact_set(2))
      if (!std::binary_search(a.add.begin(), a.add.end(), f)) a.del.push_back(f);
    a.cost = 1;
    m.actions.push_back(std::move(a));
  }

  int task_count = 1 + static_cast<int>(rand_below(rng, 3));  // 1..3
  for (int i = 0; i < task_count; ++i)
    m.tasks.push_back({i, "task" + std::to_string(i), {}, {}});

  for (int t = 0; t < task_count; ++t) {
    int method_count = 1 + static_cast<int>(rand_below(rng, 3));  // 1..3
    for (int k = 0; k < method_count; ++k) {
      Method method;
      method.id = static_cast<MethodId>(m.methods.size());
      method.name = "m" + std::to_string(t) + "-" + std::to_string(k);
      method.task = t;
      if (opts.method_preconditions && rand_below(rng, 3) == 0)
        method.pre = random_fact_set(1);
      int subtask_count = static_cast<int>(rand_below(rng, 4));  // 0..3
      std::vector<NodeId> nodes;
      for (int s = 0; s < subtask_count; ++s) {
        TaskRef ref;
        bool primitive = rand_below(rng, 3) != 0;  // lean towards actions
        if (!primitive) {
          int target = opts.allow_recursion
                           ? static_cast<int>(rand_below(rng, task_count))
                           : (t > 0 ? static_cast<int>(rand_below(rng, t)) : -1);
          if (target < 0) primitive = true;
          else ref = {TaskKind::Abstract, target};
        }
        if (primitive)
          ref = {TaskKind::Primitive, static_cast<int>(rand_below(rng, action_count))};
        nodes.push_back(method.network.add_node(ref));
      }
      if (opts.totally_ordered) {
        for (std::size_t s = 0; s + 1 < nodes.size(); ++s)
          method.network.add_edge(nodes[s], nodes[s + 1]);
      } else {
        for (std::size_t i = 0; i < nodes.size(); ++i)
          for (std::size_t j = i + 1; j < nodes.size(); ++j)
            if (rand_below(rng, 3) == 0) method.network.add_edge(nodes[i], nodes[j]);
      }
      m.tasks[t].methods.push_back(method.id);
      m.methods.push_back(std::move(method));
    }
  }

  m.init.facts = random_fact_set(fact_count);
  m.init.normalize();
  if (rand_below(rng, 2) == 0) m.goal = random_fact_set(1);

  int root_count = 1 + static_cast<int>(rand_below(rng, 2));  // 1..2
  std::vector<NodeId> roots;
  for (int i = 0; i < root_count; ++i) {
    TaskRef ref{TaskKind::Abstract, static_cast<int>(rand_below(rng, task_count))};
    roots.push_back(m.initial_network.add_node(ref));
  }
  if (roots.size() == 2 && (opts.totally_ordered || rand_below(rng, 2) == 0))
    m.initial_network.add_edge(roots[0], roots[1]);
  return m;
}

GrammarSpec random_grammar_pair(std::mt19937_64& rng) {
  GrammarSpec spec;
  int nt_count = 1 + static_cast<int>(rand_below(rng, 4));  // 1..4
  int t_count = 1 + static_cast<int>(rand_below(rng, 3));   // 1..3
  for (int i = 0; i < t_count; ++i) spec.cfg.terminals.push_back(std::string(1, 'a' + i));
  for (int i = 0; i < nt_count; ++i) spec.cfg.nonterminals.push_back("n" + std::to_string(i));
  spec.cfg.start = "n0";

  int prod_count = 2 + static_cast<int>(rand_below(rng, 6));  // 2..7
  for (int i = 0; i < prod_count; ++i) {
    Cfg::Production p;
    p.lhs = spec.cfg.nonterminals[rand_below(rng, nt_count)];
    int rhs_len = static_cast<int>(rand_below(rng, 3));  // 0..2
    for (int j = 0; j < rhs_len; ++j) {
      if (rand_below(rng, 2) == 0)
        p.rhs.push_back(spec.cfg.terminals[rand_below(rng, t_count)]);
      else
        p.rhs.push_back(spec.cfg.nonterminals[rand_below(rng, nt_count)]);
    }
    spec.cfg.productions.push_back(std::move(p));
  }

  int q_count = 1 + static_cast<int>(rand_below(rng, 3));  // 1..3
  for (int i = 0; i < q_count; ++i) spec.dfa.states.push_back("q" + std::to_string(i));
  spec.dfa.start = "q0";
  for (const auto& q : spec.dfa.states)
    if (rand_below(rng, 2) == 0) spec.dfa.accepting.push_back(q);
  for (const auto& q : spec.dfa.states)
    for (const auto& t : spec.cfg.terminals)
      spec.dfa.transition[{q, t}] = spec.dfa.states[rand_below(rng, q_count)];
  return spec;
}

std::set<std::vector<ActionId>> classical_solutions(const ClassicalModel& m,
                                                    std::size_t max_plan_length) {
  std::set<std::vector<ActionId>> out;
  std::vector<ActionId> plan;
  std::function<void(const State&)> dfs = [&](const State& state) {
    if (state.contains_all(m.goal)) out.insert(plan);
    if (plan.size() >= max_plan_length) return;
    for (const auto& a : m.actions) {
      if (!is_applicable(state, a)) continue;
      plan.push_back(a.id);
      dfs(apply_action(state, a));
      plan.pop_back();
    }
  };
  dfs(m.init);
  return out;
}

}  // namespace htnkit::oracle
