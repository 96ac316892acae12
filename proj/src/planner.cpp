#include "htnkit/planner.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <map>
#include <memory>
#include <queue>
#include <unordered_set>

#include "htnkit/grounder.hpp"

namespace htnkit {

SearchConfig SearchConfig::for_mode(SearchMode mode, OrderClass order_class) {
  SearchConfig cfg;
  cfg.mode = mode;
  cfg.order_class = order_class;
  switch (mode) {
    case SearchMode::Satisficing: cfg.strategy = SearchStrategy::Dfs; break;
    case SearchMode::Optimal: cfg.strategy = SearchStrategy::UniformCost; break;
    case SearchMode::Agile: cfg.strategy = SearchStrategy::Greedy; break;
  }
  return cfg;
}

const char* solve_verdict_name(SolveVerdict v) {
  switch (v) {
    case SolveVerdict::Solved: return "solved";
    case SolveVerdict::ProvedUnsolvableWithinBound: return "proved-unsolvable-within-bound";
    case SolveVerdict::BoundExhausted: return "bound-exhausted";
    case SolveVerdict::Timeout: return "timeout";
    case SolveVerdict::Memout: return "memout";
  }
  return "unknown";
}

namespace {

void validate_config(const GroundModel& m, const SearchConfig& cfg, bool total_order) {
  if (cfg.mode == SearchMode::Optimal && cfg.strategy != SearchStrategy::UniformCost)
    throw std::invalid_argument("optimal mode requires the uniform-cost strategy");
  if (cfg.max_network_size <= 0)
    throw std::invalid_argument("max_network_size must be positive");
  if (total_order && !is_totally_ordered(m))
    throw std::invalid_argument("total-order search on a model that is not totally ordered");
}

// Methods of a task in expansion order: declaration order for dfs/uniform
// cost, static rank (fewer subtasks first, ties by id) for greedy.
std::vector<MethodId> method_order(const GroundModel& m, TaskId task, SearchStrategy strategy) {
  std::vector<MethodId> ids = m.tasks[task].methods;
  std::sort(ids.begin(), ids.end());
  if (strategy == SearchStrategy::Greedy) {
    std::stable_sort(ids.begin(), ids.end(), [&](MethodId a, MethodId b) {
      return m.methods[a].network.size() < m.methods[b].network.size();
    });
  }
  return ids;
}

void append_bytes(std::string& key, const void* data, std::size_t n) {
  key.append(static_cast<const char*>(data), n);
}

void append_int(std::string& key, int v) { append_bytes(key, &v, sizeof v); }

std::string state_bytes(const State& s) {
  std::string key;
  key.reserve(s.facts.size() * sizeof(FactId) + 1);
  for (FactId f : s.facts) append_int(key, f);
  return key;
}

struct Decision {
  enum class Kind { Root, Apply, Decompose };
  Kind kind = Kind::Root;
  int wid = -1;
  ActionId action = -1;
  MethodId method = -1;
  std::vector<int> child_wids;
};

// Rebuilds plan and witness from the decision chain of a solved node.
// Leaf ids are plan positions; abstract node ids continue from |plan| in
// breadth-first order over the decomposition tree.
struct Replay {
  std::vector<TaskRef> wid_task;
  std::vector<int> root_wids;

  struct WidInfo {
    std::optional<MethodId> method;
    std::vector<int> children;
    int plan_pos = -1;
  };

  std::pair<Plan, DecompositionWitness> extract(const GroundModel& m,
                                                const std::vector<Decision>& chain) const {
    Plan plan;
    std::map<int, WidInfo> info;
    for (const Decision& d : chain) {
      if (d.kind == Decision::Kind::Apply) {
        info[d.wid].plan_pos = static_cast<int>(plan.steps.size());
        plan.steps.push_back(d.action);
      } else if (d.kind == Decision::Kind::Decompose) {
        info[d.wid].method = d.method;
        info[d.wid].children = d.child_wids;
      }
    }

    const int n = static_cast<int>(plan.steps.size());
    std::map<int, int> final_id;
    int next_abstract = n;
    std::vector<int> bfs;
    auto assign = [&](int wid) {
      if (wid_task[wid].is_primitive()) {
        const auto& i = info.at(wid);
        if (i.plan_pos < 0) throw std::logic_error("primitive witness node was never applied");
        final_id[wid] = i.plan_pos;
      } else {
        final_id[wid] = next_abstract++;
        bfs.push_back(wid);
      }
    };
    for (int wid : root_wids) assign(wid);
    for (std::size_t at = 0; at < bfs.size(); ++at) {
      const auto& i = info.at(bfs[at]);
      if (!i.method) throw std::logic_error("abstract witness node was never decomposed");
      for (int c : i.children) assign(c);
    }

    DecompositionWitness w;
    for (int wid : root_wids) w.roots.push_back(final_id.at(wid));
    for (const auto& [wid, fid] : final_id) {
      DecompositionWitness::Node node;
      node.task = wid_task[wid];
      auto it = info.find(wid);
      if (!wid_task[wid].is_primitive()) {
        node.method = it->second.method;
        for (int c : it->second.children) node.children.push_back(final_id.at(c));
      }
      w.nodes.emplace_back(fid, std::move(node));
    }
    std::sort(w.nodes.begin(), w.nodes.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    (void)m;
    return {std::move(plan), std::move(w)};
  }
};

class DeadlineGuard {
 public:
  explicit DeadlineGuard(double seconds)
      : enabled_(seconds > 0),
        deadline_(std::chrono::steady_clock::now() +
                  std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                      std::chrono::duration<double>(seconds > 0 ? seconds : 0))) {}

  bool expired() {
    if (!enabled_) return false;
    if (++calls_ % 256 != 0) return false;
    return std::chrono::steady_clock::now() >= deadline_;
  }

 private:
  bool enabled_;
  std::chrono::steady_clock::time_point deadline_;
  std::uint64_t calls_ = 0;
};

template <typename Node>
class Frontier {
 public:
  Frontier(SearchStrategy strategy) : strategy_(strategy) {}

  void push(const std::deque<Node>& arena, int idx) {
    if (strategy_ == SearchStrategy::UniformCost)
      heap_.push({arena[idx].g, idx});
    else
      stack_.push_back(idx);
  }

  bool empty() const {
    return strategy_ == SearchStrategy::UniformCost ? heap_.empty() : stack_.empty();
  }

  std::size_t size() const {
    return strategy_ == SearchStrategy::UniformCost ? heap_.size() : stack_.size();
  }

  int pop() {
    if (strategy_ == SearchStrategy::UniformCost) {
      int idx = heap_.top().second;
      heap_.pop();
      return idx;
    }
    int idx = stack_.back();
    stack_.pop_back();
    return idx;
  }

 private:
  SearchStrategy strategy_;
  // (g, insertion index): ties broken towards the earliest-created node.
  std::priority_queue<std::pair<long long, int>, std::vector<std::pair<long long, int>>,
                      std::greater<>>
      heap_;
  std::vector<int> stack_;
};

// --------------------------------------------------------------------------
// Totally ordered progression: the remaining network is a sequence, shared
// between nodes as a cons list.

struct SeqCell {
  int wid;
  TaskRef task;
  std::shared_ptr<const SeqCell> next;
};
using SeqPtr = std::shared_ptr<const SeqCell>;

struct TONode {
  State state;
  SeqPtr remaining;
  long long g = 0;
  int parent = -1;
  Decision decision;
};

std::string to_key(const State& s, const SeqPtr& seq) {
  std::string key = state_bytes(s);
  key.push_back('|');
  for (const SeqCell* c = seq.get(); c; c = c->next.get()) {
    append_int(key, c->task.is_primitive() ? c->task.index : ~c->task.index);
  }
  return key;
}

std::size_t seq_length(const SeqPtr& seq) {
  std::size_t n = 0;
  for (const SeqCell* c = seq.get(); c; c = c->next.get()) n++;
  return n;
}

// --------------------------------------------------------------------------
// General progression: explicit small networks keyed by witness id.

struct OpenNetwork {
  struct N {
    int wid;
    TaskRef task;
  };
  std::vector<N> nodes;                      // ascending wid
  std::vector<std::pair<int, int>> edges;    // (before wid, after wid)

  bool has_pred(int wid) const {
    for (const auto& [b, a] : edges)
      if (a == wid) return true;
    return false;
  }
};

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h;
}

// Canonical encoding up to node renaming: refine node signatures from the
// neighbourhood, order nodes by (signature, wid), then emit labels and edges
// under that order. Equal keys imply isomorphic networks; the converse can
// fail, which only costs duplicate work.
std::string general_key(const State& s, const OpenNetwork& net) {
  const std::size_t n = net.nodes.size();
  std::vector<std::uint64_t> sig(n), next(n);
  std::map<int, std::size_t> pos;
  for (std::size_t i = 0; i < n; ++i) pos[net.nodes[i].wid] = i;
  for (std::size_t i = 0; i < n; ++i) {
    const TaskRef& t = net.nodes[i].task;
    sig[i] = mix(t.is_primitive() ? 0x51ed : 0xab5e, static_cast<std::uint64_t>(t.index));
  }
  for (std::size_t round = 0; round < 3; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::uint64_t> preds, succs;
      for (const auto& [b, a] : net.edges) {
        if (pos.at(a) == i) preds.push_back(sig[pos.at(b)]);
        if (pos.at(b) == i) succs.push_back(sig[pos.at(a)]);
      }
      std::sort(preds.begin(), preds.end());
      std::sort(succs.begin(), succs.end());
      std::uint64_t h = mix(sig[i], 0x1);
      for (auto v : preds) h = mix(h, v);
      h = mix(h, 0x2);
      for (auto v : succs) h = mix(h, v);
      next[i] = h;
    }
    sig.swap(next);
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (sig[a] != sig[b]) return sig[a] < sig[b];
    return net.nodes[a].wid < net.nodes[b].wid;
  });
  std::vector<int> canon(n);
  for (std::size_t rank = 0; rank < n; ++rank) canon[order[rank]] = static_cast<int>(rank);

  std::string key = state_bytes(s);
  key.push_back('|');
  for (std::size_t rank = 0; rank < n; ++rank) {
    const TaskRef& t = net.nodes[order[rank]].task;
    append_int(key, t.is_primitive() ? t.index : ~t.index);
  }
  std::vector<std::pair<int, int>> edges;
  for (const auto& [b, a] : net.edges)
    edges.emplace_back(canon[pos.at(b)], canon[pos.at(a)]);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  key.push_back('|');
  for (const auto& [b, a] : edges) {
    append_int(key, b);
    append_int(key, a);
  }
  return key;
}

struct GeneralNode {
  State state;
  OpenNetwork net;
  long long g = 0;
  int parent = -1;
  Decision decision;
};

template <typename Node>
std::vector<Decision> decision_chain(const std::deque<Node>& arena, int idx) {
  std::vector<Decision> chain;
  for (int at = idx; at >= 0; at = arena[at].parent) chain.push_back(arena[at].decision);
  std::reverse(chain.begin(), chain.end());
  return chain;
}

bool goal_satisfied(const GroundModel& m, const State& s) {
  return s.contains_all(m.goal);
}

}  // namespace

Outcome solve_total_order(const GroundModel& m, const SearchConfig& cfg) {
  validate_config(m, cfg, true);
  Outcome out;
  Replay replay;
  DeadlineGuard deadline(cfg.time_limit_seconds);

  // Witness ids 0..k-1 instantiate the initial network in declaration order;
  // the remaining sequence follows its unique total order.
  std::map<NodeId, int> wid_of_node;
  for (const auto& node : m.initial_network.nodes) {
    wid_of_node[node.id] = static_cast<int>(replay.wid_task.size());
    replay.root_wids.push_back(static_cast<int>(replay.wid_task.size()));
    replay.wid_task.push_back(node.task);
  }
  SeqPtr initial;
  {
    std::vector<NodeId> order = m.initial_network.total_order();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      int wid = wid_of_node.at(*it);
      initial = std::make_shared<SeqCell>(SeqCell{wid, replay.wid_task[wid], initial});
    }
  }

  std::deque<TONode> arena;
  arena.push_back({m.init, initial, 0, -1, {}});
  Frontier<TONode> frontier(cfg.strategy);
  frontier.push(arena, 0);
  // Uniform cost closes keys at pop time (a later, cheaper route must win);
  // depth-first closes at generation time.
  const bool close_at_pop = cfg.strategy == SearchStrategy::UniformCost;
  std::unordered_set<std::string> seen;
  if (cfg.duplicate_detection && !close_at_pop) seen.insert(to_key(m.init, initial));
  std::uint64_t approx_bytes = 0;
  bool bound_hit = false;

  // Sorted method expansion order is computed once per task.
  std::vector<std::vector<MethodId>> order_cache(m.tasks.size());
  std::vector<bool> order_ready(m.tasks.size(), false);
  auto methods_of = [&](TaskId t) -> const std::vector<MethodId>& {
    if (!order_ready[t]) {
      order_cache[t] = method_order(m, t, cfg.strategy);
      order_ready[t] = true;
    }
    return order_cache[t];
  };

  while (!frontier.empty()) {
    if (deadline.expired()) {
      out.verdict = SolveVerdict::Timeout;
      return out;
    }
    out.stats.peak_frontier = std::max(out.stats.peak_frontier,
                                       static_cast<std::uint64_t>(frontier.size()));
    int idx = frontier.pop();
    TONode node = arena[idx];
    if (cfg.duplicate_detection && close_at_pop &&
        !seen.insert(to_key(node.state, node.remaining)).second) {
      out.stats.duplicates++;
      continue;
    }
    out.stats.expanded++;

    if (!node.remaining) {
      if (goal_satisfied(m, node.state)) {
        auto [plan, witness] = replay.extract(m, decision_chain(arena, idx));
        out.verdict = SolveVerdict::Solved;
        out.cost = node.g;
        out.plan = std::move(plan);
        out.witness = std::move(witness);
        return out;
      }
      continue;
    }

    const SeqCell& head = *node.remaining;
    std::vector<TONode> children;
    if (head.task.is_primitive()) {
      const GroundAction& a = m.actions[head.task.index];
      if (is_applicable(node.state, a)) {
        TONode child;
        child.state = apply_action(node.state, a);
        child.remaining = head.next;
        child.g = node.g + a.cost;
        child.parent = idx;
        child.decision = {Decision::Kind::Apply, head.wid, a.id, -1, {}};
        children.push_back(std::move(child));
      }
    } else {
      std::size_t rest_len = seq_length(head.next);
      for (MethodId mid : methods_of(head.task.index)) {
        const Method& method = m.methods[mid];
        if (!node.state.contains_all(method.pre)) continue;
        if (rest_len + method.network.size() >
            static_cast<std::size_t>(cfg.max_network_size)) {
          bound_hit = true;
          continue;
        }
        TONode child;
        child.state = node.state;
        child.g = node.g;
        child.parent = idx;
        std::vector<int> child_wids;
        std::map<NodeId, int> local_wid;
        for (const auto& sub : method.network.nodes) {
          int wid = static_cast<int>(replay.wid_task.size());
          replay.wid_task.push_back(sub.task);
          local_wid[sub.id] = wid;
          child_wids.push_back(wid);
        }
        SeqPtr rest = head.next;
        std::vector<NodeId> order = method.network.total_order();
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
          int wid = local_wid.at(*it);
          rest = std::make_shared<SeqCell>(SeqCell{wid, replay.wid_task[wid], rest});
        }
        child.remaining = rest;
        child.decision = {Decision::Kind::Decompose, head.wid, -1, mid, std::move(child_wids)};
        children.push_back(std::move(child));
      }
      // Depth-first exploration expands the first listed method first.
      if (cfg.strategy != SearchStrategy::UniformCost)
        std::reverse(children.begin(), children.end());
    }

    for (auto& child : children) {
      if (cfg.duplicate_detection) {
        std::string key = to_key(child.state, child.remaining);
        bool dup = close_at_pop ? seen.contains(key) : !seen.insert(std::move(key)).second;
        if (dup) {
          out.stats.duplicates++;
          continue;
        }
      }
      out.stats.generated++;
      approx_bytes += 64 + child.state.facts.size() * sizeof(FactId) + 32;
      if (cfg.memory_limit_bytes && approx_bytes > cfg.memory_limit_bytes) {
        out.verdict = SolveVerdict::Memout;
        return out;
      }
      arena.push_back(std::move(child));
      frontier.push(arena, static_cast<int>(arena.size()) - 1);
    }
  }

  out.verdict =
      bound_hit ? SolveVerdict::BoundExhausted : SolveVerdict::ProvedUnsolvableWithinBound;
  return out;
}

Outcome solve_general(const GroundModel& m, const SearchConfig& cfg) {
  validate_config(m, cfg, false);
  Outcome out;
  Replay replay;
  DeadlineGuard deadline(cfg.time_limit_seconds);

  OpenNetwork initial;
  {
    std::map<NodeId, int> wid_of_node;
    for (const auto& node : m.initial_network.nodes) {
      int wid = static_cast<int>(replay.wid_task.size());
      wid_of_node[node.id] = wid;
      replay.root_wids.push_back(wid);
      replay.wid_task.push_back(node.task);
      initial.nodes.push_back({wid, node.task});
    }
    for (const auto& [b, a] : m.initial_network.ordering)
      initial.edges.emplace_back(wid_of_node.at(b), wid_of_node.at(a));
  }

  std::deque<GeneralNode> arena;
  arena.push_back({m.init, initial, 0, -1, {}});
  Frontier<GeneralNode> frontier(cfg.strategy);
  frontier.push(arena, 0);
  const bool close_at_pop = cfg.strategy == SearchStrategy::UniformCost;
  std::unordered_set<std::string> seen;
  if (cfg.duplicate_detection && !close_at_pop) seen.insert(general_key(m.init, initial));
  std::uint64_t approx_bytes = 0;
  bool bound_hit = false;

  std::vector<std::vector<MethodId>> order_cache(m.tasks.size());
  std::vector<bool> order_ready(m.tasks.size(), false);
  auto methods_of = [&](TaskId t) -> const std::vector<MethodId>& {
    if (!order_ready[t]) {
      order_cache[t] = method_order(m, t, cfg.strategy);
      order_ready[t] = true;
    }
    return order_cache[t];
  };

  while (!frontier.empty()) {
    if (deadline.expired()) {
      out.verdict = SolveVerdict::Timeout;
      return out;
    }
    out.stats.peak_frontier = std::max(out.stats.peak_frontier,
                                       static_cast<std::uint64_t>(frontier.size()));
    int idx = frontier.pop();
    GeneralNode node = arena[idx];
    if (cfg.duplicate_detection && close_at_pop &&
        !seen.insert(general_key(node.state, node.net)).second) {
      out.stats.duplicates++;
      continue;
    }
    out.stats.expanded++;

    if (node.net.nodes.empty()) {
      if (goal_satisfied(m, node.state)) {
        auto [plan, witness] = replay.extract(m, decision_chain(arena, idx));
        out.verdict = SolveVerdict::Solved;
        out.cost = node.g;
        out.plan = std::move(plan);
        out.witness = std::move(witness);
        return out;
      }
      continue;
    }

    std::vector<GeneralNode> children;
    for (const auto& n : node.net.nodes) {
      if (node.net.has_pred(n.wid)) continue;
      if (n.task.is_primitive()) {
        const GroundAction& a = m.actions[n.task.index];
        if (!is_applicable(node.state, a)) continue;
        GeneralNode child;
        child.state = apply_action(node.state, a);
        child.g = node.g + a.cost;
        child.parent = idx;
        for (const auto& keep : node.net.nodes)
          if (keep.wid != n.wid) child.net.nodes.push_back(keep);
        for (const auto& [b, after] : node.net.edges)
          if (b != n.wid && after != n.wid) child.net.edges.emplace_back(b, after);
        child.decision = {Decision::Kind::Apply, n.wid, a.id, -1, {}};
        children.push_back(std::move(child));
      } else {
        for (MethodId mid : methods_of(n.task.index)) {
          const Method& method = m.methods[mid];
          if (!node.state.contains_all(method.pre)) continue;
          if (node.net.nodes.size() - 1 + method.network.size() >
              static_cast<std::size_t>(cfg.max_network_size)) {
            bound_hit = true;
            continue;
          }
          GeneralNode child;
          child.state = node.state;
          child.g = node.g;
          child.parent = idx;
          std::vector<int> child_wids;
          std::map<NodeId, int> local_wid;
          for (const auto& sub : method.network.nodes) {
            int wid = static_cast<int>(replay.wid_task.size());
            replay.wid_task.push_back(sub.task);
            local_wid[sub.id] = wid;
            child_wids.push_back(wid);
          }
          for (const auto& keep : node.net.nodes)
            if (keep.wid != n.wid) child.net.nodes.push_back(keep);
          for (int wid : child_wids)
            child.net.nodes.push_back({wid, replay.wid_task[wid]});
          for (const auto& [b, after] : node.net.edges) {
            if (b == n.wid && after == n.wid) continue;
            if (b == n.wid) {
              for (int c : child_wids) child.net.edges.emplace_back(c, after);
            } else if (after == n.wid) {
              for (int c : child_wids) child.net.edges.emplace_back(b, c);
            } else {
              child.net.edges.emplace_back(b, after);
            }
          }
          for (const auto& [b, after] : method.network.ordering)
            child.net.edges.emplace_back(local_wid.at(b), local_wid.at(after));
          child.decision = {Decision::Kind::Decompose, n.wid, -1, mid, std::move(child_wids)};
          children.push_back(std::move(child));
        }
      }
    }
    if (cfg.strategy != SearchStrategy::UniformCost)
      std::reverse(children.begin(), children.end());

    for (auto& child : children) {
      if (cfg.duplicate_detection) {
        std::string key = general_key(child.state, child.net);
        bool dup = close_at_pop ? seen.contains(key) : !seen.insert(std::move(key)).second;
        if (dup) {
          out.stats.duplicates++;
          continue;
        }
      }
      out.stats.generated++;
      approx_bytes += 64 + child.state.facts.size() * sizeof(FactId) +
                      child.net.nodes.size() * 12 + child.net.edges.size() * 8;
      if (cfg.memory_limit_bytes && approx_bytes > cfg.memory_limit_bytes) {
        out.verdict = SolveVerdict::Memout;
        return out;
      }
      arena.push_back(std::move(child));
      frontier.push(arena, static_cast<int>(arena.size()) - 1);
    }
  }

  out.verdict =
      bound_hit ? SolveVerdict::BoundExhausted : SolveVerdict::ProvedUnsolvableWithinBound;
  return out;
}

Outcome solve(const GroundModel& m, const SearchConfig& cfg) {
  return cfg.order_class == OrderClass::TotalOrder ? solve_total_order(m, cfg)
                                                   : solve_general(m, cfg);
}

}  // namespace htnkit
