#include "htnkit/grounder.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <set>
#include <sstream>

namespace htnkit {

std::string GroundingStats::str() const {
  std::ostringstream os;
  os << "facts " << facts_before << " -> " << facts_after << "; actions " << actions_before
     << " -> " << actions_after << "; tasks " << tasks_before << " -> " << tasks_after
     << "; methods " << methods_before << " -> " << methods_after;
  return os.str();
}

GroundingBlowup::GroundingBlowup(long long count_, long long cap_)
    : std::runtime_error("grounding would create " + std::to_string(count_) +
                         " instances, cap is " + std::to_string(cap_)),
      count(count_),
      cap(cap_) {}

GroundingError::GroundingError(const std::string& message) : std::runtime_error(message) {}

namespace {

// Object universe per type, computed once from the problem objects.
struct ObjectTable {
  std::map<std::string, std::vector<std::string>> by_type;  // sorted object names
  std::map<std::string, std::string> type_of;

  const std::vector<std::string>& objects(const std::string& type) const {
    static const std::vector<std::string> empty;
    auto it = by_type.find(type);
    return it == by_type.end() ? empty : it->second;
  }
};

bool type_is_subtype(const LiftedDomain& d, const std::string& t, const std::string& ancestor) {
  if (ancestor == "object" || t == ancestor) return true;
  for (const auto& decl : d.types) {
    if (decl.name != t) continue;
    if (decl.parents.empty()) return false;
    for (const auto& p : decl.parents)
      if (type_is_subtype(d, p, ancestor)) return true;
  }
  return false;
}

ObjectTable make_object_table(const LiftedDomain& d, const LiftedProblem& p) {
  ObjectTable table;
  table.by_type["object"];
  for (const auto& t : d.types) table.by_type[t.name];
  for (const auto& o : p.objects) {
    table.type_of[o.name] = o.type;
    for (auto& [type, objs] : table.by_type)
      if (type_is_subtype(d, o.type, type)) objs.push_back(o.name);
  }
  for (auto& [type, objs] : table.by_type) std::sort(objs.begin(), objs.end());
  return table;
}

// Deterministic enumeration of all bindings for a typed parameter list,
// rightmost position varying fastest.
class Odometer {
 public:
  Odometer(const std::vector<TypedVar>& params, const ObjectTable& objects) {
    for (const auto& v : params) domains_.push_back(&objects.objects(v.type));
    indices_.assign(params.size(), 0);
    exhausted_ = std::any_of(domains_.begin(), domains_.end(),
                             [](const auto* d) { return d->empty(); });
  }

  long long count() const {
    long long n = 1;
    for (const auto* d : domains_) {
      n *= static_cast<long long>(d->size());
      if (n == 0) return 0;
    }
    return n;
  }

  bool exhausted() const { return exhausted_; }

  std::map<std::string, std::string> binding(const std::vector<TypedVar>& params) const {
    std::map<std::string, std::string> b;
    for (std::size_t i = 0; i < params.size(); ++i)
      b[params[i].name] = (*domains_[i])[indices_[i]];
    return b;
  }

  void next() {
    for (std::size_t i = indices_.size(); i-- > 0;) {
      if (++indices_[i] < domains_[i]->size()) return;
      indices_[i] = 0;
    }
    exhausted_ = true;
  }

 private:
  std::vector<const std::vector<std::string>*> domains_;
  std::vector<std::size_t> indices_;
  bool exhausted_ = false;
};

std::string ground_key(const std::string& name, const std::vector<std::string>& args) {
  std::string key = name;
  for (const auto& a : args) {
    key += ' ';
    key += a;
  }
  return key;
}

std::vector<std::string> substitute(const std::vector<Term>& terms,
                                    const std::map<std::string, std::string>& binding,
                                    const ObjectTable& objects) {
  std::vector<std::string> out;
  out.reserve(terms.size());
  for (const auto& t : terms) {
    if (t.is_variable()) {
      auto it = binding.find(t.text);
      if (it == binding.end()) throw GroundingError("unbound variable " + t.text);
      out.push_back(it->second);
    } else {
      if (!objects.type_of.count(t.text))
        throw GroundingError("constant " + t.text + " names no declared object");
      out.push_back(t.text);
    }
  }
  return out;
}

// Rewrites negative preconditions into complement predicates so states stay
// plain positive sets: every predicate used under (not ...) in a
// precondition or goal gets a mirror not-<p>, maintained by all effects.
struct NegativeCompilation {
  LiftedDomain domain;
  LiftedProblem problem;
};

NegativeCompilation compile_negatives(const LiftedDomain& d, const LiftedProblem& p) {
  NegativeCompilation out{d, p};
  std::vector<std::string> negated;  // discovery order
  auto note = [&](const Conjunction& c) {
    for (const auto& lit : c)
      if (lit.negated &&
          std::find(negated.begin(), negated.end(), lit.atom.predicate) == negated.end())
        negated.push_back(lit.atom.predicate);
  };
  for (const auto& a : d.actions) note(a.precondition);
  for (const auto& m : d.methods) note(m.precondition);
  note(p.goal);
  if (negated.empty()) return out;

  auto mirror = [](const std::string& name) { return "not-" + name; };
  for (const auto& name : negated) {
    if (out.domain.find_predicate(mirror(name)))
      throw GroundingError("predicate name " + mirror(name) +
                           " collides with the complement of " + name);
    Predicate pred = *out.domain.find_predicate(name);
    pred.name = mirror(name);
    out.domain.predicates.push_back(std::move(pred));
  }
  auto is_negated = [&](const std::string& name) {
    return std::find(negated.begin(), negated.end(), name) != negated.end();
  };
  auto rewrite = [&](Conjunction& c) {
    for (auto& lit : c) {
      if (lit.negated && is_negated(lit.atom.predicate)) {
        lit.negated = false;
        lit.atom.predicate = mirror(lit.atom.predicate);
      }
    }
  };
  for (auto& a : out.domain.actions) rewrite(a.precondition);
  for (auto& m : out.domain.methods) rewrite(m.precondition);
  rewrite(out.problem.goal);

  for (auto& a : out.domain.actions) {
    Conjunction extra;
    for (const auto& lit : a.effect) {
      if (!is_negated(lit.atom.predicate)) continue;
      Literal twin = lit;
      twin.negated = !lit.negated;
      twin.atom.predicate = mirror(lit.atom.predicate);
      extra.push_back(std::move(twin));
    }
    a.effect.insert(a.effect.end(), extra.begin(), extra.end());
  }
  return out;
}

struct InstantiationContext {
  const LiftedDomain& domain;
  const LiftedProblem& problem;
  ObjectTable objects;
  std::map<std::string, FactId> fact_ids;
  std::map<std::string, ActionId> action_ids;
  std::map<std::string, TaskId> task_ids;
};

// Looks up a ground atom; absent means the binding is not type-consistent.
std::optional<FactId> find_fact(const InstantiationContext& ctx, const std::string& name,
                                const std::vector<std::string>& args) {
  auto it = ctx.fact_ids.find(ground_key(name, args));
  if (it == ctx.fact_ids.end()) return std::nullopt;
  return it->second;
}

// pre/add/del for one action binding; nullopt when some atom cannot exist.
struct EffectSets {
  std::vector<FactId> pre, add, del;
};

std::optional<std::vector<FactId>> resolve_conjunction(const InstantiationContext& ctx,
                                                       const Conjunction& c, bool negated_side,
                                                       const std::map<std::string, std::string>& b) {
  std::vector<FactId> out;
  for (const auto& lit : c) {
    if (lit.negated != negated_side) continue;
    auto args = substitute(lit.atom.args, b, ctx.objects);
    auto f = find_fact(ctx, lit.atom.predicate, args);
    if (!f) return std::nullopt;
    out.push_back(*f);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

GroundResult ground(const LiftedDomain& input_domain, const LiftedProblem& input_problem,
                    long long cap) {
  auto start = std::chrono::steady_clock::now();
  NegativeCompilation compiled = compile_negatives(input_domain, input_problem);
  const LiftedDomain& d = compiled.domain;
  const LiftedProblem& p = compiled.problem;

  InstantiationContext ctx{d, p, make_object_table(d, p), {}, {}, {}};
  GroundResult result;
  GroundModel& m = result.model;

  // Blowup guard before materializing anything.
  long long total = 0;
  auto count_bindings = [&](const std::vector<TypedVar>& params) {
    return Odometer(params, ctx.objects).count();
  };
  for (const auto& pred : d.predicates) total += count_bindings(pred.params);
  for (const auto& a : d.actions) total += count_bindings(a.params);
  for (const auto& t : d.tasks) total += count_bindings(t.params);
  for (const auto& mm : d.methods) total += count_bindings(mm.params);
  if (total > cap) throw GroundingBlowup(total, cap);

  // Facts.
  for (const auto& pred : d.predicates) {
    for (Odometer odo(pred.params, ctx.objects); !odo.exhausted(); odo.next()) {
      auto binding = odo.binding(pred.params);
      std::vector<std::string> args;
      for (const auto& v : pred.params) args.push_back(binding.at(v.name));
      Fact f;
      f.id = static_cast<FactId>(m.facts.size());
      f.name = pred.name;
      f.args = args;
      ctx.fact_ids[ground_key(f.name, f.args)] = f.id;
      m.facts.push_back(std::move(f));
    }
  }

  // Actions.
  for (const auto& a : d.actions) {
    for (Odometer odo(a.params, ctx.objects); !odo.exhausted(); odo.next()) {
      auto binding = odo.binding(a.params);
      auto pre = resolve_conjunction(ctx, a.precondition, false, binding);
      auto add = resolve_conjunction(ctx, a.effect, false, binding);
      auto del = resolve_conjunction(ctx, a.effect, true, binding);
      if (!pre || !add || !del) continue;  // not type-consistent
      GroundAction ga;
      ga.id = static_cast<ActionId>(m.actions.size());
      ga.name = a.name;
      for (const auto& v : a.params) ga.args.push_back(binding.at(v.name));
      ga.pre = std::move(*pre);
      ga.add = std::move(*add);
      // Add wins over delete on the same fact.
      for (FactId f : *del)
        if (!std::binary_search(ga.add.begin(), ga.add.end(), f)) ga.del.push_back(f);
      ga.cost = a.cost;
      ctx.action_ids[ground_key(ga.name, ga.args)] = ga.id;
      m.actions.push_back(std::move(ga));
    }
  }

  // Abstract tasks.
  for (const auto& t : d.tasks) {
    for (Odometer odo(t.params, ctx.objects); !odo.exhausted(); odo.next()) {
      auto binding = odo.binding(t.params);
      AbstractTask at;
      at.id = static_cast<TaskId>(m.tasks.size());
      at.name = t.name;
      for (const auto& v : t.params) at.args.push_back(binding.at(v.name));
      ctx.task_ids[ground_key(at.name, at.args)] = at.id;
      m.tasks.push_back(std::move(at));
    }
  }

  // Methods.
  auto resolve_ref = [&](const std::string& name,
                         const std::vector<std::string>& args) -> std::optional<TaskRef> {
    if (auto it = ctx.action_ids.find(ground_key(name, args)); it != ctx.action_ids.end())
      return TaskRef{TaskKind::Primitive, it->second};
    if (auto it = ctx.task_ids.find(ground_key(name, args)); it != ctx.task_ids.end())
      return TaskRef{TaskKind::Abstract, it->second};
    return std::nullopt;
  };

  auto build_network = [&](const SubtaskNetwork& net,
                           const std::map<std::string, std::string>& binding)
      -> std::optional<TaskNetwork> {
    TaskNetwork tn;
    std::map<std::string, NodeId> by_label;
    for (const auto& st : net.subtasks) {
      auto args = substitute(st.args, binding, ctx.objects);
      auto ref = resolve_ref(st.name, args);
      if (!ref) return std::nullopt;
      by_label[st.label] = tn.add_node(*ref);
    }
    if (net.totally_ordered_form) {
      for (std::size_t i = 0; i + 1 < net.subtasks.size(); ++i)
        tn.add_edge(by_label.at(net.subtasks[i].label), by_label.at(net.subtasks[i + 1].label));
    } else {
      for (const auto& [b, a] : net.ordering) tn.add_edge(by_label.at(b), by_label.at(a));
    }
    return tn;
  };

  for (const auto& lm : d.methods) {
    for (Odometer odo(lm.params, ctx.objects); !odo.exhausted(); odo.next()) {
      auto binding = odo.binding(lm.params);
      auto task_args = substitute(lm.task_args, binding, ctx.objects);
      auto task_it = ctx.task_ids.find(ground_key(lm.task, task_args));
      if (task_it == ctx.task_ids.end()) continue;
      auto pre = resolve_conjunction(ctx, lm.precondition, false, binding);
      if (!pre) continue;
      auto network = build_network(lm.network, binding);
      if (!network) continue;
      Method gm;
      gm.id = static_cast<MethodId>(m.methods.size());
      gm.name = lm.name;
      for (const auto& v : lm.params) gm.args.push_back(binding.at(v.name));
      gm.task = task_it->second;
      gm.network = std::move(*network);
      gm.pre = std::move(*pre);
      m.tasks[gm.task].methods.push_back(gm.id);
      m.methods.push_back(std::move(gm));
    }
  }

  // Initial state, initial network, goal.
  for (const auto& atom : p.init) {
    std::vector<std::string> args;
    for (const auto& t : atom.args) args.push_back(t.text);
    auto f = find_fact(ctx, atom.predicate, args);
    if (!f) throw GroundingError("init atom " + ground_key(atom.predicate, args) +
                                 " is not type-consistent");
    m.init.facts.push_back(*f);
  }
  // Complements of negatively used predicates that are not initially true.
  {
    std::set<FactId> init_set(m.init.facts.begin(), m.init.facts.end());
    for (const Fact& f : m.facts) {
      if (f.name.rfind("not-", 0) != 0) continue;
      std::string base = f.name.substr(4);
      auto pos = find_fact(ctx, base, f.args);
      if (pos && !init_set.count(*pos)) m.init.facts.push_back(f.id);
    }
  }
  m.init.normalize();

  {
    std::map<std::string, std::string> empty_binding;
    auto tn = build_network(p.initial_network, empty_binding);
    if (!tn) throw GroundingError("initial network references an unknown task instance");
    m.initial_network = std::move(*tn);
  }

  for (const auto& lit : p.goal) {
    std::vector<std::string> args;
    for (const auto& t : lit.atom.args) args.push_back(t.text);
    auto f = find_fact(ctx, lit.atom.predicate, args);
    if (!f) throw GroundingError("goal atom is not type-consistent");
    m.goal.push_back(*f);
  }
  std::sort(m.goal.begin(), m.goal.end());
  m.goal.erase(std::unique(m.goal.begin(), m.goal.end()), m.goal.end());

  result.stats.facts_before = static_cast<long long>(m.facts.size());
  result.stats.actions_before = static_cast<long long>(m.actions.size());
  result.stats.tasks_before = static_cast<long long>(m.tasks.size());
  result.stats.methods_before = static_cast<long long>(m.methods.size());

  m = reachability_prune(m);

  result.stats.facts_after = static_cast<long long>(m.facts.size());
  result.stats.actions_after = static_cast<long long>(m.actions.size());
  result.stats.tasks_after = static_cast<long long>(m.tasks.size());
  result.stats.methods_after = static_cast<long long>(m.methods.size());
  result.stats.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

GroundModel reachability_prune(const GroundModel& input) {
  std::vector<bool> action_alive(input.actions.size(), true);
  std::vector<bool> task_alive(input.tasks.size(), true);
  std::vector<bool> method_alive(input.methods.size(), true);

  std::set<ActionId> initial_actions;
  std::set<TaskId> initial_tasks;
  for (const auto& n : input.initial_network.nodes) {
    if (n.task.is_primitive())
      initial_actions.insert(n.task.index);
    else
      initial_tasks.insert(n.task.index);
  }

  bool changed = true;
  std::vector<bool> fact_reachable;
  while (changed) {
    changed = false;

    // (a) Delete-relaxed fact/action reachability from init.
    fact_reachable.assign(input.facts.size(), false);
    for (FactId f : input.init.facts) fact_reachable[f] = true;
    bool grew = true;
    std::vector<bool> action_fired(input.actions.size(), false);
    while (grew) {
      grew = false;
      for (const auto& a : input.actions) {
        if (!action_alive[a.id] || action_fired[a.id]) continue;
        bool ok = std::all_of(a.pre.begin(), a.pre.end(),
                              [&](FactId f) { return fact_reachable[f]; });
        if (!ok) continue;
        action_fired[a.id] = true;
        for (FactId f : a.add)
          if (!fact_reachable[f]) {
            fact_reachable[f] = true;
            grew = true;
          }
      }
    }
    for (const auto& a : input.actions) {
      if (action_alive[a.id] && !action_fired[a.id]) {
        action_alive[a.id] = false;
        changed = true;
      }
    }

    // (b) Methods whose precondition can never hold.
    for (const auto& mm : input.methods) {
      if (!method_alive[mm.id]) continue;
      bool ok = std::all_of(mm.pre.begin(), mm.pre.end(),
                            [&](FactId f) { return fact_reachable[f]; });
      if (!ok) {
        method_alive[mm.id] = false;
        changed = true;
      }
    }

    // (c) Bottom-up achievability: a method dies when some subtask can never
    // be carried out.
    std::vector<bool> task_achievable(input.tasks.size(), false);
    bool grew2 = true;
    while (grew2) {
      grew2 = false;
      for (const auto& mm : input.methods) {
        if (!method_alive[mm.id] || task_achievable[mm.task]) continue;
        bool ok = true;
        for (const auto& n : mm.network.nodes) {
          if (n.task.is_primitive() ? !action_alive[n.task.index]
                                    : !task_achievable[n.task.index]) {
            ok = false;
            break;
          }
        }
        if (ok) {
          task_achievable[mm.task] = true;
          grew2 = true;
        }
      }
    }
    for (const auto& mm : input.methods) {
      if (!method_alive[mm.id]) continue;
      for (const auto& n : mm.network.nodes) {
        bool dead = n.task.is_primitive() ? !action_alive[n.task.index]
                                          : !task_achievable[n.task.index];
        if (dead) {
          method_alive[mm.id] = false;
          changed = true;
          break;
        }
      }
    }

    // (d) Top-down reachability from the initial network.
    std::vector<bool> task_seen(input.tasks.size(), false);
    std::vector<bool> action_seen(input.actions.size(), false);
    std::vector<TaskId> queue;
    for (ActionId a : initial_actions) action_seen[a] = true;
    for (TaskId t : initial_tasks) {
      task_seen[t] = true;
      queue.push_back(t);
    }
    while (!queue.empty()) {
      TaskId t = queue.back();
      queue.pop_back();
      for (MethodId mid : input.tasks[t].methods) {
        if (!method_alive[mid]) continue;
        for (const auto& n : input.methods[mid].network.nodes) {
          if (n.task.is_primitive()) {
            action_seen[n.task.index] = true;
          } else if (!task_seen[n.task.index]) {
            task_seen[n.task.index] = true;
            queue.push_back(n.task.index);
          }
        }
      }
    }
    for (const auto& a : input.actions)
      if (action_alive[a.id] && !action_seen[a.id] && !initial_actions.count(a.id)) {
        action_alive[a.id] = false;
        changed = true;
      }
    for (const auto& t : input.tasks)
      if (task_alive[t.id] && !task_seen[t.id]) {
        task_alive[t.id] = false;
        changed = true;
      }
    for (const auto& mm : input.methods)
      if (method_alive[mm.id] && !task_alive[mm.task]) {
        method_alive[mm.id] = false;
        changed = true;
      }
  }

  // Entities referenced by the initial network can never be dropped; a dead
  // one makes the model trivially unsolvable instead.
  bool unsolvable = false;
  for (ActionId a : initial_actions) {
    if (!action_alive[a]) {
      action_alive[a] = true;
      unsolvable = true;
    }
  }
  for (TaskId t : initial_tasks) {
    if (!task_alive[t]) {
      task_alive[t] = true;
      unsolvable = true;
    }
  }
  for (const auto& t : input.tasks) {
    if (!task_alive[t.id]) continue;
    bool has_method = std::any_of(t.methods.begin(), t.methods.end(),
                                  [&](MethodId mid) { return method_alive[mid]; });
    if (!has_method && initial_tasks.count(t.id)) unsolvable = true;
  }
  for (FactId g : input.goal)
    if (!fact_reachable[g]) unsolvable = true;

  // Facts survive when still referenced (or in init/goal).
  std::vector<bool> fact_keep(input.facts.size(), false);
  for (FactId f : input.init.facts) fact_keep[f] = true;
  for (FactId f : input.goal) fact_keep[f] = true;
  for (const auto& a : input.actions) {
    if (!action_alive[a.id]) continue;
    for (FactId f : a.pre) fact_keep[f] = true;
    for (FactId f : a.add) fact_keep[f] = true;
    for (FactId f : a.del) fact_keep[f] = true;
  }
  for (const auto& mm : input.methods) {
    if (!method_alive[mm.id]) continue;
    for (FactId f : mm.pre) fact_keep[f] = true;
  }

  // Rebuild with dense ids, survivors in original order.
  GroundModel out;
  out.trivially_unsolvable = unsolvable || input.trivially_unsolvable;
  std::vector<FactId> fact_map(input.facts.size(), -1);
  for (const auto& f : input.facts) {
    if (!fact_keep[f.id]) continue;
    Fact nf = f;
    nf.id = static_cast<FactId>(out.facts.size());
    fact_map[f.id] = nf.id;
    out.facts.push_back(std::move(nf));
  }
  auto remap_facts = [&](const std::vector<FactId>& in) {
    std::vector<FactId> mapped;
    mapped.reserve(in.size());
    for (FactId f : in) mapped.push_back(fact_map[f]);
    std::sort(mapped.begin(), mapped.end());
    return mapped;
  };

  std::vector<ActionId> action_map(input.actions.size(), -1);
  for (const auto& a : input.actions) {
    if (!action_alive[a.id]) continue;
    GroundAction na = a;
    na.id = static_cast<ActionId>(out.actions.size());
    na.pre = remap_facts(a.pre);
    na.add = remap_facts(a.add);
    na.del = remap_facts(a.del);
    action_map[a.id] = na.id;
    out.actions.push_back(std::move(na));
  }

  std::vector<TaskId> task_map(input.tasks.size(), -1);
  for (const auto& t : input.tasks) {
    if (!task_alive[t.id]) continue;
    AbstractTask nt;
    nt.id = static_cast<TaskId>(out.tasks.size());
    nt.name = t.name;
    nt.args = t.args;
    task_map[t.id] = nt.id;
    out.tasks.push_back(std::move(nt));
  }

  auto remap_ref = [&](TaskRef r) {
    r.index = r.is_primitive() ? action_map[r.index] : task_map[r.index];
    return r;
  };
  auto remap_network = [&](const TaskNetwork& tn) {
    TaskNetwork nt = tn;
    for (auto& n : nt.nodes) n.task = remap_ref(n.task);
    return nt;
  };

  std::vector<MethodId> method_map(input.methods.size(), -1);
  for (const auto& mm : input.methods) {
    if (!method_alive[mm.id]) continue;
    Method nm;
    nm.id = static_cast<MethodId>(out.methods.size());
    nm.name = mm.name;
    nm.args = mm.args;
    nm.task = task_map[mm.task];
    nm.network = remap_network(mm.network);
    nm.pre = remap_facts(mm.pre);
    method_map[mm.id] = nm.id;
    out.tasks[nm.task].methods.push_back(nm.id);
    out.methods.push_back(std::move(nm));
  }

  out.init.facts = remap_facts(input.init.facts);
  out.goal = remap_facts(input.goal);
  out.initial_network = remap_network(input.initial_network);
  return out;
}

bool is_totally_ordered(const GroundModel& m) {
  if (!m.initial_network.is_totally_ordered()) return false;
  for (const auto& mm : m.methods)
    if (!mm.network.is_totally_ordered()) return false;
  return true;
}

std::string dump_model(const GroundModel& m) {
  std::ostringstream os;
  os << "facts " << m.facts.size() << "\n";
  for (const auto& f : m.facts) os << "  " << f.id << " " << m.fact_str(f.id) << "\n";
  os << "actions " << m.actions.size() << "\n";
  for (const auto& a : m.actions) {
    os << "  " << a.id << " " << m.task_ref_str({TaskKind::Primitive, a.id}) << " cost " << a.cost
       << " pre";
    for (FactId f : a.pre) os << " " << f;
    os << " add";
    for (FactId f : a.add) os << " " << f;
    os << " del";
    for (FactId f : a.del) os << " " << f;
    os << "\n";
  }
  os << "tasks " << m.tasks.size() << "\n";
  for (const auto& t : m.tasks) {
    os << "  " << t.id << " " << m.task_ref_str({TaskKind::Abstract, t.id}) << " methods";
    for (MethodId mid : t.methods) os << " " << mid;
    os << "\n";
  }
  os << "methods " << m.methods.size() << "\n";
  for (const auto& mm : m.methods) {
    os << "  " << mm.id << " " << mm.name << " task " << mm.task << " pre";
    for (FactId f : mm.pre) os << " " << f;
    os << " subtasks";
    for (const auto& n : mm.network.nodes)
      os << " " << (n.task.is_primitive() ? "a" : "t") << n.task.index;
    os << " ordering";
    for (const auto& [b, a] : mm.network.ordering) os << " " << b << "<" << a;
    os << "\n";
  }
  os << "init";
  for (FactId f : m.init.facts) os << " " << f;
  os << "\ngoal";
  for (FactId f : m.goal) os << " " << f;
  os << "\ninitial-network";
  for (const auto& n : m.initial_network.nodes)
    os << " " << (n.task.is_primitive() ? "a" : "t") << n.task.index;
  os << "\n";
  return os.str();
}

}  // namespace htnkit
