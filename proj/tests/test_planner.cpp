#include "doctest.h"
#include "htnkit/grounder.hpp"
#include "htnkit/parser.hpp"
#include "htnkit/planner.hpp"
#include "htnkit/verifier.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace htnkit;

namespace {

GroundModel logistics_model() {
  LiftedDomain d = parse_domain(read_file(suite_path("logistics-mini/domain.hddl")));
  LiftedProblem p = parse_problem(read_file(suite_path("logistics-mini/p01.hddl")), d);
  return ground(d, p).model;
}

std::vector<std::string> plan_names(const GroundModel& m, const Plan& plan) {
  std::vector<std::string> out;
  for (ActionId a : plan.steps) out.push_back(m.actions[a].name);
  return out;
}

}  // namespace

TEST_CASE("logistics-mini optimal plan and reference witness") {
  GroundModel m = logistics_model();
  SearchConfig cfg = SearchConfig::for_mode(SearchMode::Optimal, OrderClass::TotalOrder);
  Outcome out = solve_total_order(m, cfg);
  REQUIRE(out.solved());
  CHECK(out.cost == 4);
  CHECK(plan_names(m, *out.plan) ==
        std::vector<std::string>{"drive", "load", "drive", "unload"});

  Verdict v = verify(m, *out.plan, *out.witness);
  CHECK(v.accepted);

  // The emitted plan+witness file matches the bundled reference bytes.
  std::string printed = print_plan_file(m, *out.plan, *out.witness);
  CHECK(printed == read_file(suite_path("logistics-mini/p01.plan")));
}

TEST_CASE("empty method yields an empty plan with a one-node witness") {
  LiftedDomain d = parse_domain(read_file(suite_path("logistics-mini/domain.hddl")));
  LiftedProblem p = parse_problem(
      "(define (problem stay) (:domain logistics-mini)\n"
      "  (:objects t1 - truck l1 - location)\n"
      "  (:htn :ordered-subtasks (get-to t1 l1))\n"
      "  (:init (at t1 l1)))\n",
      d);
  GroundModel m = ground(d, p).model;
  Outcome out = solve_total_order(m, SearchConfig::for_mode(SearchMode::Satisficing,
                                                            OrderClass::TotalOrder));
  REQUIRE(out.solved());
  CHECK(out.plan->steps.empty());
  CHECK(out.witness->roots.size() == 1);
  const auto* root = out.witness->find(out.witness->roots[0]);
  REQUIRE(root != nullptr);
  CHECK(root->children.empty());
  CHECK(m.methods[*root->method].name == "m-noop");
  CHECK(verify(m, *out.plan, *out.witness).accepted);
}

TEST_CASE("unreachable method precondition is proved unsolvable") {
  LiftedDomain d = parse_domain(
      "(define (domain d)\n"
      "  (:predicates (never))\n"
      "  (:task t0 :parameters ())\n"
      "  (:action a :parameters ())\n"
      "  (:method m0 :parameters () :task (t0) :precondition (never)"
      " :ordered-subtasks (a)))\n");
  LiftedProblem p = parse_problem(
      "(define (problem q) (:domain d) (:htn :ordered-subtasks (t0)) (:init))\n", d);
  GroundModel m = ground(d, p).model;
  Outcome out = solve_total_order(m, SearchConfig::for_mode(SearchMode::Satisficing,
                                                            OrderClass::TotalOrder));
  CHECK(out.verdict == SolveVerdict::ProvedUnsolvableWithinBound);
}

TEST_CASE("general solver handles unordered deliveries and matches total order") {
  LiftedDomain d = parse_domain(read_file(suite_path("logistics-mini/domain.hddl")));
  LiftedProblem p = parse_problem(
      "(define (problem two) (:domain logistics-mini)\n"
      "  (:objects t1 t2 - truck p1 p2 - package l1 l2 - location)\n"
      "  (:htn :subtasks (and (d1 (deliver p1 l2)) (d2 (deliver p2 l1))))\n"
      "  (:init (at t1 l1) (at t2 l2) (pat p1 l1) (pat p2 l2)\n"
      "         (road l1 l2) (road l2 l1)))\n",
      d);
  GroundModel m = ground(d, p).model;
  CHECK(!is_totally_ordered(m));
  Outcome out =
      solve_general(m, SearchConfig::for_mode(SearchMode::Satisficing, OrderClass::General));
  REQUIRE(out.solved());
  CHECK(verify(m, *out.plan, *out.witness).accepted);

  // On a totally ordered model both solvers agree on the optimal cost.
  GroundModel mini = logistics_model();
  Outcome to = solve_total_order(
      mini, SearchConfig::for_mode(SearchMode::Optimal, OrderClass::TotalOrder));
  Outcome gen =
      solve_general(mini, SearchConfig::for_mode(SearchMode::Optimal, OrderClass::General));
  REQUIRE(to.solved());
  REQUIRE(gen.solved());
  CHECK(to.cost == 4);
  CHECK(gen.cost == 4);
  CHECK(verify(mini, *gen.plan, *gen.witness).accepted);
}

TEST_CASE("empty initial network solves immediately") {
  GroundModel m;
  m.facts = {{0, "f", {}}};
  Outcome out =
      solve_general(m, SearchConfig::for_mode(SearchMode::Satisficing, OrderClass::General));
  REQUIRE(out.solved());
  CHECK(out.plan->steps.empty());
  CHECK(out.witness->roots.empty());
  CHECK(verify(m, *out.plan, *out.witness).accepted);
}

TEST_CASE("config validation") {
  GroundModel m = logistics_model();
  SearchConfig bad = SearchConfig::for_mode(SearchMode::Optimal, OrderClass::TotalOrder);
  bad.strategy = SearchStrategy::Dfs;
  CHECK_THROWS_AS(solve_total_order(m, bad), std::invalid_argument);

  LiftedDomain d = parse_domain(read_file(suite_path("logistics-mini/domain.hddl")));
  LiftedProblem p = parse_problem(
      "(define (problem two) (:domain logistics-mini)\n"
      "  (:objects t1 - truck p1 p2 - package l1 - location)\n"
      "  (:htn :subtasks (and (a (deliver p1 l1)) (b (deliver p2 l1))))\n"
      "  (:init (at t1 l1) (pat p1 l1) (pat p2 l1)))\n",
      d);
  GroundModel po = ground(d, p).model;
  CHECK_THROWS_AS(
      solve_total_order(po, SearchConfig::for_mode(SearchMode::Satisficing,
                                                   OrderClass::TotalOrder)),
      std::invalid_argument);
}

TEST_CASE("network size bound reports bound exhaustion") {
  // t0 only decomposes into ever larger networks; nothing is solvable.
  GroundModel m;
  m.tasks.push_back({0, "t0", {}, {0}});
  Method grow;
  grow.id = 0;
  grow.name = "grow";
  grow.task = 0;
  grow.network.add_node({TaskKind::Abstract, 0});
  grow.network.add_node({TaskKind::Abstract, 0});
  m.methods.push_back(grow);
  m.initial_network.add_node({TaskKind::Abstract, 0});

  SearchConfig cfg = SearchConfig::for_mode(SearchMode::Satisficing, OrderClass::TotalOrder);
  cfg.max_network_size = 4;
  Outcome out = solve_total_order(m, cfg);
  CHECK(out.verdict == SolveVerdict::BoundExhausted);

  Outcome gen = solve_general(m, [&] {
    SearchConfig c = SearchConfig::for_mode(SearchMode::Satisficing, OrderClass::General);
    c.max_network_size = 4;
    return c;
  }());
  CHECK(gen.verdict == SolveVerdict::BoundExhausted);
}

TEST_CASE("duplicate detection terminates self-recursive decomposition") {
  // t0 -> [t0] loops forever without duplicate detection.
  GroundModel m;
  m.tasks.push_back({0, "t0", {}, {0}});
  Method loop;
  loop.id = 0;
  loop.name = "loop";
  loop.task = 0;
  loop.network.add_node({TaskKind::Abstract, 0});
  m.methods.push_back(loop);
  m.initial_network.add_node({TaskKind::Abstract, 0});

  SearchConfig cfg = SearchConfig::for_mode(SearchMode::Satisficing, OrderClass::TotalOrder);
  Outcome out = solve_total_order(m, cfg);
  CHECK(out.verdict == SolveVerdict::ProvedUnsolvableWithinBound);

  cfg.duplicate_detection = false;
  cfg.time_limit_seconds = 0.2;
  Outcome spin = solve_total_order(m, cfg);
  CHECK(spin.verdict == SolveVerdict::Timeout);
}

TEST_CASE("memory limit reports memout") {
  GroundModel m = logistics_model();
  SearchConfig cfg = SearchConfig::for_mode(SearchMode::Optimal, OrderClass::TotalOrder);
  cfg.memory_limit_bytes = 256;  // absurdly small
  Outcome out = solve_total_order(m, cfg);
  CHECK(out.verdict == SolveVerdict::Memout);
}

TEST_CASE("identical configuration yields identical plans") {
  GroundModel m = logistics_model();
  for (SearchMode mode : {SearchMode::Satisficing, SearchMode::Optimal, SearchMode::Agile}) {
    SearchConfig cfg = SearchConfig::for_mode(mode, OrderClass::TotalOrder);
    Outcome a = solve_total_order(m, cfg);
    Outcome b = solve_total_order(m, cfg);
    REQUIRE(a.solved());
    REQUIRE(b.solved());
    CHECK(print_plan_file(m, *a.plan, *a.witness) == print_plan_file(m, *b.plan, *b.witness));
  }
}

TEST_CASE("solver verdicts match the exhaustive progression oracle") {
  std::mt19937_64 rng(99);
  oracle::ProgressionOptions popts;
  popts.max_plan_length = 6;
  popts.max_network_size = 8;

  int solvable = 0, unsolvable = 0;
  for (int round = 0; round < 100; ++round) {
    oracle::RandomModelOptions opts;
    opts.totally_ordered = (round % 2 == 0);
    GroundModel m = oracle::random_tiny_model(rng, opts);

    auto oracle_best = oracle::optimal_cost(m, popts);

    SearchConfig cfg = SearchConfig::for_mode(
        SearchMode::Optimal, opts.totally_ordered ? OrderClass::TotalOrder : OrderClass::General);
    cfg.max_network_size = 8;
    Outcome out = opts.totally_ordered && is_totally_ordered(m)
                      ? solve_total_order(m, cfg)
                      : solve_general(m, [&] {
                          SearchConfig c = cfg;
                          c.order_class = OrderClass::General;
                          return c;
                        }());

    bool planner_within_bound = out.solved() && out.cost <= 6;
    CHECK(planner_within_bound == oracle_best.has_value());
    if (planner_within_bound) {
      CHECK(out.cost == *oracle_best);
      CHECK(verify(m, *out.plan, *out.witness).accepted);
      solvable++;
    } else {
      unsolvable++;
    }
  }
  // The random suite must exercise both outcomes.
  CHECK(solvable > 10);
  CHECK(unsolvable > 10);
}

TEST_CASE("disabling duplicate detection never changes verdicts on acyclic models") {
  std::mt19937_64 rng(4242);
  for (int round = 0; round < 40; ++round) {
    oracle::RandomModelOptions opts;
    opts.allow_recursion = false;
    opts.totally_ordered = (round % 2 == 0);
    GroundModel m = oracle::random_tiny_model(rng, opts);

    SearchConfig cfg = SearchConfig::for_mode(SearchMode::Optimal, OrderClass::General);
    cfg.max_network_size = 8;
    Outcome with = solve_general(m, cfg);
    cfg.duplicate_detection = false;
    Outcome without = solve_general(m, cfg);
    CHECK(with.verdict == without.verdict);
    if (with.solved()) CHECK(with.cost == without.cost);
  }
}
