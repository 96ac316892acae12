#ifndef HTNKIT_TEST_ORACLES_HPP
#define HTNKIT_TEST_ORACLES_HPP

#include <optional>
#include <random>
#include <set>
#include <vector>

#include "htnkit/generators.hpp"
#include "htnkit/model.hpp"

// Independent brute-force oracles used by the test suites. Everything here
// is deliberately simple and separate from the library's search and
// verification code paths.

namespace htnkit::oracle {

struct ProgressionOptions {
  std::size_t max_plan_length = 6;
  std::size_t max_network_size = 64;
  bool method_preconditions = true;
};

// Every solution plan reachable by progression within the bounds, as a set
// of action-id sequences. Depth-first with on-path cycle elimination.
std::set<std::vector<ActionId>> progression_solutions(const GroundModel& m,
                                                      const ProgressionOptions& opts);

std::optional<long long> optimal_cost(const GroundModel& m, const ProgressionOptions& opts);

// All complete decomposition trees, capped. `exceeded` reports hitting any cap.
struct Tree {
  struct Node {
    TaskRef task;
    std::optional<MethodId> method;
    std::vector<int> children;  // indices into nodes
  };
  std::vector<Node> nodes;
  std::vector<int> roots;
};

struct TreeEnumeration {
  std::vector<Tree> trees;
  bool exceeded = false;
};

TreeEnumeration enumerate_trees(const GroundModel& m, std::size_t max_methods,
                                std::size_t max_leaves, std::size_t cap);

// Action sequences compatible with one tree's inherited ordering constraints.
std::vector<std::vector<ActionId>> tree_leaf_orders(const GroundModel& m, const Tree& tree,
                                                    std::size_t cap);

// Builds the plan-position witness for a tree whose leaves, in `leaf_order`
// (indices into tree.nodes), spell the plan.
DecompositionWitness tree_to_witness(const Tree& tree, const std::vector<int>& leaf_order);

// Shortest word in L(cfg) intersected with L(dfa), via the product grammar;
// nullopt when the intersection is empty.
std::optional<int> product_min_word(const Cfg& cfg, const Dfa& dfa);

struct RandomModelOptions {
  bool totally_ordered = false;
  bool allow_recursion = true;
  bool method_preconditions = true;
};

GroundModel random_tiny_model(std::mt19937_64& rng, const RandomModelOptions& opts);

GrammarSpec random_grammar_pair(std::mt19937_64& rng);

// Classical STRIPS plan enumeration up to a length bound (for the
// classical-to-HTN conversion property).
std::set<std::vector<ActionId>> classical_solutions(const ClassicalModel& m,
                                                    std::size_t max_plan_length);

}  // namespace htnkit::oracle

#endif
