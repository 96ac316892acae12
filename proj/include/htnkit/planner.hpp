#ifndef HTNKIT_PLANNER_HPP
#define HTNKIT_PLANNER_HPP

#include <cstdint>
#include <optional>

#include "htnkit/model.hpp"

// Progression search over (state, remaining task network). Solved outcomes
// carry the plan and the decomposition witness proving it derivable.

namespace htnkit {

enum class SearchMode { Satisficing, Optimal, Agile };
enum class OrderClass { TotalOrder, General };
enum class SearchStrategy { Dfs, UniformCost, Greedy };

struct SearchConfig {
  SearchMode mode = SearchMode::Satisficing;
  OrderClass order_class = OrderClass::TotalOrder;
  SearchStrategy strategy = SearchStrategy::Dfs;
  int max_network_size = 1 << 16;
  std::uint64_t seed = 0;
  double time_limit_seconds = 0;        // 0 = unlimited
  std::uint64_t memory_limit_bytes = 0; // 0 = unlimited
  bool duplicate_detection = true;

  // Mode defaults: satisficing -> dfs, optimal -> uniform cost, agile -> greedy.
  static SearchConfig for_mode(SearchMode mode, OrderClass order_class);
};

enum class SolveVerdict {
  Solved,
  ProvedUnsolvableWithinBound,
  BoundExhausted,
  Timeout,
  Memout,
};

const char* solve_verdict_name(SolveVerdict v);

struct SearchStats {
  std::uint64_t expanded = 0;
  std::uint64_t generated = 0;
  std::uint64_t duplicates = 0;
  std::uint64_t peak_frontier = 0;
};

struct Outcome {
  SolveVerdict verdict = SolveVerdict::ProvedUnsolvableWithinBound;
  std::optional<Plan> plan;
  std::optional<DecompositionWitness> witness;
  long long cost = 0;  // total plan cost when solved
  SearchStats stats;

  bool solved() const { return verdict == SolveVerdict::Solved; }
};

// Progression over (state, task sequence); requires is_totally_ordered(m).
Outcome solve_total_order(const GroundModel& m, const SearchConfig& cfg);

// Progression over (state, partially ordered network); nodes without
// predecessors are executed or decomposed.
Outcome solve_general(const GroundModel& m, const SearchConfig& cfg);

// Dispatch on cfg.order_class.
Outcome solve(const GroundModel& m, const SearchConfig& cfg);

}  // namespace htnkit

#endif
