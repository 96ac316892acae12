#ifndef HTNKIT_GROUNDER_HPP
#define HTNKIT_GROUNDER_HPP

#include <stdexcept>
#include <string>

#include "htnkit/ast.hpp"
#include "htnkit/model.hpp"

// Instantiation of a lifted model over the problem objects, followed by
// solution-preserving reachability pruning.

namespace htnkit {

struct GroundingStats {
  long long facts_before = 0, facts_after = 0;
  long long actions_before = 0, actions_after = 0;
  long long tasks_before = 0, tasks_after = 0;
  long long methods_before = 0, methods_after = 0;
  double wall_seconds = 0;

  std::string str() const;
};

struct GroundingBlowup : std::runtime_error {
  long long count;
  long long cap;
  GroundingBlowup(long long count_, long long cap_);
};

// Grounding-time reference failures (e.g. a domain constant naming no object).
struct GroundingError : std::runtime_error {
  explicit GroundingError(const std::string& message);
};

struct GroundResult {
  GroundModel model;
  GroundingStats stats;
};

inline constexpr long long kDefaultGroundingCap = 10'000'000;

// Enumerates every type-consistent instantiation (deterministically:
// declaration order, then lexicographic object order), compiles negative
// preconditions away via complement facts, and prunes the result.
GroundResult ground(const LiftedDomain& domain, const LiftedProblem& problem,
                    long long cap = kDefaultGroundingCap);

// Fixpoint of delete-relaxed fact/action reachability, bottom-up task
// achievability and top-down reachability from the initial network.
// Solutions are preserved exactly; ids are re-assigned densely.
GroundModel reachability_prune(const GroundModel& model);

// True iff every method network and the initial network are total orders.
bool is_totally_ordered(const GroundModel& model);

// Stable one-entity-per-line dump for debugging and tests.
std::string dump_model(const GroundModel& model);

}  // namespace htnkit

#endif
