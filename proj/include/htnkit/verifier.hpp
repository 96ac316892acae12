#ifndef HTNKIT_VERIFIER_HPP
#define HTNKIT_VERIFIER_HPP

#include <cstdint>
#include <string>
#include <utility>

#include "htnkit/model.hpp"

// Plan validation: executability plus decomposition derivability, either
// against a witness (polynomial) or by exhaustive decomposition search.

namespace htnkit {

enum class VerifyFailure {
  None,
  ParseError,
  UnknownAction,
  NotExecutable,
  WitnessMalformed,
  MethodMismatch,
  OrderViolation,
  LeafPlanMismatch,
  GoalUnsatisfied,
  BoundExceeded,
};

const char* verify_failure_name(VerifyFailure f);

struct Verdict {
  bool accepted = false;
  VerifyFailure failure = VerifyFailure::None;
  int index = -1;  // failing step, node id, or input line, per failure class
  std::pair<int, int> leaf_pair{-1, -1};  // for OrderViolation
  std::string detail;
  std::uint64_t elementary_checks = 0;

  std::string str() const;
};

// Accepted iff (1) the witness is a well-formed tree whose leaves are exactly
// the plan positions, (2) the root children instantiate the initial network
// and every abstract node's children match its method's network positionally,
// (3) all ordering constraints along the tree hold over leaf positions,
// (4) the plan is executable from init, (5) the goal (if any) holds at the
// end. Checks run in this order; the first failure is reported.
Verdict verify(const GroundModel& m, const Plan& plan, const DecompositionWitness& w);

// Exhaustive search over decompositions with at most depth_bound method
// applications; accepted iff some witness yields exactly this plan.
// Exponential; intended as an oracle and fallback.
Verdict verify_without_witness(const GroundModel& m, const Plan& plan, int depth_bound);

struct PlanFileResult {
  bool ok = false;
  Plan plan;
  DecompositionWitness witness;
  Verdict error;  // set when !ok
};

// Line-oriented plan+witness format:
//   ==>
//   <index> (<action> <args>)        one line per plan step, 0..n-1
//   root <ids...>                    the nodes instantiating the initial network
//   <id> (<task> <args>) -> <method> <childIds...>
//   <==
// Child ids below n refer to plan steps; `#` starts a comment line.
PlanFileResult parse_plan_file(const std::string& text, const GroundModel& m);

std::string print_plan_file(const GroundModel& m, const Plan& plan,
                            const DecompositionWitness& w);

}  // namespace htnkit

#endif
