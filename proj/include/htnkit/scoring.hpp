#ifndef HTNKIT_SCORING_HPP
#define HTNKIT_SCORING_HPP

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// IPC-style scoring over persisted run records. Scoring is a pure function
// of the records and the reference tables, so reports can be rebuilt without
// re-running anything.

namespace htnkit {

enum class RunVerdict { ValidPlan, InvalidPlan, NoPlan, Timeout, Memout, Crash };

const char* run_verdict_name(RunVerdict v);
std::optional<RunVerdict> run_verdict_from_name(const std::string& name);

struct RunRecord {
  std::string domain;
  std::string instance;
  std::string planner;
  RunVerdict verdict = RunVerdict::NoPlan;
  double wall_seconds = 0;
  std::optional<long long> cost;  // present iff verdict == ValidPlan
  std::string plan_path;
};

// Raised when a valid plan beats the reference optimum: the reference table
// was wrong and scoring must not continue.
struct ReferenceInconsistency : std::runtime_error {
  ReferenceInconsistency(const RunRecord& record, long long reference);
};

// bestKnown / cost for a valid plan, 0 otherwise.
double score_satisficing(const RunRecord& r, long long best_known);

// 1 within one second, 0 at the time limit, 1 - ln(t)/ln(T) in between.
double score_agile(const RunRecord& r, double time_limit_seconds);

// 1 iff the plan is valid and exactly matches the reference optimum.
double score_optimal(const RunRecord& r, long long reference_optimum);

using InstanceKey = std::pair<std::string, std::string>;  // (domain, instance)

struct ScoreReport {
  struct PlannerTotals {
    std::string planner;
    int coverage = 0;
    double quality = 0;
    double agile = 0;
    double optimal = 0;
    int optimal_scored = 0;  // instances that had a reference optimum
  };
  struct Row {
    std::string domain, instance, planner;
    RunVerdict verdict = RunVerdict::NoPlan;
    double wall_seconds = 0;
    std::optional<long long> cost;
    double quality = 0, agile = 0;
    std::optional<double> optimal;  // absent without a reference optimum
  };

  double time_limit_seconds = 1800;
  std::vector<PlannerTotals> totals;               // sorted by planner id
  std::vector<Row> rows;                           // sorted by (domain, instance, planner)
  std::map<InstanceKey, long long> best_known;
  std::vector<std::string> excluded;               // instances with no valid plan anywhere

  std::string text() const;
  std::string csv() const;
};

// Aggregates all three track metrics. best-known costs are the minimum over
// valid plans and the reference optima; instances solved by nobody and
// without a reference are excluded from quality scoring.
ScoreReport score_records(const std::vector<RunRecord>& records,
                          const std::map<InstanceKey, long long>& reference_optima,
                          double time_limit_seconds);

// Tab-separated records table with a '#' header line.
std::string records_to_table(const std::vector<RunRecord>& records);
std::vector<RunRecord> parse_records_table(const std::string& text);

}  // namespace htnkit

#endif
