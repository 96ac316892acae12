#ifndef HTNKIT_RUNNER_HPP
#define HTNKIT_RUNNER_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "htnkit/scoring.hpp"

// Runs planner commands as child processes under contest resource limits and
// classifies their output through the verifier.

namespace htnkit {

// Contest defaults: one core, 8 GiB of address space, 30 minutes wall clock,
// with a two-second grace period before the hard kill.
struct RunLimits {
  int cores = 1;
  std::uint64_t memory_bytes = 8ull * 1024 * 1024 * 1024;
  double wall_seconds = 1800;
  double grace_seconds = 2;
};

struct SpawnFailure : std::runtime_error {
  explicit SpawnFailure(const std::string& message);
};

struct RunRequest {
  std::string domain_id;
  std::string instance_id;
  std::string planner_id;
  std::string command;       // split on whitespace; domain and problem appended
  std::string domain_file;
  std::string problem_file;
  std::string plan_path;     // child stdout is captured here
  int cpu_slot = 0;          // which core to pin to when cores == 1
};

// Invocation contract: `<cmd> <domainFile> <problemFile>`, plan+witness on
// standard output; the exit code is ignored, the output is authoritative.
RunRecord run_planner(const RunRequest& request, const RunLimits& limits);

struct SuiteInstance {
  std::string domain_id;
  std::string instance_id;
  std::string domain_file;
  std::string problem_file;
  std::optional<long long> optimum;  // from optima.txt when present
};

// Layout: <dir>/domain.hddl, <dir>/p01.hddl ... pNN.hddl, optional
// <dir>/optima.txt with `instance<TAB>cost` lines.
std::vector<SuiteInstance> load_suite(const std::string& dir);

struct PlannerCommand {
  std::string id;
  std::string command;
};

// Runs every (instance, planner) pair on up to `jobs` worker slots; records
// come back sorted by (domain, instance, planner) regardless of completion
// order. Plan files are written under plans_dir.
std::vector<RunRecord> run_suite(const std::vector<SuiteInstance>& instances,
                                 const std::vector<PlannerCommand>& planners,
                                 const RunLimits& limits, const std::string& plans_dir,
                                 int jobs);

struct MalformedSubmission : std::runtime_error {
  explicit MalformedSubmission(const std::string& message);
};

struct ByobResult {
  bool pass = false;
  int solved = 0;
};

// Pure rule: exactly 20 records, pass iff at most 10 are valid plans.
ByobResult byob_verdict(const std::vector<RunRecord>& records);

// Runs the submitter's planner on all 20 instances under contest limits.
ByobResult byob_check(const std::string& domain_file,
                      const std::vector<std::string>& instance_files,
                      const std::string& command, const RunLimits& limits,
                      const std::string& plans_dir);

}  // namespace htnkit

#endif
