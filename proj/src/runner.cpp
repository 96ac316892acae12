#include "htnkit/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <fcntl.h>
#include <sched.h>
#include <signal.h>
#include <sys/resource.h>
#include <sys/wait.h>
#include <unistd.h>

#include "htnkit/grounder.hpp"
#include "htnkit/parser.hpp"
#include "htnkit/verifier.hpp"

namespace htnkit {

SpawnFailure::SpawnFailure(const std::string& message) : std::runtime_error(message) {}
MalformedSubmission::MalformedSubmission(const std::string& message)
    : std::runtime_error(message) {}

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::string> split_command(const std::string& command) {
  std::vector<std::string> out;
  std::istringstream is(command);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

struct ChildOutcome {
  double wall_seconds = 0;
  double cpu_seconds = 0;
  long max_rss_kb = 0;
  bool timed_out = false;
  bool signalled = false;
  int exit_status = 0;
};

// Fork/exec with stdout redirected to plan_path, the address space capped,
// and a wall-clock watchdog: SIGTERM at the limit, SIGKILL after the grace
// period. Affinity is set from the parent; failures there are warnings only.
ChildOutcome spawn_and_wait(const std::vector<std::string>& argv, const std::string& plan_path,
                            const RunLimits& limits, int cpu_slot,
                            std::vector<std::string>& warnings) {
  int err_pipe[2];
  if (pipe2(err_pipe, O_CLOEXEC) != 0) throw SpawnFailure("pipe2 failed");

  std::vector<char*> cargv;
  for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
  cargv.push_back(nullptr);

  auto start = std::chrono::steady_clock::now();
  pid_t pid = fork();
  if (pid < 0) {
    close(err_pipe[0]);
    close(err_pipe[1]);
    throw SpawnFailure("fork failed");
  }
  if (pid == 0) {
    setpgid(0, 0);
    int out = open(plan_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    if (out >= 0) {
      dup2(out, STDOUT_FILENO);
      close(out);
    }
    if (limits.memory_bytes > 0) {
      rlimit rl{limits.memory_bytes, limits.memory_bytes};
      setrlimit(RLIMIT_AS, &rl);
    }
    execvp(cargv[0], cargv.data());
    int code = errno;
    ssize_t ignored = write(err_pipe[1], &code, sizeof code);
    (void)ignored;
    _exit(127);
  }
  close(err_pipe[1]);

  if (limits.cores == 1) {
    cpu_set_t set;
    CPU_ZERO(&set);
    long ncpu = sysconf(_SC_NPROCESSORS_ONLN);
    CPU_SET(cpu_slot % (ncpu > 0 ? ncpu : 1), &set);
    if (sched_setaffinity(pid, sizeof set, &set) != 0)
      warnings.push_back("could not pin the child to one core");
  } else if (limits.cores > 1) {
    warnings.push_back("multi-core limits are not enforced");
  }

  ChildOutcome outcome;
  bool sent_term = false, sent_kill = false;
  int status = 0;
  rusage usage{};
  while (true) {
    pid_t done = wait4(pid, &status, WNOHANG, &usage);
    if (done == pid) break;
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                         .count();
    if (limits.wall_seconds > 0 && elapsed >= limits.wall_seconds && !sent_term) {
      kill(-pid, SIGTERM);
      outcome.timed_out = true;
      sent_term = true;
    }
    if (limits.wall_seconds > 0 && elapsed >= limits.wall_seconds + limits.grace_seconds &&
        !sent_kill) {
      kill(-pid, SIGKILL);
      sent_kill = true;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  outcome.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  outcome.cpu_seconds = usage.ru_utime.tv_sec + usage.ru_utime.tv_usec * 1e-6 +
                        usage.ru_stime.tv_sec + usage.ru_stime.tv_usec * 1e-6;
  outcome.max_rss_kb = usage.ru_maxrss;

  int exec_errno = 0;
  if (read(err_pipe[0], &exec_errno, sizeof exec_errno) == sizeof exec_errno) {
    close(err_pipe[0]);
    throw SpawnFailure("cannot execute '" + argv[0] + "': " + std::strerror(exec_errno));
  }
  close(err_pipe[0]);

  outcome.signalled = WIFSIGNALED(status);
  outcome.exit_status = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return outcome;
}

}  // namespace

RunRecord run_planner(const RunRequest& request, const RunLimits& limits) {
  if (!std::filesystem::exists(request.domain_file))
    throw SpawnFailure("domain file does not exist: " + request.domain_file);
  if (!std::filesystem::exists(request.problem_file))
    throw SpawnFailure("problem file does not exist: " + request.problem_file);

  std::vector<std::string> argv = split_command(request.command);
  if (argv.empty()) throw SpawnFailure("empty planner command");
  argv.push_back(request.domain_file);
  argv.push_back(request.problem_file);

  std::vector<std::string> warnings;
  ChildOutcome child =
      spawn_and_wait(argv, request.plan_path, limits, request.cpu_slot, warnings);
  for (const auto& w : warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());

  RunRecord record;
  record.domain = request.domain_id;
  record.instance = request.instance_id;
  record.planner = request.planner_id;
  record.wall_seconds = child.wall_seconds;
  record.plan_path = request.plan_path;

  if (child.timed_out) {
    record.verdict = RunVerdict::Timeout;
    return record;
  }

  std::string output = slurp(request.plan_path);
  bool has_plan_marker = output.find("==>") != std::string::npos;
  if (!has_plan_marker) {
    if (child.signalled) {
      bool near_memory_cap = limits.memory_bytes > 0 &&
                             static_cast<std::uint64_t>(child.max_rss_kb) * 1024 >
                                 limits.memory_bytes / 10 * 9;
      record.verdict = near_memory_cap ? RunVerdict::Memout : RunVerdict::Crash;
    } else {
      record.verdict = RunVerdict::NoPlan;
    }
    return record;
  }

  GroundModel model;
  try {
    LiftedDomain domain = parse_domain(slurp(request.domain_file), request.domain_file);
    LiftedProblem problem =
        parse_problem(slurp(request.problem_file), domain, request.problem_file);
    model = ground(domain, problem).model;
  } catch (const std::exception& e) {
    throw SpawnFailure(std::string("cannot ground the instance for validation: ") + e.what());
  }

  PlanFileResult parsed = parse_plan_file(output, model);
  if (!parsed.ok) {
    record.verdict = RunVerdict::InvalidPlan;
    return record;
  }
  Verdict verdict = verify(model, parsed.plan, parsed.witness);
  if (!verdict.accepted) {
    record.verdict = RunVerdict::InvalidPlan;
    return record;
  }
  record.verdict = RunVerdict::ValidPlan;
  long long cost = 0;
  for (ActionId a : parsed.plan.steps) cost += model.actions[a].cost;
  record.cost = cost;
  return record;
}

std::vector<SuiteInstance> load_suite(const std::string& dir) {
  namespace fs = std::filesystem;
  fs::path root(dir);
  if (!fs::is_directory(root)) throw std::runtime_error("suite directory not found: " + dir);
  fs::path domain = root / "domain.hddl";
  if (!fs::exists(domain))
    throw std::runtime_error("suite has no domain.hddl: " + dir);

  std::map<std::string, long long> optima;
  if (fs::exists(root / "optima.txt")) {
    std::ifstream in(root / "optima.txt");
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      auto tab = line.find('\t');
      if (tab == std::string::npos) continue;
      optima[line.substr(0, tab)] = std::stoll(line.substr(tab + 1));
    }
  }

  std::vector<SuiteInstance> out;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    std::string name = entry.path().filename().string();
    if (name.size() > 5 && name[0] == 'p' && name.ends_with(".hddl")) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::string domain_id = root.filename().string();
  for (const auto& f : files) {
    SuiteInstance inst;
    inst.domain_id = domain_id;
    inst.instance_id = f.stem().string();
    inst.domain_file = domain.string();
    inst.problem_file = f.string();
    auto it = optima.find(inst.instance_id);
    if (it != optima.end()) inst.optimum = it->second;
    out.push_back(std::move(inst));
  }
  return out;
}

std::vector<RunRecord> run_suite(const std::vector<SuiteInstance>& instances,
                                 const std::vector<PlannerCommand>& planners,
                                 const RunLimits& limits, const std::string& plans_dir,
                                 int jobs) {
  std::filesystem::create_directories(plans_dir);
  struct Job {
    RunRequest request;
  };
  std::vector<Job> jobs_list;
  for (const auto& inst : instances) {
    for (const auto& planner : planners) {
      RunRequest req;
      req.domain_id = inst.domain_id;
      req.instance_id = inst.instance_id;
      req.planner_id = planner.id;
      req.command = planner.command;
      req.domain_file = inst.domain_file;
      req.problem_file = inst.problem_file;
      req.plan_path = plans_dir + "/" + inst.domain_id + "__" + inst.instance_id + "__" +
                      planner.id + ".plan";
      jobs_list.push_back({std::move(req)});
    }
  }

  if (jobs <= 0) {
    long n = sysconf(_SC_NPROCESSORS_ONLN);
    jobs = n > 0 ? static_cast<int>(n) : 1;
  }
  jobs = std::min<int>(jobs, static_cast<int>(jobs_list.size()));
  jobs = std::max(jobs, 1);

  std::vector<RunRecord> records;
  std::mutex mutex;
  std::size_t next = 0;
  auto worker = [&](int slot) {
    while (true) {
      std::size_t mine;
      {
        std::lock_guard<std::mutex> lock(mutex);
        if (next >= jobs_list.size()) return;
        mine = next++;
      }
      RunRequest req = jobs_list[mine].request;
      req.cpu_slot = slot;
      RunRecord record = run_planner(req, limits);
      std::lock_guard<std::mutex> lock(mutex);
      records.push_back(std::move(record));
    }
  };
  std::vector<std::thread> pool;
  for (int slot = 0; slot < jobs; ++slot) pool.emplace_back(worker, slot);
  for (auto& t : pool) t.join();

  std::sort(records.begin(), records.end(), [](const RunRecord& a, const RunRecord& b) {
    return std::tie(a.domain, a.instance, a.planner) < std::tie(b.domain, b.instance, b.planner);
  });
  return records;
}

ByobResult byob_verdict(const std::vector<RunRecord>& records) {
  if (records.size() != 20)
    throw MalformedSubmission("a submission needs exactly 20 instances, got " +
                              std::to_string(records.size()));
  ByobResult result;
  for (const auto& r : records)
    if (r.verdict == RunVerdict::ValidPlan) result.solved++;
  result.pass = result.solved <= 10;
  return result;
}

ByobResult byob_check(const std::string& domain_file,
                      const std::vector<std::string>& instance_files,
                      const std::string& command, const RunLimits& limits,
                      const std::string& plans_dir) {
  if (instance_files.size() != 20)
    throw MalformedSubmission("a submission needs exactly 20 instances, got " +
                              std::to_string(instance_files.size()));
  std::vector<SuiteInstance> instances;
  for (const auto& f : instance_files) {
    SuiteInstance inst;
    inst.domain_id = "byob";
    inst.instance_id = std::filesystem::path(f).stem().string();
    inst.domain_file = domain_file;
    inst.problem_file = f;
    instances.push_back(std::move(inst));
  }
  std::vector<RunRecord> records =
      run_suite(instances, {{"submitter", command}}, limits, plans_dir, 0);
  return byob_verdict(records);
}

}  // namespace htnkit
