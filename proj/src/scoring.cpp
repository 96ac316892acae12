#include "htnkit/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

namespace htnkit {

const char* run_verdict_name(RunVerdict v) {
  switch (v) {
    case RunVerdict::ValidPlan: return "valid-plan";
    case RunVerdict::InvalidPlan: return "invalid-plan";
    case RunVerdict::NoPlan: return "no-plan";
    case RunVerdict::Timeout: return "timeout";
    case RunVerdict::Memout: return "memout";
    case RunVerdict::Crash: return "crash";
  }
  return "unknown";
}

std::optional<RunVerdict> run_verdict_from_name(const std::string& name) {
  for (RunVerdict v : {RunVerdict::ValidPlan, RunVerdict::InvalidPlan, RunVerdict::NoPlan,
                       RunVerdict::Timeout, RunVerdict::Memout, RunVerdict::Crash})
    if (name == run_verdict_name(v)) return v;
  return std::nullopt;
}

ReferenceInconsistency::ReferenceInconsistency(const RunRecord& record, long long reference)
    : std::runtime_error("plan for " + record.domain + "/" + record.instance + " by " +
                         record.planner + " costs " + std::to_string(*record.cost) +
                         ", below the reference optimum " + std::to_string(reference)) {}

double score_satisficing(const RunRecord& r, long long best_known) {
  if (r.verdict != RunVerdict::ValidPlan || !r.cost) return 0;
  if (*r.cost <= 0) return 1;  // zero-cost plans count as best possible
  if (best_known <= 0) return 1;
  return static_cast<double>(best_known) / static_cast<double>(*r.cost);
}

double score_agile(const RunRecord& r, double time_limit_seconds) {
  if (r.verdict != RunVerdict::ValidPlan) return 0;
  double t = r.wall_seconds;
  if (t <= 1) return 1;
  if (t >= time_limit_seconds) return 0;
  return 1 - std::log(t) / std::log(time_limit_seconds);
}

double score_optimal(const RunRecord& r, long long reference_optimum) {
  if (r.verdict != RunVerdict::ValidPlan || !r.cost) return 0;
  if (*r.cost < reference_optimum) throw ReferenceInconsistency(r, reference_optimum);
  return *r.cost == reference_optimum ? 1 : 0;
}

ScoreReport score_records(const std::vector<RunRecord>& input,
                          const std::map<InstanceKey, long long>& reference_optima,
                          double time_limit_seconds) {
  std::vector<RunRecord> records = input;
  std::sort(records.begin(), records.end(), [](const RunRecord& a, const RunRecord& b) {
    return std::tie(a.domain, a.instance, a.planner) < std::tie(b.domain, b.instance, b.planner);
  });

  ScoreReport report;
  report.time_limit_seconds = time_limit_seconds;

  std::set<InstanceKey> instances;
  for (const auto& r : records) {
    instances.insert({r.domain, r.instance});
    if (r.verdict == RunVerdict::ValidPlan && r.cost) {
      InstanceKey key{r.domain, r.instance};
      auto it = report.best_known.find(key);
      if (it == report.best_known.end() || *r.cost < it->second)
        report.best_known[key] = *r.cost;
    }
  }
  for (const auto& [key, opt] : reference_optima) {
    auto it = report.best_known.find(key);
    if (it == report.best_known.end() || opt < it->second) report.best_known[key] = opt;
  }
  for (const auto& key : instances)
    if (!report.best_known.count(key)) report.excluded.push_back(key.first + "/" + key.second);

  std::map<std::string, ScoreReport::PlannerTotals> totals;
  for (const auto& r : records) {
    InstanceKey key{r.domain, r.instance};
    ScoreReport::Row row;
    row.domain = r.domain;
    row.instance = r.instance;
    row.planner = r.planner;
    row.verdict = r.verdict;
    row.wall_seconds = r.wall_seconds;
    row.cost = r.cost;

    auto& t = totals[r.planner];
    t.planner = r.planner;
    if (r.verdict == RunVerdict::ValidPlan) t.coverage++;

    auto best = report.best_known.find(key);
    if (best != report.best_known.end()) {
      row.quality = score_satisficing(r, best->second);
      t.quality += row.quality;
    }
    row.agile = score_agile(r, time_limit_seconds);
    t.agile += row.agile;

    auto ref = reference_optima.find(key);
    if (ref != reference_optima.end()) {
      row.optimal = score_optimal(r, ref->second);
      t.optimal += *row.optimal;
      t.optimal_scored++;
    }
    report.rows.push_back(std::move(row));
  }
  for (auto& [_, t] : totals) report.totals.push_back(t);
  return report;
}

std::string ScoreReport::text() const {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2);
  os << "score report (time limit " << time_limit_seconds << " s)\n";
  os << "planner totals:\n";
  for (const auto& t : totals) {
    os << "  " << t.planner << ": coverage " << t.coverage << ", quality " << t.quality
       << ", agile " << t.agile << ", optimal " << t.optimal;
    if (t.optimal_scored == 0) os << " (no reference optima)";
    os << "\n";
  }
  os << "per-instance scores:\n";
  for (const auto& r : rows) {
    os << "  " << r.domain << "/" << r.instance << " " << r.planner << ": "
       << run_verdict_name(r.verdict) << ", wall " << r.wall_seconds << " s";
    if (r.cost) os << ", cost " << *r.cost;
    os << ", quality " << r.quality << ", agile " << r.agile;
    if (r.optimal) os << ", optimal " << *r.optimal;
    os << "\n";
  }
  if (!best_known.empty()) {
    os << "best known costs:\n";
    for (const auto& [key, cost] : best_known)
      os << "  " << key.first << "/" << key.second << ": " << cost << "\n";
  }
  for (const auto& e : excluded)
    os << "excluded (no valid plan anywhere): " << e << "\n";
  return os.str();
}

std::string ScoreReport::csv() const {
  std::ostringstream os;
  os << "domain,instance,planner,verdict,wall_seconds,cost,quality,agile,optimal\n";
  for (const auto& r : rows) {
    os << r.domain << "," << r.instance << "," << r.planner << ","
       << run_verdict_name(r.verdict) << "," << r.wall_seconds << ",";
    if (r.cost) os << *r.cost;
    os << "," << r.quality << "," << r.agile << ",";
    if (r.optimal) os << *r.optimal;
    os << "\n";
  }
  return os.str();
}

std::string records_to_table(const std::vector<RunRecord>& records) {
  std::ostringstream os;
  os << "#domain\tinstance\tplanner\tverdict\twall_seconds\tcost\tplan_path\n";
  for (const auto& r : records) {
    os << r.domain << "\t" << r.instance << "\t" << r.planner << "\t"
       << run_verdict_name(r.verdict) << "\t" << r.wall_seconds << "\t";
    if (r.cost)
      os << *r.cost;
    else
      os << "-";
    os << "\t" << (r.plan_path.empty() ? "-" : r.plan_path) << "\n";
  }
  return os.str();
}

std::vector<RunRecord> parse_records_table(const std::string& text) {
  std::vector<RunRecord> out;
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    line_no++;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cols;
    std::size_t start = 0;
    while (true) {
      auto tab = line.find('\t', start);
      cols.push_back(line.substr(start, tab == std::string::npos ? tab : tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (cols.size() != 7)
      throw std::runtime_error("records table line " + std::to_string(line_no) +
                               ": expected 7 tab-separated columns");
    RunRecord r;
    r.domain = cols[0];
    r.instance = cols[1];
    r.planner = cols[2];
    auto v = run_verdict_from_name(cols[3]);
    if (!v)
      throw std::runtime_error("records table line " + std::to_string(line_no) +
                               ": unknown verdict " + cols[3]);
    r.verdict = *v;
    r.wall_seconds = std::stod(cols[4]);
    if (cols[5] != "-") r.cost = std::stoll(cols[5]);
    if (cols[6] != "-") r.plan_path = cols[6];
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace htnkit
