#pragma once

// CSV and JSON serialization of experiment results and fits.

#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "glassdescent/analysis.hpp"
#include "glassdescent/error.hpp"
#include "glassdescent/harness.hpp"
#include "glassdescent/instance_io.hpp"

namespace glassdescent {

inline constexpr const char *kToolName = "glassdescent";
inline constexpr const char *kToolVersion = "0.1.0";

inline constexpr const char *kResultsCsvHeader =
    "protocol,N,P,num_disorder,runs_per_disorder,tau_mean,tau_stderr,e_min_mean,e_min_stderr,"
    "total_flips";

inline void write_results_csv(std::ostream &out, const AggregateResult &result) {
  out << kResultsCsvHeader << '\n';
  for (const auto &c : result.cells)
    out << to_string(c.protocol) << ',' << c.n << ',' << format_double(c.p) << ','
        << c.num_disorder << ',' << format_double(c.runs_per_disorder) << ','
        << format_double(c.tau_mean) << ',' << format_double(c.tau_stderr) << ','
        << format_double(c.e_min_mean) << ',' << format_double(c.e_min_stderr) << ','
        << c.total_flips << '\n';
}

inline nlohmann::ordered_json plan_to_json(const ExperimentPlan &plan) {
  nlohmann::ordered_json j;
  j["protocol"] = to_string(plan.protocol);
  j["sizes"] = plan.sizes;
  j["p_values"] = plan.p_values;
  j["num_disorder"] = plan.num_disorder;
  j["restarts"] = plan.restarts.describe();
  j["budget_flips"] = plan.budget_flips ? nlohmann::ordered_json(*plan.budget_flips) : nullptr;
  j["budget_per_n2"] =
      plan.budget_per_n2 ? nlohmann::ordered_json(*plan.budget_per_n2) : nullptr;
  j["master_seed"] = plan.master_seed;
  j["tie_break"] = to_string(plan.tie_break);
  return j;
}

inline nlohmann::ordered_json results_to_json(const AggregateResult &result) {
  nlohmann::ordered_json doc;
  doc["tool"] = kToolName;
  doc["version"] = kToolVersion;
  doc["plan"] = plan_to_json(result.plan);
  auto &rows = doc["results"] = nlohmann::ordered_json::array();
  for (const auto &c : result.cells) {
    nlohmann::ordered_json row;
    row["protocol"] = to_string(c.protocol);
    row["N"] = c.n;
    row["P"] = c.p;
    row["num_disorder"] = c.num_disorder;
    row["runs_per_disorder"] = c.runs_per_disorder;
    row["tau_mean"] = c.tau_mean;
    row["tau_stderr"] = c.tau_stderr;
    row["e_min_mean"] = c.e_min_mean;
    row["e_min_stderr"] = c.e_min_stderr;
    row["total_flips"] = c.total_flips;
    row["total_runs"] = c.total_runs;
    if (result.plan.protocol == Protocol::FixedBudget)
      row["budget_flips_per_disorder"] = result.plan.budget_for_size(c.n);
    auto &per = row["per_disorder"] = nlohmann::ordered_json::array();
    for (std::size_t d = 0; d < c.per_disorder.size(); ++d) {
      const auto &dr = c.per_disorder[d];
      per.push_back({{"disorder_index", d},
                     {"instance_seed", dr.instance_seed},
                     {"runs", dr.runs},
                     {"flips", dr.flips},
                     {"tau_mean", dr.tau_mean},
                     {"e_min", dr.e_min}});
    }
    rows.push_back(std::move(row));
  }
  return doc;
}

/// One data row of a results CSV, as read back for fitting.
struct ResultsRow {
  std::string protocol;
  double n = 0.0;
  double p = 0.0;
  double tau_mean = 0.0;
  double tau_stderr = 0.0;
  double e_min_mean = 0.0;
  double e_min_stderr = 0.0;
};

/// Reads a results CSV. Only the columns needed for fitting are required;
/// a missing one is a schema error.
inline std::vector<ResultsRow> read_results_csv(std::istream &in) {
  auto split = [](const std::string &line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ','))
      out.push_back(cell);
    return out;
  };
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line))
    throw ParseError("empty results CSV", 1);
  ++line_no;
  if (!line.empty() && line.back() == '\r')
    line.pop_back();
  const auto header = split(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t k = 0; k < header.size(); ++k)
    col[header[k]] = k;
  for (const char *need : {"N", "P", "tau_mean"})
    if (!col.count(need))
      throw ParseError(std::string("results CSV is missing required column '") + need + "'",
                       line_no);

  auto number = [&](const std::vector<std::string> &cells, const std::string &name,
                    double fallback) {
    const auto it = col.find(name);
    if (it == col.end())
      return fallback;
    double v = 0.0;
    if (it->second >= cells.size() || !detail::parse_number(cells[it->second], v))
      throw ParseError("bad value in column '" + name + "'", line_no);
    return v;
  };

  std::vector<ResultsRow> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty())
      continue;
    const auto cells = split(line);
    ResultsRow r;
    if (auto it = col.find("protocol"); it != col.end() && it->second < cells.size())
      r.protocol = cells[it->second];
    r.n = number(cells, "N", 0.0);
    r.p = number(cells, "P", 0.0);
    r.tau_mean = number(cells, "tau_mean", 0.0);
    r.tau_stderr = number(cells, "tau_stderr", 0.0);
    r.e_min_mean = number(cells, "e_min_mean", 0.0);
    r.e_min_stderr = number(cells, "e_min_stderr", 0.0);
    rows.push_back(r);
  }
  return rows;
}

inline nlohmann::ordered_json fit_to_json(const ScalingFit &fit, const std::string &protocol,
                                          double p) {
  nlohmann::ordered_json j;
  j["protocol"] = protocol;
  j["P"] = p;
  j["alpha"] = fit.alpha;
  j["alpha_stderr"] = fit.alpha_stderr;
  j["log_prefactor"] = fit.log_prefactor;
  j["r_squared"] = fit.r_squared;
  auto &pts = j["points"] = nlohmann::ordered_json::array();
  for (const auto &pt : fit.points)
    pts.push_back({{"N", pt.n}, {"tau", pt.tau}, {"tau_stderr", pt.tau_stderr}});
  return j;
}

} // namespace glassdescent
