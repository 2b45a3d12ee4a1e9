#pragma once

// Disorder-averaged experiments over grids of (N, P):
//
//   tau-scan        mean flips to stability over D x R random starts
//   fixed-restarts  lowest energy per instance after R starts
//   fixed-budget    lowest energy per instance when starts are repeated
//                   until a per-instance flip budget is spent
//
// Run (d, r) at (N, P) draws its initial configuration and its per-step
// coins from one stream keyed by (master_seed, N, P, d, r). Instances are
// keyed by (master_seed, N, d) only, so every P sees the same disorder.
// Results land in per-task slots and are reduced in ascending (d, r) order;
// output is identical for any worker count.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "glassdescent/analysis.hpp"
#include "glassdescent/descent.hpp"
#include "glassdescent/error.hpp"
#include "glassdescent/oracle.hpp"
#include "glassdescent/parallel.hpp"
#include "glassdescent/rng.hpp"
#include "glassdescent/sk_model.hpp"

namespace glassdescent {

enum class Protocol { TauScan, FixedRestarts, FixedBudget };

inline const char *to_string(Protocol p) noexcept {
  switch (p) {
  case Protocol::TauScan:
    return "tau-scan";
  case Protocol::FixedRestarts:
    return "fixed-restarts";
  case Protocol::FixedBudget:
    return "fixed-budget";
  }
  return "unknown";
}

inline Protocol parse_protocol(const std::string &s) {
  if (s == "tau-scan")
    return Protocol::TauScan;
  if (s == "fixed-restarts")
    return Protocol::FixedRestarts;
  if (s == "fixed-budget")
    return Protocol::FixedBudget;
  throw ValidationError("unknown protocol '" + s + "'");
}

/// Number of random starts per disorder realization: N itself by default,
/// or a constant.
struct RestartRule {
  std::optional<std::size_t> constant;

  std::size_t for_size(std::size_t n) const { return constant ? *constant : n; }
  std::string describe() const { return constant ? std::to_string(*constant) : "N"; }
};

struct ExperimentPlan {
  Protocol protocol = Protocol::TauScan;
  std::vector<std::size_t> sizes;
  std::vector<double> p_values;
  std::size_t num_disorder = 1;
  RestartRule restarts;
  // Per-instance flip budget for fixed-budget: budget_flips if set, otherwise
  // budget_per_n2 * N^2.
  std::optional<std::uint64_t> budget_flips;
  std::optional<double> budget_per_n2;
  std::uint64_t master_seed = 0;
  TieBreak tie_break = TieBreak::LowestIndex;

  /// Every problem found, empty when the plan is runnable.
  std::vector<std::string> problems() const {
    std::vector<std::string> out;
    if (sizes.empty())
      out.push_back("sizes: at least one size is required");
    for (std::size_t n : sizes)
      if (n < 2)
        out.push_back("sizes: " + std::to_string(n) + " is below the minimum of 2");
    if (p_values.empty())
      out.push_back("p_values: at least one P is required");
    for (double p : p_values)
      if (!(p >= 0.0 && p <= 1.0))
        out.push_back("p_values: " + std::to_string(p) + " is outside [0, 1]");
    if (num_disorder < 1)
      out.push_back("num_disorder: must be at least 1");
    if (protocol != Protocol::FixedBudget && restarts.constant && *restarts.constant < 1)
      out.push_back("restarts: must be at least 1");
    if (protocol == Protocol::FixedBudget) {
      if (!budget_flips && !budget_per_n2)
        out.push_back("budget_flips: required for the fixed-budget protocol");
      if (budget_per_n2 && !(*budget_per_n2 >= 0.0))
        out.push_back("budget_per_n2: must be non-negative");
    }
    return out;
  }

  void validate() const {
    const auto issues = problems();
    if (issues.empty())
      return;
    std::string msg = "invalid experiment plan:";
    for (const auto &s : issues)
      msg += "\n  " + s;
    throw ValidationError(msg);
  }

  std::uint64_t budget_for_size(std::size_t n) const {
    if (budget_flips)
      return *budget_flips;
    if (budget_per_n2)
      return static_cast<std::uint64_t>(*budget_per_n2 * static_cast<double>(n) *
                                        static_cast<double>(n));
    return 0;
  }
};

struct DisorderResult {
  std::uint64_t instance_seed = 0;
  std::uint64_t runs = 0;
  std::uint64_t flips = 0;
  double tau_mean = 0.0;
  double e_min = 0.0;
};

struct CellResult {
  Protocol protocol = Protocol::TauScan;
  std::size_t n = 0;
  double p = 0.0;
  std::size_t num_disorder = 0;
  double runs_per_disorder = 0.0;
  double tau_mean = 0.0;
  double tau_stderr = 0.0;
  double e_min_mean = 0.0;
  double e_min_stderr = 0.0;
  std::uint64_t total_flips = 0;
  std::uint64_t total_runs = 0;
  std::vector<DisorderResult> per_disorder;
};

struct AggregateResult {
  ExperimentPlan plan;
  std::vector<CellResult> cells; // sizes outer, p_values inner, in plan order
};

/// Produces the instance for (n, seed). Defaults to generate_instance; tests
/// substitute degenerate couplings.
using InstanceFactory = std::function<Instance(std::size_t n, std::uint64_t seed)>;

struct ExecutionOptions {
  std::size_t workers = 1; // 0 means one per hardware thread
  InstanceFactory make_instance;
};

/// Seed of the stream used by run (d, r) at (N, P).
inline std::uint64_t run_stream_seed(std::uint64_t master_seed, std::size_t n, double p,
                                     std::size_t d, std::size_t r) {
  return derive_seed({master_seed, kRunStreamTag, n, bits_of(p), d, r});
}

namespace detail {

struct RunOutcome {
  std::uint64_t flips = 0;
  double energy_per_spin = 0.0;
};

// Draws a random start from `rng`, then descends with the same stream.
// `state` is reused across calls when already engaged.
inline RunOutcome run_one(const Instance &instance, std::optional<SpinState> &state,
                          const DescentParams &params, Rng &rng) {
  const Spins initial = random_initial(instance.size(), rng);
  if (state)
    state->reset(initial);
  else
    state.emplace(instance, initial);
  RunOutcome out;
  out.flips = descend_in_place(*state, params, rng);
  if (!is_stable(*state))
    throw InvariantError("descent terminated in a state that is not 1-spin-flip stable");
  out.energy_per_spin = state->energy_per_spin();
  return out;
}

inline CellResult reduce_cell(const ExperimentPlan &plan, std::size_t n, double p,
                              const std::vector<std::uint64_t> &seeds,
                              const std::vector<std::vector<RunOutcome>> &runs) {
  CellResult cell;
  cell.protocol = plan.protocol;
  cell.n = n;
  cell.p = p;
  cell.num_disorder = runs.size();

  std::vector<double> taus;
  std::vector<double> minima;
  for (std::size_t d = 0; d < runs.size(); ++d) {
    DisorderResult dr;
    dr.instance_seed = seeds[d];
    dr.runs = runs[d].size();
    double e_min = runs[d].front().energy_per_spin;
    for (const auto &o : runs[d]) {
      taus.push_back(static_cast<double>(o.flips));
      dr.flips += o.flips;
      e_min = std::min(e_min, o.energy_per_spin);
    }
    dr.tau_mean = static_cast<double>(dr.flips) / static_cast<double>(dr.runs);
    dr.e_min = e_min;
    minima.push_back(e_min);
    cell.total_flips += dr.flips;
    cell.total_runs += dr.runs;
    cell.per_disorder.push_back(dr);
  }
  const Summary tau = summarize(taus);
  const Summary e = summarize(minima);
  cell.tau_mean = tau.mean;
  cell.tau_stderr = tau.stderr_mean;
  cell.e_min_mean = e.mean;
  cell.e_min_stderr = e.stderr_mean;
  cell.runs_per_disorder =
      static_cast<double>(cell.total_runs) / static_cast<double>(cell.num_disorder);
  return cell;
}

} // namespace detail

/// Runs any of the three protocols as selected by plan.protocol.
inline AggregateResult run_experiment(const ExperimentPlan &plan,
                                      const ExecutionOptions &options = {}) {
  plan.validate();
  const InstanceFactory make =
      options.make_instance ? options.make_instance
                            : InstanceFactory([](std::size_t n, std::uint64_t seed) {
                                return generate_instance(n, seed);
                              });

  AggregateResult result;
  result.plan = plan;
  const std::size_t num_d = plan.num_disorder;

  for (std::size_t n : plan.sizes) {
    std::vector<Instance> instances;
    std::vector<std::uint64_t> seeds;
    instances.reserve(num_d);
    for (std::size_t d = 0; d < num_d; ++d) {
      seeds.push_back(instance_seed(plan.master_seed, n, d));
      instances.push_back(make(n, seeds.back()));
      if (instances.back().size() != n)
        throw DimensionError("instance factory returned the wrong size");
    }

    for (double p : plan.p_values) {
      DescentParams params;
      params.p_greedy = p;
      params.tie_break = plan.tie_break;
      std::vector<std::vector<detail::RunOutcome>> runs(num_d);

      if (plan.protocol == Protocol::FixedBudget) {
        const std::uint64_t budget = plan.budget_for_size(n);
        parallel_for(num_d, options.workers, [&](std::size_t d) {
          std::optional<SpinState> state;
          std::uint64_t spent = 0;
          // Soft budget: the run in progress when the budget runs out completes
          // and counts; at least one run always happens.
          for (std::size_t r = 0;; ++r) {
            Rng rng(run_stream_seed(plan.master_seed, n, p, d, r));
            runs[d].push_back(detail::run_one(instances[d], state, params, rng));
            spent += runs[d].back().flips;
            if (spent >= budget)
              break;
          }
        });
      } else {
        const std::size_t num_r = plan.restarts.for_size(n);
        for (auto &v : runs)
          v.resize(num_r);
        parallel_for(num_d * num_r, options.workers, [&](std::size_t task) {
          const std::size_t d = task / num_r;
          const std::size_t r = task % num_r;
          std::optional<SpinState> state;
          Rng rng(run_stream_seed(plan.master_seed, n, p, d, r));
          runs[d][r] = detail::run_one(instances[d], state, params, rng);
        });
      }
      result.cells.push_back(detail::reduce_cell(plan, n, p, seeds, runs));
    }
  }
  return result;
}

inline AggregateResult run_tau_scan(ExperimentPlan plan, const ExecutionOptions &options = {}) {
  plan.protocol = Protocol::TauScan;
  return run_experiment(plan, options);
}

inline AggregateResult run_fixed_restarts(ExperimentPlan plan,
                                          const ExecutionOptions &options = {}) {
  plan.protocol = Protocol::FixedRestarts;
  return run_experiment(plan, options);
}

inline AggregateResult run_fixed_budget(ExperimentPlan plan,
                                        const ExecutionOptions &options = {}) {
  plan.protocol = Protocol::FixedBudget;
  return run_experiment(plan, options);
}

} // namespace glassdescent
