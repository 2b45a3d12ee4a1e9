#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <tuple>

#include "glassdescent/harness.hpp"
#include "glassdescent/oracle.hpp"

using namespace glassdescent;

namespace {

ExperimentPlan small_plan(Protocol protocol) {
  ExperimentPlan plan;
  plan.protocol = protocol;
  plan.sizes = {12, 20};
  plan.p_values = {0.0, 0.5, 1.0};
  plan.num_disorder = 4;
  plan.restarts.constant = 6;
  plan.budget_flips = 150;
  plan.master_seed = 99;
  return plan;
}

void require_identical(const AggregateResult &a, const AggregateResult &b) {
  REQUIRE(a.cells.size() == b.cells.size());
  for (std::size_t k = 0; k < a.cells.size(); ++k) {
    const auto &x = a.cells[k];
    const auto &y = b.cells[k];
    REQUIRE(std::tie(x.n, x.p, x.num_disorder, x.total_runs, x.total_flips) ==
            std::tie(y.n, y.p, y.num_disorder, y.total_runs, y.total_flips));
    REQUIRE(x.tau_mean == y.tau_mean);
    REQUIRE(x.tau_stderr == y.tau_stderr);
    REQUIRE(x.e_min_mean == y.e_min_mean);
    REQUIRE(x.e_min_stderr == y.e_min_stderr);
    for (std::size_t d = 0; d < x.per_disorder.size(); ++d) {
      REQUIRE(x.per_disorder[d].e_min == y.per_disorder[d].e_min);
      REQUIRE(x.per_disorder[d].runs == y.per_disorder[d].runs);
    }
  }
}

} // namespace

TEST_CASE("plan validation lists every offending field", "[harness]") {
  ExperimentPlan plan;
  plan.protocol = Protocol::FixedBudget;
  plan.sizes = {1, 10};
  plan.p_values = {1.5};
  plan.num_disorder = 0;
  const auto problems = plan.problems();
  CHECK(problems.size() == 4);
  try {
    plan.validate();
    FAIL("expected a validation error");
  } catch (const ValidationError &e) {
    const std::string msg = e.what();
    CHECK(msg.find("sizes") != std::string::npos);
    CHECK(msg.find("p_values") != std::string::npos);
    CHECK(msg.find("num_disorder") != std::string::npos);
    CHECK(msg.find("budget_flips") != std::string::npos);
  }
  CHECK_THROWS_AS(run_experiment(plan), ValidationError);
}

TEST_CASE("tau-scan yields one row per (N, P)", "[harness]") {
  const auto res = run_tau_scan(small_plan(Protocol::TauScan));
  REQUIRE(res.cells.size() == 6);
  CHECK(res.cells[0].n == 12);
  CHECK(res.cells[0].p == 0.0);
  CHECK(res.cells[5].n == 20);
  CHECK(res.cells[5].p == 1.0);
  for (const auto &c : res.cells) {
    CHECK(c.total_runs == 24);
    CHECK(c.runs_per_disorder == 6.0);
    CHECK(c.tau_mean >= 0.0);
    CHECK(c.tau_stderr >= 0.0);
    CHECK(c.e_min_stderr >= 0.0);
  }
}

TEST_CASE("restart rule defaults to N starts", "[harness]") {
  auto plan = small_plan(Protocol::FixedRestarts);
  plan.restarts.constant.reset();
  const auto res = run_experiment(plan);
  CHECK(res.cells[0].runs_per_disorder == 12.0);
  CHECK(res.cells[3].runs_per_disorder == 20.0);
}

TEST_CASE("zero couplings give zero relaxation time", "[harness]") {
  ExecutionOptions exec;
  exec.make_instance = [](std::size_t n, std::uint64_t seed) { return Instance::zero(n, seed); };
  const auto res = run_tau_scan(small_plan(Protocol::TauScan), exec);
  for (const auto &c : res.cells) {
    CHECK(c.tau_mean == 0.0);
    CHECK(c.total_flips == 0);
  }
}

TEST_CASE("identical plans reproduce identical results", "[harness][property]") {
  for (auto protocol : {Protocol::TauScan, Protocol::FixedRestarts, Protocol::FixedBudget}) {
    const auto plan = small_plan(protocol);
    require_identical(run_experiment(plan), run_experiment(plan));
  }
}

TEST_CASE("results do not depend on worker count", "[harness][property]") {
  for (auto protocol : {Protocol::TauScan, Protocol::FixedRestarts, Protocol::FixedBudget}) {
    const auto plan = small_plan(protocol);
    ExecutionOptions one, many;
    one.workers = 1;
    many.workers = 5;
    require_identical(run_experiment(plan, one), run_experiment(plan, many));
  }
}

TEST_CASE("run streams are distinct across the grid", "[harness]") {
  std::set<std::uint64_t> seen;
  std::size_t count = 0;
  for (std::size_t n : {10u, 50u, 100u})
    for (double p : {0.0, 0.1, 0.5, 1.0})
      for (std::size_t d = 0; d < 20; ++d)
        for (std::size_t r = 0; r < 50; ++r, ++count)
          seen.insert(run_stream_seed(7, n, p, d, r));
  CHECK(seen.size() == count);
  CHECK(run_stream_seed(7, 10, 0.5, 1, 2) == run_stream_seed(7, 10, 0.5, 1, 2));
}

TEST_CASE("minimum energies never undercut the exact ground state", "[harness]") {
  auto plan = small_plan(Protocol::FixedRestarts);
  plan.sizes = {8, 14};
  plan.restarts.constant = 1;
  const auto res = run_experiment(plan);
  for (const auto &c : res.cells)
    for (const auto &d : c.per_disorder) {
      const auto sol = exact_solve(generate_instance(c.n, d.instance_seed));
      REQUIRE(d.e_min >= sol.ground_energy_per_spin - 1e-12);
    }
}

TEST_CASE("exhaustive restarts find the ground state at N=10", "[harness]") {
  ExperimentPlan plan;
  plan.protocol = Protocol::FixedRestarts;
  plan.sizes = {10};
  plan.p_values = {0.0};
  plan.num_disorder = 50;
  plan.restarts.constant = 1024;
  plan.master_seed = 5;
  const auto res = run_experiment(plan);
  std::size_t hits = 0;
  for (const auto &d : res.cells[0].per_disorder) {
    const auto sol = exact_solve(generate_instance(10, d.instance_seed));
    REQUIRE(d.e_min >= sol.ground_energy_per_spin - 1e-12);
    hits += d.e_min - sol.ground_energy_per_spin <= 1e-12;
  }
  // Pinned from the first oracle comparison (all 50 instances hit).
  CHECK(hits >= 45);
}

TEST_CASE("fixed budget is soft and always completes a run", "[harness]") {
  auto plan = small_plan(Protocol::FixedBudget);
  plan.budget_flips = 0;
  const auto zero = run_experiment(plan);
  for (const auto &c : zero.cells)
    for (const auto &d : c.per_disorder)
      CHECK(d.runs == 1);

  plan.budget_flips = 500;
  plan.p_values = {0.0, 1.0};
  const auto res = run_experiment(plan);
  for (const auto &c : res.cells)
    for (const auto &d : c.per_disorder) {
      CHECK(d.flips >= 500);
      CHECK(d.runs >= 2);
    }
}

TEST_CASE("budget may scale with N squared", "[harness]") {
  ExperimentPlan plan;
  plan.protocol = Protocol::FixedBudget;
  plan.budget_per_n2 = 2.0;
  CHECK(plan.budget_for_size(30) == 1800);
  plan.budget_flips = 7;
  CHECK(plan.budget_for_size(30) == 7);
}
