#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "glassdescent/report.hpp"

using namespace glassdescent;

namespace {

AggregateResult tiny_result() {
  ExperimentPlan plan;
  plan.protocol = Protocol::TauScan;
  plan.sizes = {10, 20};
  plan.p_values = {0.1};
  plan.num_disorder = 2;
  plan.restarts.constant = 3;
  plan.master_seed = 4;
  return run_experiment(plan);
}

} // namespace

TEST_CASE("results CSV columns", "[report]") {
  std::ostringstream out;
  write_results_csv(out, tiny_result());
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  CHECK(header == "protocol,N,P,num_disorder,runs_per_disorder,tau_mean,tau_stderr,e_min_mean,"
                  "e_min_stderr,total_flips");
  std::string row;
  std::getline(in, row);
  CHECK(row.rfind("tau-scan,10,0.10000000000000001,2,3,", 0) == 0);
}

TEST_CASE("results CSV reads back for fitting", "[report]") {
  const auto res = tiny_result();
  std::stringstream buf;
  write_results_csv(buf, res);
  const auto rows = read_results_csv(buf);
  REQUIRE(rows.size() == 2);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    CHECK(rows[k].protocol == "tau-scan");
    CHECK(rows[k].n == static_cast<double>(res.cells[k].n));
    CHECK(rows[k].p == res.cells[k].p);
    CHECK(rows[k].tau_mean == res.cells[k].tau_mean);
    CHECK(rows[k].e_min_mean == res.cells[k].e_min_mean);
  }
}

TEST_CASE("results CSV schema errors", "[report]") {
  std::istringstream missing("N,P\n10,1\n");
  CHECK_THROWS_AS(read_results_csv(missing), ParseError);
  std::istringstream bad("N,P,tau_mean\n10,1,abc\n");
  CHECK_THROWS_AS(read_results_csv(bad), ParseError);
}

TEST_CASE("results JSON embeds plan and version", "[report]") {
  const auto doc = results_to_json(tiny_result());
  CHECK(doc["tool"] == "glassdescent");
  CHECK(doc["version"] == kToolVersion);
  CHECK(doc["plan"]["protocol"] == "tau-scan");
  CHECK(doc["plan"]["sizes"] == nlohmann::json::array({10, 20}));
  CHECK(doc["plan"]["restarts"] == "3");
  CHECK(doc["plan"]["master_seed"] == 4);
  REQUIRE(doc["results"].size() == 2);
  CHECK(doc["results"][0]["per_disorder"].size() == 2);
  CHECK(doc["results"][1]["N"] == 20);
}

TEST_CASE("fit report JSON", "[report]") {
  const std::vector<ScalingPoint> pts{{10, 100, 1}, {20, 400, 2}, {40, 1600, 3}};
  const auto j = fit_to_json(fit_power_law(pts), "tau-scan", 0.0);
  CHECK(j["alpha"].get<double>() == Catch::Approx(2.0).epsilon(1e-12));
  CHECK(j["points"].size() == 3);
  CHECK(j["points"][2]["tau_stderr"] == 3.0);
  for (const char *key : {"protocol", "P", "alpha", "alpha_stderr", "log_prefactor", "r_squared"})
    CHECK(j.contains(key));
}
