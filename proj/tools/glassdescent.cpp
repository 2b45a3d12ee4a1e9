// glassdescent command-line tool.
//
// Subcommands: gen, descend, tau-scan, fixed-restarts, fixed-budget, fit, oracle.
// Exit codes: 0 success, 1 validation/parse error, 2 internal invariant violation.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "glassdescent/glassdescent.hpp"

namespace gd = glassdescent;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitInvariant = 2;

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string trim(const std::string &s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Flat `key = value` file with `#` comments. Keys are flag names without the
// leading dashes; underscores are accepted in place of dashes.
std::vector<std::string> read_config_args(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw gd::Error("cannot open config file '" + path + "'");
  std::vector<std::string> args;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw gd::ParseError("expected 'key = value' in config file '" + path + "'", line_no);
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw gd::ParseError("empty key in config file '" + path + "'", line_no);
    for (char &c : key)
      if (c == '_')
        c = '-';
    args.push_back("--" + key + "=" + value);
  }
  return args;
}

// Splices config-file values in front of the command-line flags. Options use
// the take-last policy, so explicit flags win.
std::vector<std::string> expand_config(int argc, char **argv) {
  std::vector<std::string> args(argv, argv + argc);
  std::optional<std::string> config;
  for (std::size_t k = 1; k < args.size(); ++k) {
    if (args[k] == "--config" && k + 1 < args.size())
      config = args[k + 1];
    else if (args[k].rfind("--config=", 0) == 0)
      config = args[k].substr(9);
  }
  if (!config || args.size() < 2)
    return args;
  const auto injected = read_config_args(*config);
  std::vector<std::string> out{args[0], args[1]};
  out.insert(out.end(), injected.begin(), injected.end());
  out.insert(out.end(), args.begin() + 2, args.end());
  return out;
}

std::size_t default_workers() {
  if (const char *env = std::getenv("GLASSDESCENT_WORKERS")) {
    try {
      return static_cast<std::size_t>(std::stoul(env));
    } catch (const std::exception &) {
      throw gd::ValidationError(std::string("GLASSDESCENT_WORKERS is not a number: ") + env);
    }
  }
  return 0;
}

template <typename Write> void write_file(const std::string &path, Write &&write) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw gd::Error("cannot open '" + path + "' for writing");
  write(out);
  out.flush();
  if (!out)
    throw gd::Error("failed writing '" + path + "'");
}

struct GenOptions {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_gen(const GenOptions &o) {
  const auto instance = gd::generate_instance(o.n, o.seed);
  gd::save_instance(o.out, instance);
  std::cout << "N=" << o.n << " seed=" << o.seed << " file=" << o.out << '\n';
  return kExitOk;
}

struct DescendOptions {
  std::string instance_path;
  std::optional<std::size_t> n;
  std::uint64_t seed = 0;
  double p = 1.0;
  std::uint64_t run_seed = 0;
  std::string init;
  std::string tie_break = "lowest-index";
  std::string trace;
};

int cmd_descend(const DescendOptions &o) {
  std::optional<gd::Instance> instance;
  if (!o.instance_path.empty())
    instance = gd::load_instance(o.instance_path);
  else if (o.n)
    instance = gd::generate_instance(*o.n, o.seed);
  else
    throw gd::ValidationError("descend needs --instance or --n");

  gd::DescentParams params;
  params.p_greedy = o.p;
  params.tie_break = gd::parse_tie_break(o.tie_break);
  params.run_seed = o.run_seed;
  params.validate();

  gd::Spins initial;
  if (!o.init.empty()) {
    initial = gd::parse_spins(o.init);
  } else {
    gd::Rng init_rng(gd::derive_seed({o.run_seed, gd::kRunStreamTag, instance->size()}));
    initial = gd::random_initial(instance->size(), init_rng);
  }

  gd::SpinState state(*instance, initial);
  gd::Rng rng(params.run_seed);
  std::ostringstream trace;
  const auto flips = gd::descend_in_place(
      state, params, rng, [&](std::uint64_t step, std::size_t index, double energy) {
        if (!o.trace.empty())
          trace << step << ' ' << index << ' ' << gd::format_double(energy) << '\n';
      });
  if (!gd::is_stable(state))
    throw gd::InvariantError("descent ended in an unstable state");
  if (!o.trace.empty())
    write_file(o.trace, [&](std::ostream &out) { out << trace.str(); });
  std::cout << "flips=" << flips << " energy_per_spin=" << short_number(state.energy_per_spin())
            << " stable=true\n";
  return kExitOk;
}

template <typename T> std::vector<T> parse_list(const std::string &text, const char *what) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    T v{};
    if (item.empty() || !gd::detail::parse_number(item, v))
      throw gd::ValidationError(std::string(what) + ": cannot parse '" + item + "'");
    out.push_back(v);
  }
  return out;
}

struct PlanOptions {
  std::string sizes;
  std::string p_values;
  std::size_t disorder = 1;
  std::optional<std::size_t> restarts;
  std::optional<std::uint64_t> budget_flips;
  std::optional<double> budget_per_n2;
  std::uint64_t master_seed = 0;
  std::string tie_break = "lowest-index";
  std::string out_csv;
  std::string out_json;
};

int cmd_experiment(gd::Protocol protocol, const PlanOptions &o, std::size_t workers) {
  gd::ExperimentPlan plan;
  plan.protocol = protocol;
  plan.sizes = parse_list<std::size_t>(o.sizes, "sizes");
  plan.p_values = parse_list<double>(o.p_values, "p-values");
  plan.num_disorder = o.disorder;
  plan.restarts.constant = o.restarts;
  plan.budget_flips = o.budget_flips;
  plan.budget_per_n2 = o.budget_per_n2;
  plan.master_seed = o.master_seed;
  plan.tie_break = gd::parse_tie_break(o.tie_break);
  plan.validate();

  gd::ExecutionOptions exec;
  exec.workers = workers;
  const auto result = gd::run_experiment(plan, exec);

  std::ostringstream csv;
  gd::write_results_csv(csv, result);
  if (!o.out_csv.empty())
    write_file(o.out_csv, [&](std::ostream &out) { out << csv.str(); });
  if (!o.out_json.empty())
    write_file(o.out_json, [&](std::ostream &out) { out << gd::results_to_json(result).dump(2) << '\n'; });

  if (o.out_csv.empty()) {
    std::cout << csv.str();
  } else {
    for (const auto &c : result.cells)
      std::cout << gd::to_string(c.protocol) << " N=" << c.n << " P=" << short_number(c.p)
                << " tau=" << short_number(c.tau_mean) << " +/- " << short_number(c.tau_stderr)
                << " e_min=" << short_number(c.e_min_mean) << " +/- "
                << short_number(c.e_min_stderr) << '\n';
  }
  return kExitOk;
}

struct FitOptions {
  std::string in_csv;
  std::optional<double> p;
  std::string out_json;
};

int cmd_fit(const FitOptions &o) {
  std::ifstream in(o.in_csv, std::ios::binary);
  if (!in)
    throw gd::Error("cannot open results CSV '" + o.in_csv + "'");
  const auto rows = gd::read_results_csv(in);

  std::optional<double> p = o.p;
  if (!p) {
    for (const auto &r : rows) {
      if (p && *p != r.p)
        throw gd::ValidationError("results CSV holds several P values; select one with --p");
      p = r.p;
    }
  }
  std::vector<gd::ScalingPoint> points;
  std::string protocol;
  for (const auto &r : rows)
    if (p && std::abs(r.p - *p) <= 1e-12) {
      points.push_back({r.n, r.tau_mean, r.tau_stderr});
      protocol = r.protocol;
    }
  const auto fit = gd::fit_power_law(points);

  if (!o.out_json.empty()) {
    auto doc = gd::fit_to_json(fit, protocol, *p);
    doc["tool"] = gd::kToolName;
    doc["version"] = gd::kToolVersion;
    doc["plan"] = {{"in_csv", o.in_csv}, {"P", *p}};
    write_file(o.out_json, [&](std::ostream &out) { out << doc.dump(2) << '\n'; });
  }
  std::cout << "alpha=" << short_number(fit.alpha) << " +/- " << short_number(fit.alpha_stderr)
            << '\n';
  return kExitOk;
}

struct OracleOptions {
  std::size_t n = 0;
  std::size_t disorder = 1;
  std::uint64_t seed = 0;
  bool basin = false;
  double p = 1.0;
  std::uint64_t run_seed = 0;
  std::string basin_csv;
  std::string out_json;
};

int cmd_oracle(const OracleOptions &o) {
  if (o.n < 2)
    throw gd::InvalidSizeError("--n must be at least 2");
  if (o.n > gd::kMaxExactSize)
    throw gd::GuardError("refusing exhaustive enumeration of 2^" + std::to_string(o.n) +
                         " configurations; the oracle is limited to n <= " +
                         std::to_string(gd::kMaxExactSize));
  if (o.basin && o.n > gd::kMaxBasinSize)
    throw gd::GuardError("refusing basin census at n = " + std::to_string(o.n) +
                         "; limited to n <= " + std::to_string(gd::kMaxBasinSize));
  gd::DescentParams params;
  params.p_greedy = o.p;
  params.run_seed = o.run_seed;
  params.validate();

  const auto q = gd::quenched_ground_energy(o.n, o.disorder, o.seed);
  for (std::size_t d = 0; d < q.per_instance.size(); ++d)
    std::cout << "instance=" << d << " seed=" << q.instance_seeds[d]
              << " e_gs=" << short_number(q.per_instance[d]) << '\n';
  std::cout << "n=" << o.n << " disorder=" << o.disorder << " mean=" << short_number(q.mean)
            << " stderr=" << short_number(q.stderr_mean) << '\n';

  nlohmann::ordered_json doc;
  doc["tool"] = gd::kToolName;
  doc["version"] = gd::kToolVersion;
  doc["plan"] = {{"n", o.n},        {"disorder", o.disorder}, {"seed", o.seed},
                 {"basin", o.basin}, {"p", o.p},              {"run_seed", o.run_seed}};
  doc["ground_energy_mean"] = q.mean;
  doc["ground_energy_stderr"] = q.stderr_mean;
  doc["per_instance"] = q.per_instance;

  if (o.basin) {
    // The census covers the first disorder realization.
    const auto instance = gd::generate_instance(o.n, q.instance_seeds.front());
    const auto report = gd::basin_census(instance, params);
    std::ostringstream csv;
    gd::write_basin_csv(csv, report);
    std::cout << "basin_instance=0 stable_states=" << report.entries.size()
              << " ground_fraction=" << short_number(report.ground_fraction) << '\n';
    if (o.basin_csv.empty())
      std::cout << csv.str();
    else
      write_file(o.basin_csv, [&](std::ostream &out) { out << csv.str(); });
    doc["basin"] = {{"instance_index", 0},
                    {"stable_states", report.entries.size()},
                    {"total", report.total},
                    {"ground_fraction", report.ground_fraction}};
  }
  if (!o.out_json.empty())
    write_file(o.out_json, [&](std::ostream &out) { out << doc.dump(2) << '\n'; });
  return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Greedy, reluctant and mixed descent on Sherrington-Kirkpatrick spin glasses",
               "glassdescent"};
  app.set_version_flag("--version", std::string(gd::kToolName) + " " + gd::kToolVersion);
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  std::string config_path;
  std::size_t workers = 0;
  auto add_common = [&](CLI::App *sub) {
    sub->add_option("--config", config_path, "flat key = value file; flags override it");
  };
  auto add_workers = [&](CLI::App *sub) {
    sub->add_option("--workers", workers,
                    "worker threads (default: $GLASSDESCENT_WORKERS or all cores)");
  };

  GenOptions gen;
  auto *gen_cmd = app.add_subcommand("gen", "generate an instance file");
  gen_cmd->add_option("--n", gen.n, "number of spins")->required();
  gen_cmd->add_option("--seed", gen.seed, "disorder seed");
  gen_cmd->add_option("--out", gen.out, "output path")->required();
  add_common(gen_cmd);

  DescendOptions desc;
  auto *desc_cmd = app.add_subcommand("descend", "run one descent to a stable state");
  desc_cmd->add_option("--instance", desc.instance_path, "instance file");
  desc_cmd->add_option("--n", desc.n, "generate an instance of this size instead");
  desc_cmd->add_option("--seed", desc.seed, "disorder seed used with --n");
  desc_cmd->add_option("--p", desc.p, "probability of a greedy move");
  desc_cmd->add_option("--run-seed", desc.run_seed, "seed of the run stream");
  desc_cmd->add_option("--init", desc.init, "initial configuration, e.g. +-+");
  desc_cmd->add_option("--tie-break", desc.tie_break, "lowest-index or random");
  desc_cmd->add_option("--trace", desc.trace, "write 'step index energy' lines here");
  add_common(desc_cmd);

  PlanOptions plan_opts;
  auto add_plan = [&](CLI::App *sub, bool budget) {
    sub->add_option("--sizes", plan_opts.sizes, "comma-separated N values");
    sub->add_option("--p-values", plan_opts.p_values, "comma-separated P values");
    sub->add_option("--disorder", plan_opts.disorder, "disorder realizations per (N, P)");
    if (budget) {
      sub->add_option("--budget-flips", plan_opts.budget_flips, "flip budget per instance");
      sub->add_option("--budget-per-n2", plan_opts.budget_per_n2,
                      "flip budget per instance as a multiple of N^2");
    } else {
      sub->add_option("--restarts", plan_opts.restarts, "starts per instance (default N)");
    }
    sub->add_option("--master-seed", plan_opts.master_seed, "master seed");
    sub->add_option("--tie-break", plan_opts.tie_break, "lowest-index or random");
    sub->add_option("--out-csv", plan_opts.out_csv, "results CSV path");
    sub->add_option("--out-json", plan_opts.out_json, "results JSON path");
    add_common(sub);
    add_workers(sub);
  };
  auto *tau_cmd = app.add_subcommand("tau-scan", "mean relaxation time over (N, P)");
  add_plan(tau_cmd, false);
  auto *restart_cmd =
      app.add_subcommand("fixed-restarts", "lowest energy for a fixed number of starts");
  add_plan(restart_cmd, false);
  auto *budget_cmd =
      app.add_subcommand("fixed-budget", "lowest energy for a fixed flip budget");
  add_plan(budget_cmd, true);

  FitOptions fit;
  auto *fit_cmd = app.add_subcommand("fit", "fit tau(N) ~ N^alpha to a tau-scan CSV");
  fit_cmd->add_option("--in-csv", fit.in_csv, "results CSV")->required();
  fit_cmd->add_option("--p", fit.p, "P value to fit");
  fit_cmd->add_option("--out-json", fit.out_json, "fit report path");
  add_common(fit_cmd);

  OracleOptions orc;
  auto *oracle_cmd = app.add_subcommand("oracle", "exact ground states by enumeration");
  oracle_cmd->add_option("--n", orc.n, "number of spins")->required();
  oracle_cmd->add_option("--disorder", orc.disorder, "disorder realizations");
  oracle_cmd->add_option("--seed", orc.seed, "master seed");
  oracle_cmd->add_flag("--basin", orc.basin, "basin census of the first instance");
  oracle_cmd->add_option("--p", orc.p, "probability of a greedy move in the census");
  oracle_cmd->add_option("--run-seed", orc.run_seed, "run seed for stochastic census");
  oracle_cmd->add_option("--basin-csv", orc.basin_csv, "basin CSV path (default stdout)");
  oracle_cmd->add_option("--out-json", orc.out_json, "report JSON path");
  add_common(oracle_cmd);

  try {
    auto args = expand_config(argc, argv);
    std::vector<const char *> cargs;
    for (const auto &a : args)
      cargs.push_back(a.c_str());
    workers = default_workers();
    try {
      app.parse(static_cast<int>(cargs.size()), cargs.data());
    } catch (const CLI::ParseError &e) {
      return app.exit(e) == 0 ? kExitOk : kExitInput;
    }

    if (gen_cmd->parsed())
      return cmd_gen(gen);
    if (desc_cmd->parsed())
      return cmd_descend(desc);
    if (tau_cmd->parsed())
      return cmd_experiment(gd::Protocol::TauScan, plan_opts, workers);
    if (restart_cmd->parsed())
      return cmd_experiment(gd::Protocol::FixedRestarts, plan_opts, workers);
    if (budget_cmd->parsed())
      return cmd_experiment(gd::Protocol::FixedBudget, plan_opts, workers);
    if (fit_cmd->parsed())
      return cmd_fit(fit);
    if (oracle_cmd->parsed())
      return cmd_oracle(orc);
  } catch (const gd::InvariantError &e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const gd::Error &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception &e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInvariant;
  }
  return kExitInput;
}
