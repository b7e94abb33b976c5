// Command-line front end: run, stationary, sweep-eps, mms.
#include "ephydro/config.hpp"
#include "ephydro/harness.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  using namespace ephydro;

  CLI::App app{"Viscous Euler-Poisson simulator and verification harness"};
  app.require_subcommand(1);

  std::string out_dir;
  bool quiet = false, verbose = false;
  app.add_option("--out-dir", out_dir, "Override the output directory from the config");
  auto* q = app.add_flag("--quiet", quiet, "Only report errors");
  app.add_flag("--verbose", verbose, "Extra progress output")->excludes(q);

  std::string config;
  std::string eps_list, res_list;

  auto* run = app.add_subcommand("run", "Simulate and run the enabled diagnostics");
  run->add_option("config", config, "Config file")->required();

  auto* stat = app.add_subcommand("stationary", "Solve the stationary problem");
  stat->add_option("config", config, "Config file")->required();

  auto* sweep = app.add_subcommand("sweep-eps", "Viscosity sweep with L1 space-time distances");
  sweep->add_option("config", config, "Config file")->required();
  sweep->add_option("--eps", eps_list, "Comma-separated, strictly decreasing epsilons")->required();

  auto* mms = app.add_subcommand("mms", "Manufactured-solution convergence study");
  mms->add_option("config", config, "Config file")->required();
  mms->add_option("--resolutions", res_list, "Comma-separated N values, each doubling the last");

  for (auto* sub : {run, stat, sweep, mms}) {
    sub->add_option("--out-dir", out_dir, "Override the output directory from the config");
    sub->add_flag("--quiet", quiet, "Only report errors");
    sub->add_flag("--verbose", verbose, "Extra progress output");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(kExitConfig);
  }

  RunOptions opts;
  if (!out_dir.empty()) opts.out_dir = out_dir;
  opts.verbosity = quiet ? Verbosity::quiet : verbose ? Verbosity::verbose : Verbosity::normal;

  try {
    if (*run) return cmd_run(config, opts);
    if (*stat) return cmd_stationary(config, opts);
    if (*sweep) return cmd_sweep_eps(config, parse_double_list(eps_list), opts);
    if (*mms) return cmd_mms(config, res_list.empty() ? std::vector<std::size_t>{} : parse_size_list(res_list), opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}
