#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "tarifflab/report.hpp"

int main(int argc, char** argv) {
  CLI::App app{"tarifflab — tariff reciprocity, country typologies and demand-shift scenarios"};
  app.require_subcommand(1);

  std::string data;
  std::string scenario;
  std::string out = "out";
  std::string run_id;
  tarifflab::report::ClusterOptions cluster_options;

  auto add_run_options = [&](CLI::App* cmd) {
    cmd->add_option("--out", out, "output directory")->capture_default_str();
    cmd->add_option("--run-id", run_id, "pin the run id (default: UTC timestamp)");
  };

  auto* regress = app.add_subcommand("regress", "fit the reciprocity regression");
  regress->add_option("--data", data, "country CSV file")->required();
  add_run_options(regress);

  auto* cluster = app.add_subcommand("cluster", "k-means country typologies");
  cluster->add_option("--data", data, "country CSV file")->required();
  cluster->add_option("--k", cluster_options.k, "number of clusters")->capture_default_str();
  cluster->add_option("--seed", cluster_options.seed, "RNG seed")->capture_default_str();
  cluster->add_option("--restarts", cluster_options.restarts, "k-means restarts")
      ->capture_default_str();
  cluster->add_flag("--both-tariffs", cluster_options.both_tariffs,
                    "also cluster on the tariff charged to the USA");
  add_run_options(cluster);

  auto* simulate = app.add_subcommand("simulate", "demand-shift scenario projection");
  simulate->add_option("--scenario", scenario, "scenario JSON file")->required();
  add_run_options(simulate);

  auto* cld = app.add_subcommand("cld", "balancing-loop tariff trajectory");
  cld->add_option("--scenario", scenario, "scenario JSON file with a 'cld' block")->required();
  add_run_options(cld);

  CLI11_PARSE(app, argc, argv);

  tarifflab::report::RunOptions run;
  run.out_dir = out;
  run.run_id = run_id;

  try {
    if (regress->parsed()) {
      tarifflab::report::cmd_regress(data, run);
    } else if (cluster->parsed()) {
      tarifflab::report::cmd_cluster(data, cluster_options, run);
    } else if (simulate->parsed()) {
      tarifflab::report::cmd_simulate(scenario, run);
    } else if (cld->parsed()) {
      tarifflab::report::cmd_cld(scenario, run);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
