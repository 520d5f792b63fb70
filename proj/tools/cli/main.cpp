#include "run.hpp"

#include "wolffpot/parallel.hpp"
#include "wolffpot/version.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <thread>

int main(int argc, char** argv) {
  using namespace wolffpot;
  CLI::App app{"wolffpot: Wolff potentials, nonlinear integral equations and Orlicz capacities"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::string output_dir = ".";
  app.add_option("--threads", threads, "Worker threads for grid evaluations")->check(CLI::PositiveNumber);
  app.add_option("--output-dir", output_dir, "Directory receiving the report and CSV files");

  std::string config;
  auto* run = app.add_subcommand("run", "Validate and execute a config");
  run->add_option("config", config, "Path to the JSON config")->required();
  auto* validate = app.add_subcommand("validate", "Report schema and admissibility diagnostics only");
  validate->add_option("config", config, "Path to the JSON config")->required();
  app.fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  set_thread_count(threads);
  if (*run) return cli::run_command(config, output_dir, std::cout, std::cerr);
  return cli::validate_command(config, std::cout, std::cerr);
}
