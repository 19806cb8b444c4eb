#include <string>

#include "CLI11.hpp"

#include "cct/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"cct: cosmological time and CMC barrier toolkit for constant-curvature domains"};
  app.require_subcommand(1);

  std::string scenario_file;
  std::string out_dir = ".";
  int threads = 1;
  bool verbose = false;

  CLI::App* run = app.add_subcommand("run", "execute a scenario file");
  run->add_option("scenario", scenario_file, "scenario JSON file")->required();
  run->add_option("--out", out_dir, "output directory for CSV/JSON artifacts");
  run->add_option("--threads", threads, "worker threads for sample-parallel tasks");
  run->add_flag("--verbose", verbose, "print task progress");

  CLI11_PARSE(app, argc, argv);

  cct::RunOptions options;
  options.out_dir = out_dir;
  options.threads = threads;
  options.verbose = verbose;
  return cct::run_scenario(scenario_file, options);
}
