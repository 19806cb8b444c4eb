#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

namespace cct {

struct RunOptions {
  std::filesystem::path out_dir = ".";
  int threads = 1;
  bool verbose = false;
};

/// Executes the tasks of a scenario file in order, writing one CSV/JSON
/// artifact per task under out_dir and printing a summary table.
/// Exit codes: 0 all tasks pass, 1 input/schema error, 2 numerical failure
/// or bound/verdict violation.
int run_scenario(const std::filesystem::path& scenario_file, const RunOptions& options);

inline constexpr const char* kVersion = "0.1.0";

}  // namespace cct
