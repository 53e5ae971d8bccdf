#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ghostpol/io.hpp"

namespace ghostpol::cli {

enum ExitCode : int {
  kOk = 0,
  kInvalidInput = 1,
  kNonDiscriminable = 2,
  kVerifyFailed = 3,
};

/// Where the probe/bank pair comes from.
enum class DesignSource { Optimize, Identity, Document };

struct RunConfig {
  ObjectSet objects;
  std::string objects_label;
  double q = 1.0;
  DesignSource design_source = DesignSource::Optimize;
  Design design;  ///< populated for Identity and Document sources
  std::size_t grid_points = 180;
  double angle_tol = 0.0;  ///< <= 0 selects two grid spacings
  int outputs = 3;
  std::uint64_t seed = 1;
  int trials = 1000;
  std::vector<std::int64_t> budgets{100, 1000, 10000, 1000000};
  std::filesystem::path out_dir = "out";
  OptimizerConfig optimizer;
};

/// Parses a run configuration document. Relative paths resolve against `base_dir`.
RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& path);

/// Resolves the design, running the optimizer when the source is Optimize.
DesignResult resolve_design(const RunConfig& cfg, std::ostream& log);

int cmd_simulate(const RunConfig& cfg, std::ostream& out);
int cmd_optimize(const RunConfig& cfg, std::ostream& out);
int cmd_identify(const RunConfig& cfg, const std::filesystem::path& counts_path, std::ostream& out);
int cmd_noise_sweep(const RunConfig& cfg, std::ostream& out);
int cmd_verify(std::uint64_t seed, std::ostream& out);

/// Full command-line entry point (`ghostpol <subcommand> ...`).
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace ghostpol::cli
