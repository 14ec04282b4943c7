#ifndef UGRFS_CLI_HPP
#define UGRFS_CLI_HPP

#include "ugrfs/solver.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace ugrfs {

/// Resolved settings of one CLI invocation: defaults, then the JSON config
/// file, then explicit flags.
struct RunConfig {
  std::filesystem::path manifest;
  std::filesystem::path out = "out";
  Hyperparams hp;
  int folds = 5;
  int p_min = 1;
  int p_max = 20;
  int jobs = 1;
  Index knn_k = 10;
  double knn_s = 1.0;
  std::vector<double> grid = {1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3};
  std::vector<std::string> tune_params = {"alpha", "beta", "gamma", "delta"};
  bool export_matrices = false;
};

/// Number of worker threads when neither the config nor --jobs sets one.
/// Reads UGRFS_JOBS, falling back to 1.
int default_jobs();

/// Entry point behind the `ugrfs` executable. `args` excludes the program name.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ugrfs

#endif  // UGRFS_CLI_HPP
