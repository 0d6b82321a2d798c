#pragma once

#include "fraclap/config.hpp"

namespace fraclap {

struct RunOptions {
  bool verbose = false;
  bool seed_overridden = false;
  std::uint64_t seed = 0;
  std::string out_dir;  // highest precedence when nonempty
};

/// Executes cfg.command, writes the artifact set under the resolved output
/// directory and prints a one-line verdict per check when verbose. Returns 0
/// when every check passed, 1 otherwise. Configuration errors are thrown as
/// ConfigError before anything is written.
int run_command(RunConfig cfg, const RunOptions& opts);

}  // namespace fraclap
