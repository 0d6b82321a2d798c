#include <CLI11.hpp>
#include <exception>
#include <iostream>

#include "fraclap/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Spectral fractional Laplacian toolbox: constrained solves, "
               "positive-part evolution and extension cross-checks"};

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool verbose = false;

  app.add_option("-c,--config", config_path, "run configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  auto* seed_opt = app.add_option("-s,--seed", seed, "override the configured seed");
  app.add_option("-o,--out", out_dir, "output directory (overrides config and FRACLAP_OUT)");
  app.add_flag("-v,--verbose", verbose, "print per-check verdict lines");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    fraclap::RunConfig cfg = fraclap::parse_config_file(config_path);
    fraclap::RunOptions opts;
    opts.verbose = verbose;
    opts.seed_overridden = seed_opt->count() > 0;
    opts.seed = seed;
    opts.out_dir = out_dir;
    return fraclap::run_command(std::move(cfg), opts);
  } catch (const fraclap::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
