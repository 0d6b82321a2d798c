#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "fraclap/grid.hpp"
#include "fraclap/obstacle.hpp"

namespace fraclap {

/// Parse or validation failure; the message carries section, key and line.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Spatial profile plus optional time modulation, see README for the grammar.
struct ProfileSpec {
  bool present = false;
  std::string kind = "zero";  // zero|constant|eigenmode|bump|hat|random|file
  double amplitude = 1.0;
  int mode = 1;
  std::vector<double> center;  // empty: box midpoint
  double width = 0.0;          // 0: min box length / 5
  double decay = 1.0;          // spectral damping of random profiles
  std::string path;
  std::string time_shape = "constant";  // constant|ramp|sin (sources only)
  double rate = 1.0;                    // ramp slope
  double frequency = 1.0;               // sin frequency
  double sample_dt = 0.0;               // 0: min step / 8
};

struct RunConfig {
  std::string command;
  std::uint64_t seed = 0;

  DomainSpec domain{1, {1.0}, {32}};
  double s = 0.5;
  double shift = 0.0;
  SolverConfig solver;

  double t_end = 1.0;
  int steps = 20;
  std::vector<double> times;  // explicit grid, overrides t_end/steps

  ProfileSpec source, source2, obstacle, obstacle2, initial, initial2, fstar;

  std::vector<int> ext_levels{32, 64, 128};
  double ext_grading = 1.15;
  double ext_height_factor = 12.0;

  double horizon = 100.0;
  double step = 0.1;
  double stop_tol = 1e-8;
  double asymp_tol = 1e-3;

  std::string out_dir = "out";
};

/// Parses the key = value format; throws ConfigError with line numbers on
/// unknown keys, duplicates, malformed values or failed validation.
RunConfig parse_config(const std::string& text);

RunConfig parse_config_file(const std::string& path);

}  // namespace fraclap
