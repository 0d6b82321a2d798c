#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fraclap/report.hpp"

namespace fraclap {

struct CriterionResult {
  int number = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Runs the ten-part verification battery with pinned tolerances. Artifact
/// rows are written through `artifacts` when given (the CLI path); pass
/// nullptr to run check-only.
std::vector<CriterionResult> run_acceptance_suite(std::uint64_t seed, ArtifactWriter* artifacts);

}  // namespace fraclap
