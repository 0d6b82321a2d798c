#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace fraclap {

/// 17-significant-digit decimal rendering used by every artifact.
std::string fmt_g(double v);

/// Collects the artifacts of one run: CSV tables, a key = value summary and
/// a machine-readable verdict. Files carry LF endings and a seed header so a
/// (config, seed) pair reproduces them byte for byte.
class ArtifactWriter {
 public:
  ArtifactWriter(std::filesystem::path dir, std::uint64_t seed);

  /// Opens dir/name with the seed header and a header row; write data rows
  /// through csv_row.
  std::ofstream open_csv(const std::string& name, const std::string& header);
  static void csv_row(std::ofstream& out, const std::vector<std::string>& cells);

  void summary(const std::string& key, const std::string& value);
  void summary(const std::string& key, double value);
  void summary(const std::string& key, int value);

  /// Records a named pass/fail check; margin and threshold land in both the
  /// summary and the verdict file.
  void check(const std::string& name, bool pass);
  void check_ge(const std::string& name, double value, double threshold);
  void check_le(const std::string& name, double value, double threshold);

  bool all_passed() const { return failures_ == 0; }
  int failures() const { return failures_; }

  /// Writes summary.txt and verdict.txt; returns 0 when every check passed,
  /// 1 otherwise.
  int finalize();

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
  std::uint64_t seed_;
  std::vector<std::string> summary_lines_;
  std::vector<std::string> verdict_lines_;
  int failures_ = 0;
};

}  // namespace fraclap
