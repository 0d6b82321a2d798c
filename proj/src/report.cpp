#include "fraclap/report.hpp"

#include <cstdio>

namespace fraclap {

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

ArtifactWriter::ArtifactWriter(std::filesystem::path dir, std::uint64_t seed)
    : dir_(std::move(dir)), seed_(seed) {
  std::filesystem::create_directories(dir_);
}

std::ofstream ArtifactWriter::open_csv(const std::string& name, const std::string& header) {
  std::ofstream out(dir_ / name, std::ios::binary);
  out << "# seed = " << seed_ << "\n" << header << "\n";
  return out;
}

void ArtifactWriter::csv_row(std::ofstream& out, const std::vector<std::string>& cells) {
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ",";
    out << cells[i];
  }
  out << "\n";
}

void ArtifactWriter::summary(const std::string& key, const std::string& value) {
  summary_lines_.push_back(key + " = " + value);
}
void ArtifactWriter::summary(const std::string& key, double value) {
  summary(key, fmt_g(value));
}
void ArtifactWriter::summary(const std::string& key, int value) {
  summary(key, std::to_string(value));
}

void ArtifactWriter::check(const std::string& name, bool pass) {
  verdict_lines_.push_back("check." + name + " = " + (pass ? "pass" : "fail"));
  if (!pass) ++failures_;
}

void ArtifactWriter::check_ge(const std::string& name, double value, double threshold) {
  const bool pass = value >= threshold;
  summary(name, value);
  summary(name + ".threshold", ">= " + fmt_g(threshold));
  check(name, pass);
}

void ArtifactWriter::check_le(const std::string& name, double value, double threshold) {
  const bool pass = value <= threshold;
  summary(name, value);
  summary(name + ".threshold", "<= " + fmt_g(threshold));
  check(name, pass);
}

int ArtifactWriter::finalize() {
  {
    std::ofstream out(dir_ / "summary.txt", std::ios::binary);
    out << "# seed = " << seed_ << "\n";
    for (const std::string& l : summary_lines_) out << l << "\n";
  }
  {
    std::ofstream out(dir_ / "verdict.txt", std::ios::binary);
    out << "# seed = " << seed_ << "\n";
    out << "overall = " << (failures_ == 0 ? "pass" : "fail") << "\n";
    for (const std::string& l : verdict_lines_) out << l << "\n";
  }
  return failures_ == 0 ? 0 : 1;
}

}  // namespace fraclap
