#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace symflow::harness {

using NamedValues = std::vector<std::pair<std::string, double>>;

struct Check {
  std::string name;
  bool passed = true;
  /// Worst observed value and the threshold it is compared against.
  double value = 0.0;
  double threshold = 0.0;
  std::size_t evaluated = 0;
  std::size_t violations = 0;
  std::string detail;
  /// Parameter point of the first or worst violation.
  NamedValues offending;
};

struct Report {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<Check> checks;
  NamedValues metrics;
  std::vector<std::string> warnings;
  std::string halt_reason;
  std::vector<std::string> outputs;  ///< files written, relative to the output directory
  double wall_seconds = 0.0;

  bool passed() const;
  /// 0 when every check passed, 1 otherwise.
  int exit_status() const { return passed() ? 0 : 1; }

  Check& add(Check c);
  const Check* find(const std::string& name) const;

  std::string to_json(bool include_timing = true) const;
  /// One line per check plus warnings, for terminals.
  std::string summary() const;
  /// Writes report.json into `dir` (created if needed).
  void write(const std::filesystem::path& dir) const;
};

}  // namespace symflow::harness
