#pragma once

// Machine-readable verification report: named metrics with thresholds, a
// config echo and version strings. Serialized as JSON; non-finite values are
// written as the strings "nan", "inf", "-inf" so the round trip is exact.

#include <map>
#include <string>
#include <vector>

namespace heun::cli {

enum class Relation {
  Less,     // pass iff value < threshold
  Greater,  // pass iff value > threshold
  AtLeast,  // pass iff value >= threshold
  Info,     // always passes
};

struct Metric {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  Relation relation = Relation::Info;

  bool pass() const;
  bool operator==(const Metric&) const;
};

struct Report {
  std::string command;
  std::map<std::string, std::string> config;
  std::map<std::string, std::string> versions;
  std::vector<Metric> metrics;
  std::vector<std::string> warnings;

  void check_less(std::string name, double value, double threshold);
  void check_greater(std::string name, double value, double threshold);
  void check_at_least(std::string name, double value, double threshold);
  void info(std::string name, double value);
  /// Appends other's metrics and warnings with "<other.command>." prefixes.
  void absorb(const Report& other);
  bool passed() const;
  const Metric* find(const std::string& name) const;

  bool operator==(const Report&) const;
};

std::map<std::string, std::string> version_info();

std::string to_json_text(const Report& r);
/// Throws heun::Error(InvalidArgument) on malformed input.
Report report_from_json_text(const std::string& text);

/// One "PASS|FAIL|INFO name value threshold" line per metric.
std::string summary_text(const Report& r);

}  // namespace heun::cli
