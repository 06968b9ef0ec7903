#include "heun/cli/report.hpp"

#include <boost/version.hpp>
#include <cmath>
#include <cstdio>

#include "heun/error.hpp"
#include "json.hpp"

namespace heun::cli {

namespace {

using nlohmann::json;

json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double number_from(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "nan") return std::nan("");
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
  }
  throw Error(ErrorCode::InvalidArgument, "report: malformed number");
}

const char* relation_name(Relation r) {
  switch (r) {
    case Relation::Less: return "<";
    case Relation::Greater: return ">";
    case Relation::AtLeast: return ">=";
    case Relation::Info: return "info";
  }
  return "info";
}

Relation relation_from(const std::string& s) {
  if (s == "<") return Relation::Less;
  if (s == ">") return Relation::Greater;
  if (s == ">=") return Relation::AtLeast;
  if (s == "info") return Relation::Info;
  throw Error(ErrorCode::InvalidArgument, "report: unknown relation '" + s + "'");
}

bool same_double(double a, double b) {
  return (std::isnan(a) && std::isnan(b)) || a == b;
}

}  // namespace

bool Metric::pass() const {
  switch (relation) {
    case Relation::Less: return value < threshold;
    case Relation::Greater: return value > threshold;
    case Relation::AtLeast: return value >= threshold;
    case Relation::Info: return true;
  }
  return false;
}

bool Metric::operator==(const Metric& o) const {
  return name == o.name && relation == o.relation && same_double(value, o.value) &&
         same_double(threshold, o.threshold);
}

void Report::check_less(std::string name, double value, double threshold) {
  metrics.push_back({std::move(name), value, threshold, Relation::Less});
}

void Report::check_greater(std::string name, double value, double threshold) {
  metrics.push_back({std::move(name), value, threshold, Relation::Greater});
}

void Report::check_at_least(std::string name, double value, double threshold) {
  metrics.push_back({std::move(name), value, threshold, Relation::AtLeast});
}

void Report::info(std::string name, double value) {
  metrics.push_back({std::move(name), value, 0.0, Relation::Info});
}

void Report::absorb(const Report& other) {
  for (const Metric& m : other.metrics) {
    Metric copy = m;
    copy.name = other.command + "." + m.name;
    metrics.push_back(std::move(copy));
  }
  for (const auto& w : other.warnings) warnings.push_back(other.command + ": " + w);
}

bool Report::passed() const {
  for (const Metric& m : metrics) {
    if (!m.pass()) return false;
  }
  return true;
}

const Metric* Report::find(const std::string& name) const {
  for (const Metric& m : metrics) {
    if (m.name == name) return &m;
  }
  return nullptr;
}

bool Report::operator==(const Report& o) const {
  return command == o.command && config == o.config && versions == o.versions &&
         metrics == o.metrics && warnings == o.warnings;
}

std::map<std::string, std::string> version_info() {
  std::map<std::string, std::string> v;
  v["heunspec"] = HEUNSPEC_VERSION;
  v["boost"] = std::to_string(BOOST_VERSION / 100000) + "." +
               std::to_string(BOOST_VERSION / 100 % 1000) + "." + std::to_string(BOOST_VERSION % 100);
  v["compiler"] = __VERSION__;
  v["cxx_standard"] = std::to_string(__cplusplus);
  return v;
}

std::string to_json_text(const Report& r) {
  json j;
  j["command"] = r.command;
  j["config"] = r.config;
  j["versions"] = r.versions;
  j["pass"] = r.passed();
  json metrics = json::array();
  for (const Metric& m : r.metrics) {
    metrics.push_back({{"name", m.name},
                       {"value", number(m.value)},
                       {"threshold", number(m.threshold)},
                       {"relation", relation_name(m.relation)},
                       {"pass", m.pass()}});
  }
  j["metrics"] = std::move(metrics);
  j["warnings"] = r.warnings;
  return j.dump(2) + "\n";
}

Report report_from_json_text(const std::string& text) {
  try {
    const json j = json::parse(text);
    Report r;
    r.command = j.at("command").get<std::string>();
    r.config = j.at("config").get<std::map<std::string, std::string>>();
    r.versions = j.at("versions").get<std::map<std::string, std::string>>();
    for (const json& m : j.at("metrics")) {
      r.metrics.push_back({m.at("name").get<std::string>(), number_from(m.at("value")),
                           number_from(m.at("threshold")),
                           relation_from(m.at("relation").get<std::string>())});
    }
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("report: ") + e.what());
  }
}

std::string summary_text(const Report& r) {
  std::string out;
  char line[512];
  for (const Metric& m : r.metrics) {
    const char* tag = m.relation == Relation::Info ? "INFO" : (m.pass() ? "PASS" : "FAIL");
    if (m.relation == Relation::Info) {
      std::snprintf(line, sizeof line, "%s %s = %.6g\n", tag, m.name.c_str(), m.value);
    } else {
      std::snprintf(line, sizeof line, "%s %s = %.6g (%s %.3g)\n", tag, m.name.c_str(), m.value,
                    relation_name(m.relation), m.threshold);
    }
    out += line;
  }
  for (const auto& w : r.warnings) out += "WARN " + w + "\n";
  return out;
}

}  // namespace heun::cli
