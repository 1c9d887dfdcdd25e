#include "symflow/harness/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

namespace symflow::harness {

namespace {

// JSON has no infinities or NaN; those become null.
nlohmann::ordered_json number(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

nlohmann::ordered_json named(const NamedValues& values) {
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  for (const auto& [k, v] : values) out[k] = number(v);
  return out;
}

}  // namespace

bool Report::passed() const {
  if (!halt_reason.empty()) return false;
  for (const Check& c : checks)
    if (!c.passed) return false;
  return true;
}

Check& Report::add(Check c) {
  checks.push_back(std::move(c));
  return checks.back();
}

const Check* Report::find(const std::string& name) const {
  for (const Check& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

std::string Report::to_json(bool include_timing) const {
  nlohmann::ordered_json j;
  j["suite"] = suite;
  j["seed"] = seed;
  j["passed"] = passed();
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto& [k, v] : config) cfg[k] = v;
  j["config"] = cfg;
  j["checks"] = nlohmann::ordered_json::array();
  for (const Check& c : checks) {
    nlohmann::ordered_json cj;
    cj["name"] = c.name;
    cj["passed"] = c.passed;
    cj["value"] = number(c.value);
    cj["threshold"] = number(c.threshold);
    cj["evaluated"] = c.evaluated;
    cj["violations"] = c.violations;
    if (!c.detail.empty()) cj["detail"] = c.detail;
    if (!c.offending.empty()) cj["offending"] = named(c.offending);
    j["checks"].push_back(cj);
  }
  j["metrics"] = named(metrics);
  j["warnings"] = warnings;
  if (!halt_reason.empty()) j["halt_reason"] = halt_reason;
  j["outputs"] = outputs;
  if (include_timing) j["wall_seconds"] = wall_seconds;
  return j.dump(2) + "\n";
}

std::string Report::summary() const {
  std::string out;
  char buf[512];
  for (const Check& c : checks) {
    std::snprintf(buf, sizeof buf, "%-4s %-40s value %-12.5g threshold %-12.5g (%zu/%zu violations)%s%s\n",
                  c.passed ? "PASS" : "FAIL", c.name.c_str(), c.value, c.threshold, c.violations, c.evaluated,
                  c.detail.empty() ? "" : "  ", c.detail.c_str());
    out += buf;
    if (!c.passed && !c.offending.empty()) {
      out += "       at";
      for (const auto& [k, v] : c.offending) {
        std::snprintf(buf, sizeof buf, " %s=%.17g", k.c_str(), v);
        out += buf;
      }
      out += "\n";
    }
  }
  for (const std::string& w : warnings) out += "WARN " + w + "\n";
  if (!halt_reason.empty()) out += "HALT " + halt_reason + "\n";
  std::snprintf(buf, sizeof buf, "%s: %s in %.2f s (seed %llu)\n", suite.c_str(), passed() ? "passed" : "FAILED",
                wall_seconds, static_cast<unsigned long long>(seed));
  return out + buf;
}

void Report::write(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  std::ofstream os(dir / "report.json");
  if (!os) throw std::runtime_error("cannot write " + (dir / "report.json").string());
  os << to_json();
}

}  // namespace symflow::harness
