// Seeded, reproducible record of a verification run.
#pragma once

#include "locclab/tensor.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#ifndef LOCCLAB_VERSION
#define LOCCLAB_VERSION "0.1.0"
#endif

namespace locclab {

inline constexpr const char* kArtifactVersion = LOCCLAB_VERSION;

/// One threshold comparison: metrics[metric] <= tolerances[tolerance] (or >=).
struct Check {
  enum class Relation { AtMost, AtLeast };
  std::string metric;
  Relation relation;
  std::string tolerance;
};

class ExperimentReport {
 public:
  ExperimentReport(std::string command, Seed seed) : command_(std::move(command)), seed_(seed) {}

  void set_parameter(const std::string& key, nlohmann::json value) { parameters_[key] = std::move(value); }
  void set_metric(const std::string& key, double value) { metrics_[key] = value; }
  void set_tolerance(const std::string& key, double value) { tolerances_[key] = value; }
  void set_section(const std::string& key, nlohmann::json value) { sections_[key] = std::move(value); }
  void set_duration_ms(double ms) { duration_ms_ = ms; }

  /// Records `metric <= bound` with the bound registered as a tolerance.
  void require_at_most(const std::string& metric, const std::string& tolerance, double bound) {
    set_tolerance(tolerance, bound);
    checks_.push_back({metric, Check::Relation::AtMost, tolerance});
  }

  void require_at_least(const std::string& metric, const std::string& tolerance, double bound) {
    set_tolerance(tolerance, bound);
    checks_.push_back({metric, Check::Relation::AtLeast, tolerance});
  }

  /// Absorbs another report's metrics, tolerances and checks under a prefix.
  void merge(const ExperimentReport& other, const std::string& prefix) {
    for (const auto& [k, v] : other.metrics_) metrics_[prefix + k] = v;
    for (const auto& [k, v] : other.tolerances_) tolerances_[prefix + k] = v;
    for (const auto& c : other.checks_) checks_.push_back({prefix + c.metric, c.relation, prefix + c.tolerance});
  }

  const std::string& command() const { return command_; }
  Seed seed() const { return seed_; }
  const std::map<std::string, double>& metrics() const { return metrics_; }
  const std::map<std::string, double>& tolerances() const { return tolerances_; }
  const std::vector<Check>& checks() const { return checks_; }
  const nlohmann::json& parameters() const { return parameters_; }

  double metric(const std::string& key) const { return metrics_.at(key); }

  /// Derived purely from metrics, tolerances and checks. A missing or
  /// non-finite metric fails its check.
  bool pass() const {
    for (const auto& c : checks_) {
      const auto m = metrics_.find(c.metric);
      const auto t = tolerances_.find(c.tolerance);
      if (m == metrics_.end() || t == tolerances_.end() || !std::isfinite(m->second)) return false;
      const bool ok = c.relation == Check::Relation::AtMost ? m->second <= t->second : m->second >= t->second;
      if (!ok) return false;
    }
    return true;
  }

  /// Names of checks that do not hold.
  std::vector<std::string> failed_checks() const {
    std::vector<std::string> out;
    for (const auto& c : checks_) {
      ExperimentReport single(command_, seed_);
      single.metrics_ = metrics_;
      single.tolerances_ = tolerances_;
      single.checks_ = {c};
      if (!single.pass()) out.push_back(c.metric);
    }
    return out;
  }

  nlohmann::json to_json() const {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : checks_) {
      checks.push_back({{"metric", c.metric},
                        {"relation", c.relation == Check::Relation::AtMost ? "<=" : ">="},
                        {"tolerance", c.tolerance}});
    }
    nlohmann::json j = {{"command", command_},
                        {"seed", seed_.master},
                        {"parameters", parameters_.is_null() ? nlohmann::json::object() : parameters_},
                        {"metrics", metrics_},
                        {"tolerances", tolerances_},
                        {"checks", checks},
                        {"pass", pass()},
                        {"duration_ms", duration_ms_},
                        {"artifact_version", kArtifactVersion}};
    for (const auto& [k, v] : sections_.items()) j[k] = v;
    return j;
  }

 private:
  std::string command_;
  Seed seed_;
  nlohmann::json parameters_ = nlohmann::json::object();
  nlohmann::json sections_ = nlohmann::json::object();
  std::map<std::string, double> metrics_;
  std::map<std::string, double> tolerances_;
  std::vector<Check> checks_;
  double duration_ms_ = 0.0;
};

/// Wall-clock timer for report durations.
class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace locclab
