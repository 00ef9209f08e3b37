#pragma once

#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>
#include <utility>
#include <vector>

namespace hlab {

/// One comparison in a report.
struct Check {
  enum class Kind {
    within,    // |value - oracle| <= tolerance
    at_most,   // value <= tolerance
    at_least,  // value >= tolerance
    holds,     // boolean property; value is 1 or 0
  };

  std::string quantity;
  Kind kind = Kind::within;
  double oracle = 0.0;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

std::string to_string(Check::Kind kind);

class ExperimentReport {
 public:
  explicit ExperimentReport(std::string id) : id_(std::move(id)) {}

  const std::string& id() const noexcept { return id_; }

  const Check& within(std::string quantity, double oracle, double value, double tolerance);
  const Check& at_most(std::string quantity, double value, double bound);
  const Check& at_least(std::string quantity, double value, double bound);
  const Check& holds(std::string quantity, bool ok);

  const std::vector<Check>& checks() const noexcept { return checks_; }
  /// nullptr when absent.
  const Check* find(const std::string& quantity) const;
  /// AND of all checks; an empty report passes.
  bool verdict() const;

  /// Echo of the inputs; enough to re-run the experiment.
  nlohmann::json& inputs() { return inputs_; }
  const nlohmann::json& inputs() const { return inputs_; }
  /// Informational numbers that are not pass/fail.
  nlohmann::json& metrics() { return metrics_; }
  const nlohmann::json& metrics() const { return metrics_; }

  /// CSV side-file contents keyed by a short name.
  void attach(std::string name, std::string csv);
  const std::vector<std::pair<std::string, std::string>>& attachments() const { return attachments_; }

  void set_runtime(double seconds) { runtime_ = seconds; }
  double runtime() const noexcept { return runtime_; }

  /// Everything except run metadata; identical across thread counts for fixed inputs.
  nlohmann::json payload() const;
  /// payload() plus "meta": {timestamp, runtime_seconds}.
  nlohmann::json to_json(const std::string& timestamp) const;

 private:
  std::string id_;
  std::vector<Check> checks_;
  nlohmann::json inputs_ = nlohmann::json::object();
  nlohmann::json metrics_ = nlohmann::json::object();
  std::vector<std::pair<std::string, std::string>> attachments_;
  double runtime_ = 0.0;
};

/// UTC "YYYYMMDDTHHMMSSZ".
std::string utc_timestamp();

/// Writes {id}-{timestamp}-{seed}.json and {id}-{timestamp}-{seed}-{name}.csv into dir,
/// each through a temporary file and a rename. Returns the JSON path.
std::filesystem::path write_report(const ExperimentReport& report, const std::filesystem::path& dir,
                                   std::uint64_t seed, const std::string& timestamp = utc_timestamp());

}  // namespace hlab
