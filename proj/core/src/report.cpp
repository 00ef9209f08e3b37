#include "hlab/report.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>

#include "hlab/errors.hpp"

namespace hlab {

std::string to_string(Check::Kind kind) {
  switch (kind) {
    case Check::Kind::within: return "within";
    case Check::Kind::at_most: return "at_most";
    case Check::Kind::at_least: return "at_least";
    case Check::Kind::holds: return "holds";
  }
  return "unknown";
}

const Check& ExperimentReport::within(std::string quantity, double oracle, double value,
                                      double tolerance) {
  const bool pass = std::abs(value - oracle) <= tolerance;
  checks_.push_back({std::move(quantity), Check::Kind::within, oracle, value, tolerance, pass});
  return checks_.back();
}

const Check& ExperimentReport::at_most(std::string quantity, double value, double bound) {
  checks_.push_back({std::move(quantity), Check::Kind::at_most, bound, value, bound, value <= bound});
  return checks_.back();
}

const Check& ExperimentReport::at_least(std::string quantity, double value, double bound) {
  checks_.push_back({std::move(quantity), Check::Kind::at_least, bound, value, bound, value >= bound});
  return checks_.back();
}

const Check& ExperimentReport::holds(std::string quantity, bool ok) {
  checks_.push_back({std::move(quantity), Check::Kind::holds, 1.0, ok ? 1.0 : 0.0, 0.0, ok});
  return checks_.back();
}

const Check* ExperimentReport::find(const std::string& quantity) const {
  for (const auto& c : checks_)
    if (c.quantity == quantity) return &c;
  return nullptr;
}

bool ExperimentReport::verdict() const {
  for (const auto& c : checks_)
    if (!c.pass) return false;
  return true;
}

void ExperimentReport::attach(std::string name, std::string csv) {
  attachments_.emplace_back(std::move(name), std::move(csv));
}

nlohmann::json ExperimentReport::payload() const {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : checks_)
    checks.push_back({{"quantity", c.quantity},
                      {"kind", to_string(c.kind)},
                      {"oracle", c.oracle},
                      {"value", c.value},
                      {"tolerance", c.tolerance},
                      {"pass", c.pass}});
  nlohmann::json files = nlohmann::json::array();
  for (const auto& [name, _] : attachments_) files.push_back(name);
  return {{"experiment", id_}, {"inputs", inputs_},   {"checks", checks},
          {"metrics", metrics_}, {"side_files", files}, {"verdict", verdict() ? "pass" : "fail"}};
}

nlohmann::json ExperimentReport::to_json(const std::string& timestamp) const {
  auto j = payload();
  j["meta"] = {{"timestamp", timestamp}, {"runtime_seconds", runtime_}};
  return j;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

namespace {

void write_atomically(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw ResourceError("cannot write " + tmp.string());
    out << content;
    if (!out) throw ResourceError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

std::filesystem::path write_report(const ExperimentReport& report, const std::filesystem::path& dir,
                                   std::uint64_t seed, const std::string& timestamp) {
  std::filesystem::create_directories(dir);
  const std::string stem = report.id() + "-" + timestamp + "-" + std::to_string(seed);
  for (const auto& [name, csv] : report.attachments())
    write_atomically(dir / (stem + "-" + name + ".csv"), csv);
  const auto path = dir / (stem + ".json");
  write_atomically(path, report.to_json(timestamp).dump(2) + "\n");
  return path;
}

}  // namespace hlab
