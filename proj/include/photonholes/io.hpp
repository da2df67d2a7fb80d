#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "photonholes/detection.hpp"
#include "photonholes/experiments.hpp"

namespace photonholes {

/// Malformed or out-of-range configuration. `key` is empty for structural
/// errors; `line` is 0 when the error is not tied to one line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, int line, const std::string& message);
  const std::string& key() const { return key_; }
  int line() const { return line_; }

 private:
  std::string key_;
  int line_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// `key = value` lines; `#` starts a comment. Absent keys take the values of
/// default_experiment_config(); alpha defaults to matched_alpha(xi). Angles are
/// in degrees, times in ns.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Every key, in a fixed order, parseable by parse_config.
std::string format_config(const ExperimentConfig& cfg);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double value);

std::string format_histogram(const TacHistogram& h);
TacHistogram parse_histogram(std::string_view text);
void export_histogram(const TacHistogram& h, const std::filesystem::path& path);
TacHistogram import_histogram(const std::filesystem::path& path);

/// Stable key set: visibility, S, singles_a, singles_b, zero_delay_peak,
/// mean_side_peak. Missing optional values print as `na`.
std::string format_summary(const Summary& s);

}  // namespace photonholes
