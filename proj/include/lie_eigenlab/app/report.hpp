#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "json.hpp"

namespace lie::app {

using json = nlohmann::json;

inline constexpr const char* kSchema = "lie-eigenlab-report/1";
inline constexpr const char* kVersion = "0.1.0";

/// One named comparison of a measured value against a tolerance.
struct Check {
  enum class Kind { Below, Above, Within, Flag };

  std::string name;
  double measured = 0.0;
  double lower = 0.0;  // Above and Within
  double upper = 0.0;  // Below and Within
  Kind kind = Kind::Flag;
  bool pass = false;

  static Check below(std::string name, double measured, double tol);
  static Check above(std::string name, double measured, double floor);
  static Check within(std::string name, double measured, double lo, double hi);
  static Check flag(std::string name, bool ok);

  std::string describe() const;
  json to_json() const;
};

/// Versioned result envelope. Everything that varies between identical runs
/// (wall-clock times and budget warnings) lives under "timing".
class Report {
 public:
  explicit Report(std::string command);

  void set_config(json config) { config_ = std::move(config); }
  const Check& add(Check check);
  void warn(std::string message) { warnings_.push_back(std::move(message)); }
  void timing_note(std::string message) { timing_notes_.push_back(std::move(message)); }
  void set_error(const std::string& kind, const std::string& message);
  json& data() { return data_; }
  json& timing_extra() { return timing_extra_; }

  /// Marks the end of the run for the timing record.
  void finish();

  const std::string& command() const noexcept { return command_; }
  const std::vector<Check>& checks() const noexcept { return checks_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }
  bool has_error() const noexcept { return !error_.is_null(); }
  /// True iff there is no error and every check passed.
  bool passed() const;

  json to_json() const;
  /// Envelope without the timing record; equal across identical runs.
  json stable_json() const;
  std::string dump() const { return to_json().dump(2) + "\n"; }

 private:
  std::string command_;
  json config_ = json::object();
  std::vector<Check> checks_;
  std::vector<std::string> warnings_;
  std::vector<std::string> timing_notes_;
  json data_ = json::object();
  json error_;
  json timing_extra_ = json::object();
  std::chrono::system_clock::time_point started_;
  std::chrono::system_clock::time_point finished_;
  std::chrono::steady_clock::time_point clock_start_;
  double seconds_ = 0.0;
};

/// JSON number, or null for non-finite values.
json number(double x);

}  // namespace lie::app
