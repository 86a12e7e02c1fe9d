#include "lie_eigenlab/app/report.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>

namespace lie::app {

namespace {

std::string iso8601(std::chrono::system_clock::time_point t) {
  const std::time_t raw = std::chrono::system_clock::to_time_t(t);
  std::tm utc{};
  gmtime_r(&raw, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

std::string short_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

}  // namespace

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

Check Check::below(std::string name, double measured, double tol) {
  Check c{std::move(name), measured, 0.0, tol, Kind::Below, false};
  c.pass = std::isfinite(measured) && measured < tol;
  return c;
}

Check Check::above(std::string name, double measured, double floor) {
  Check c{std::move(name), measured, floor, 0.0, Kind::Above, false};
  c.pass = std::isfinite(measured) && measured > floor;
  return c;
}

Check Check::within(std::string name, double measured, double lo, double hi) {
  Check c{std::move(name), measured, lo, hi, Kind::Within, false};
  c.pass = std::isfinite(measured) && measured >= lo && measured <= hi;
  return c;
}

Check Check::flag(std::string name, bool ok) {
  Check c{std::move(name), ok ? 1.0 : 0.0, 0.0, 0.0, Kind::Flag, ok};
  return c;
}

std::string Check::describe() const {
  switch (kind) {
    case Kind::Below: return short_number(measured) + " < " + short_number(upper);
    case Kind::Above: return short_number(measured) + " > " + short_number(lower);
    case Kind::Within:
      return short_number(measured) + " in [" + short_number(lower) + ", " + short_number(upper) + "]";
    case Kind::Flag: break;
  }
  return pass ? "true" : "false";
}

json Check::to_json() const {
  json j;
  j["name"] = name;
  j["pass"] = pass;
  switch (kind) {
    case Kind::Below:
      j["measured"] = number(measured);
      j["comparison"] = "<";
      j["tolerance"] = number(upper);
      break;
    case Kind::Above:
      j["measured"] = number(measured);
      j["comparison"] = ">";
      j["tolerance"] = number(lower);
      break;
    case Kind::Within:
      j["measured"] = number(measured);
      j["comparison"] = "in";
      j["tolerance"] = json::array({number(lower), number(upper)});
      break;
    case Kind::Flag:
      j["measured"] = pass;
      j["comparison"] = "==";
      j["tolerance"] = true;
      break;
  }
  return j;
}

Report::Report(std::string command)
    : command_(std::move(command)),
      started_(std::chrono::system_clock::now()),
      finished_(started_),
      clock_start_(std::chrono::steady_clock::now()) {}

const Check& Report::add(Check check) {
  checks_.push_back(std::move(check));
  return checks_.back();
}

void Report::set_error(const std::string& kind, const std::string& message) {
  error_ = json{{"kind", kind}, {"message", message}};
}

void Report::finish() {
  finished_ = std::chrono::system_clock::now();
  seconds_ = std::chrono::duration<double>(std::chrono::steady_clock::now() - clock_start_).count();
}

bool Report::passed() const {
  if (has_error()) return false;
  for (const auto& c : checks_)
    if (!c.pass) return false;
  return true;
}

json Report::stable_json() const {
  json j;
  j["schema"] = kSchema;
  j["version"] = kVersion;
  j["command"] = command_;
  j["config"] = config_;
  json checks = json::array();
  for (const auto& c : checks_) checks.push_back(c.to_json());
  j["checks"] = checks;
  j["data"] = data_;
  j["warnings"] = warnings_;
  if (has_error()) j["error"] = error_;
  j["verdict"] = has_error() ? "error" : (passed() ? "pass" : "fail");
  return j;
}

json Report::to_json() const {
  json j = stable_json();
  json timing = timing_extra_;
  timing["started"] = iso8601(started_);
  timing["finished"] = iso8601(finished_);
  timing["seconds"] = seconds_;
  timing["warnings"] = timing_notes_;
  j["timing"] = timing;
  return j;
}

}  // namespace lie::app
