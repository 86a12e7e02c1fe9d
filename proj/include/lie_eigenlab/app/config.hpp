#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lie_eigenlab/common.hpp"
#include "lie_eigenlab/app/report.hpp"

namespace lie::app {

/// Bad flags, unreadable files or malformed config; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::string group = "su";
  int n = 3;
  std::string family = "standard";
  std::string gen_a;  // vector file
  std::string gen_b;
  int extended_s = 2;
  bool inject_corruption = false;
  std::string poly_p;  // polynomial files
  std::string poly_q;
  std::string h_matrix;  // file path, "random-distinct" or "diag:v1,v2,..."
  int samples = 50;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  double h_step = 1e-3;
  int spot_checks = 5;
  std::string out;
  std::string report;  // envelope path when --out holds CSV or PLY
  std::string format = "json";
  std::vector<std::string> only;

  json to_json() const;
  /// Positivity of numeric fields, known format, seed present where needed.
  void validate() const;
  bool randomized() const;
};

/// Reads sections [run], [group], [family], [morphism], [manifold] from an
/// INI file. Relative paths are resolved against the file's directory.
void apply_ini(RunConfig& config, const std::string& path);

/// Whitespace separated "re im" pairs, row-major. The matrix must be square.
Mat read_matrix_file(const std::string& path);
CVec read_vector_file(const std::string& path);

/// Resolves the H source of a config. `n` is used for random-distinct.
Mat resolve_h_matrix(const RunConfig& config);

std::vector<std::string> split_list(const std::string& text);

}  // namespace lie::app
