#include "lie_eigenlab/app/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "lie_eigenlab/levelset.hpp"

namespace lie::app {

namespace fs = std::filesystem;

namespace {

std::vector<cplx> read_pairs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::vector<cplx> values;
  double re = 0.0, im = 0.0;
  while (in >> re) {
    if (!(in >> im)) throw ConfigError(path + ": odd number of values, expected \"re im\" pairs");
    values.emplace_back(re, im);
  }
  if (!in.eof()) throw ConfigError(path + ": non-numeric content");
  if (values.empty()) throw ConfigError(path + ": no entries");
  return values;
}

std::string resolve(const fs::path& base, const std::string& value) {
  if (value.empty() || value == "random-distinct" || value.rfind("diag:", 0) == 0) return value;
  const fs::path p(value);
  return p.is_absolute() ? value : (base / p).string();
}

}  // namespace

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  for (char c : text + ",") {
    if (c == ',' || c == ' ') {
      if (!item.empty()) out.push_back(item);
      item.clear();
    } else {
      item += c;
    }
  }
  return out;
}

json RunConfig::to_json() const {
  json j;
  j["command"] = command;
  j["group"] = group;
  j["n"] = n;
  j["family"] = family;
  j["gen_a"] = gen_a;
  j["gen_b"] = gen_b;
  j["extended_s"] = extended_s;
  j["inject_corruption"] = inject_corruption;
  j["poly_p"] = poly_p;
  j["poly_q"] = poly_q;
  j["h_matrix"] = h_matrix;
  j["samples"] = samples;
  j["seed"] = seed ? json(*seed) : json(nullptr);
  j["tol"] = tol ? number(*tol) : json(nullptr);
  j["h_step"] = h_step;
  j["spot_checks"] = spot_checks;
  j["format"] = format;
  j["only"] = only;
  return j;
}

bool RunConfig::randomized() const {
  return command == "verify-family" || command == "verify-morphism" || command == "sample-manifold";
}

void RunConfig::validate() const {
  if (n <= 0) throw ConfigError("--n must be positive");
  if (samples <= 0) throw ConfigError("--samples must be positive");
  if (tol && !(*tol > 0.0)) throw ConfigError("--tol must be positive");
  if (!(h_step > 0.0)) throw ConfigError("--h-step must be positive");
  if (spot_checks < 0) throw ConfigError("--spot-checks must be non-negative");
  if (extended_s <= 0) throw ConfigError("--s must be positive");
  if (format != "json" && format != "csv" && format != "ply") throw ConfigError("--format must be json, csv or ply");
  if (format != "json" && command != "sample-manifold") throw ConfigError("csv and ply output apply to sample-manifold only");
  if (randomized() && !seed) throw ConfigError(command + " is randomized and needs --seed");
}

void apply_ini(RunConfig& c, const std::string& path) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(path, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  const fs::path base = fs::path(path).parent_path();
  try {
    for (const auto& [section, body] : tree) {
      for (const auto& [key, node] : body) {
        const std::string v = node.get_value<std::string>();
        const std::string k = section + "." + key;
        if (k == "run.command") c.command = v;
        else if (k == "run.samples") c.samples = node.get_value<int>();
        else if (k == "run.seed") c.seed = node.get_value<std::uint64_t>();
        else if (k == "run.tol") c.tol = node.get_value<double>();
        else if (k == "run.out") c.out = resolve(base, v);
        else if (k == "run.report") c.report = resolve(base, v);
        else if (k == "run.format") c.format = v;
        else if (k == "run.only") c.only = split_list(v);
        else if (k == "group.family") c.group = v;
        else if (k == "group.n") c.n = node.get_value<int>();
        else if (k == "family.label") c.family = v;
        else if (k == "family.gen_a") c.gen_a = resolve(base, v);
        else if (k == "family.gen_b") c.gen_b = resolve(base, v);
        else if (k == "family.s") c.extended_s = node.get_value<int>();
        else if (k == "family.inject_corruption") c.inject_corruption = node.get_value<bool>();
        else if (k == "morphism.poly_p") c.poly_p = resolve(base, v);
        else if (k == "morphism.poly_q") c.poly_q = resolve(base, v);
        else if (k == "manifold.h_matrix") c.h_matrix = resolve(base, v);
        else if (k == "manifold.h_step") c.h_step = node.get_value<double>();
        else if (k == "manifold.spot_checks") c.spot_checks = node.get_value<int>();
        else throw ConfigError("config: unknown key " + k);
      }
    }
  } catch (const pt::ptree_bad_data& e) {
    throw ConfigError(std::string("config: bad value: ") + e.what());
  }
}

Mat read_matrix_file(const std::string& path) {
  const auto values = read_pairs(path);
  const auto n = static_cast<int>(std::lround(std::sqrt(double(values.size()))));
  if (static_cast<std::size_t>(n) * n != values.size()) {
    throw ConfigError(path + ": " + std::to_string(values.size()) + " entries do not form a square matrix");
  }
  Mat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = values[i * n + j];
  return m;
}

CVec read_vector_file(const std::string& path) {
  const auto values = read_pairs(path);
  CVec v(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) v[i] = values[i];
  return v;
}

Mat resolve_h_matrix(const RunConfig& c) {
  if (c.h_matrix.empty()) throw ConfigError("--h-matrix is required");
  if (c.h_matrix == "random-distinct") {
    if (!c.seed) throw ConfigError("random-distinct H needs --seed");
    return random_distinct_matrix(c.n, *c.seed);
  }
  if (c.h_matrix.rfind("diag:", 0) == 0) {
    const auto items = split_list(c.h_matrix.substr(5));
    if (items.empty()) throw ConfigError("diag: needs at least one value");
    Mat h = Mat::Zero(items.size(), items.size());
    for (std::size_t i = 0; i < items.size(); ++i) {
      try {
        h(i, i) = std::stod(items[i]);
      } catch (const std::exception&) {
        throw ConfigError("diag: bad value '" + items[i] + "'");
      }
    }
    return h;
  }
  return read_matrix_file(c.h_matrix);
}

}  // namespace lie::app
