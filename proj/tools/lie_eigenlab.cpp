// Command-line front end. Flags override values read from --config.
#include <functional>
#include <iostream>

#include "CLI11.hpp"
#include "lie_eigenlab/app/commands.hpp"

using lie::app::RunConfig;

int main(int argc, char** argv) {
  CLI::App app{"Eigenfamilies, harmonic morphisms and minimal level sets on compact matrix groups"};
  app.require_subcommand(1);
  app.fallthrough();

  for (const auto& [name, help] : std::vector<std::pair<std::string, std::string>>{
           {"casimir", "Casimir eigenvalue of a named representation with a numerical cross-check"},
           {"verify-family", "verify the eigenfamily equations for a catalogued family"},
           {"verify-morphism", "verify that P/Q of a family is a harmonic morphism"},
           {"sample-manifold", "sample the level set Phi_H = 0 and check minimality"},
           {"acceptance", "run the acceptance suite"}}) {
    app.add_subcommand(name, help);
  }

  RunConfig flags;
  std::string config_file;
  std::string only;
  std::uint64_t seed = 0;
  double tol = 0.0;
  // Each flag that was given is copied over the config file values.
  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> overrides;
  auto bind = [&](CLI::Option* opt, std::function<void(RunConfig&)> apply) { overrides.emplace_back(opt, apply); };

  app.add_option("--config", config_file, "INI file with [run] [group] [family] [morphism] [manifold] sections")
      ->check(CLI::ExistingFile);
  bind(app.add_option("--group", flags.group, "su, so or sp"), [&](RunConfig& c) { c.group = flags.group; });
  bind(app.add_option("--n", flags.n, "group rank parameter"), [&](RunConfig& c) { c.n = flags.n; });
  bind(app.add_option("--family", flags.family, "family or representation label"),
       [&](RunConfig& c) { c.family = flags.family; });
  bind(app.add_option("--gen-a", flags.gen_a, "generator vector file (\"re im\" pairs)"),
       [&](RunConfig& c) { c.gen_a = flags.gen_a; });
  bind(app.add_option("--gen-b", flags.gen_b, "second generator vector file"),
       [&](RunConfig& c) { c.gen_b = flags.gen_b; });
  bind(app.add_option("--s", flags.extended_s, "block count of the extended family"),
       [&](RunConfig& c) { c.extended_s = flags.extended_s; });
  bind(app.add_flag("--inject-corruption", flags.inject_corruption, "add a foreign summand to member 0"),
       [&](RunConfig& c) { c.inject_corruption = flags.inject_corruption; });
  bind(app.add_option("--poly-p", flags.poly_p, "numerator polynomial file"),
       [&](RunConfig& c) { c.poly_p = flags.poly_p; });
  bind(app.add_option("--poly-q", flags.poly_q, "denominator polynomial file"),
       [&](RunConfig& c) { c.poly_q = flags.poly_q; });
  bind(app.add_option("--h-matrix", flags.h_matrix, "matrix file, random-distinct, or diag:v1,v2,..."),
       [&](RunConfig& c) { c.h_matrix = flags.h_matrix; });
  bind(app.add_option("--samples", flags.samples, "sample or point count"),
       [&](RunConfig& c) { c.samples = flags.samples; });
  bind(app.add_option("--seed", seed, "RNG seed"), [&](RunConfig& c) { c.seed = seed; });
  bind(app.add_option("--tol", tol, "tolerance override"), [&](RunConfig& c) { c.tol = tol; });
  bind(app.add_option("--h-step", flags.h_step, "mean-curvature step"),
       [&](RunConfig& c) { c.h_step = flags.h_step; });
  bind(app.add_option("--spot-checks", flags.spot_checks, "points receiving curvature checks"),
       [&](RunConfig& c) { c.spot_checks = flags.spot_checks; });
  bind(app.add_option("--out", flags.out, "output path (default stdout)"), [&](RunConfig& c) { c.out = flags.out; });
  bind(app.add_option("--report", flags.report, "envelope path when --format is csv or ply"),
       [&](RunConfig& c) { c.report = flags.report; });
  bind(app.add_option("--format", flags.format, "json, csv or ply"), [&](RunConfig& c) { c.format = flags.format; });
  bind(app.add_option("--only", only, "comma separated criterion keys or numbers"),
       [&](RunConfig& c) { c.only = lie::app::split_list(only); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : lie::app::kUsageError;
  }

  RunConfig config;
  if (!config_file.empty()) {
    try {
      lie::app::apply_ini(config, config_file);
    } catch (const lie::app::ConfigError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return lie::app::kUsageError;
    }
  }
  for (const auto& [opt, apply] : overrides)
    if (opt->count() > 0) apply(config);
  config.command = app.get_subcommands().front()->get_name();
  return lie::app::run_command(config, std::cout, std::cerr);
}
