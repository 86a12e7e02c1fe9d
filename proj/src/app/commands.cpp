#include "lie_eigenlab/app/commands.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "lie_eigenlab/app/acceptance.hpp"
#include "lie_eigenlab/levelset.hpp"
#include "lie_eigenlab/roots.hpp"

namespace lie::app {

namespace {

json complex_json(cplx z) { return json{{"re", number(z.real())}, {"im", number(z.imag())}}; }

CVec generator(const std::string& path, CVec fallback) {
  return path.empty() ? fallback : read_vector_file(path);
}

std::string rational_text(const Rational& r) {
  return r.denominator() == 1 ? std::to_string(r.numerator())
                              : std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

// An extra summand with a different Laplacian eigenvalue than any member:
// the square of a matrix coefficient.
ScalarField corruption(const GroupSpec& spec) {
  const int m = spec.matrix_size();
  const auto z = linear_coefficient(spec, Form::Hermitian, unit_vector(m, 0), CVec::Ones(m));
  return polynomial_field(spec, {z}, {{1.0, {2}}}, "corruption");
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write " + path);
  return f;
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Retraction:
    case ErrorKind::NonConvergence: return kNumericalFailure;
    default: return kUsageError;
  }
}

EigenFamily family_from_config(const RunConfig& c) {
  const Family group = parse_family(c.group);
  const GroupSpec spec(group, c.n);
  const int m = spec.matrix_size();
  const std::string& label = c.family;
  if (group == Family::SU) {
    if (label == "standard") return su_standard(c.n, generator(c.gen_a, unit_vector(m, 0)));
    if (label == "dual") return su_dual(c.n, generator(c.gen_a, unit_vector(m, 0)));
    if (label == "tensor")
      return su_tensor(c.n, generator(c.gen_a, unit_vector(m, 0)), generator(c.gen_b, unit_vector(m, 1)));
    if (label == "extended") return su_extended(c.n, c.extended_s);
  } else if (group == Family::SO) {
    if (label == "isotropic") {
      CVec a = CVec::Zero(m);
      a[0] = 1.0;
      a[1] = cplx(0.0, 1.0);
      return so_isotropic(c.n, generator(c.gen_a, a));
    }
  } else if (label == "standard") {
    return sp_standard(c.n, generator(c.gen_a, unit_vector(m, 0)));
  }
  throw Error(ErrorKind::InvalidSpec, "unknown family '" + label + "' for group " + c.group +
                                          " (su: standard, dual, tensor, extended; so: isotropic; sp: standard)");
}

void cmd_casimir(const RunConfig& c, Report& report) {
  const GroupSpec spec(parse_family(c.group), c.n);
  const double tol = c.tol.value_or(1e-9);
  const auto cc = crosscheck_casimir(spec, c.family, c.samples, c.seed.value_or(1));
  const auto roots = root_system(spec);
  report.data() = {{"group", cc.group},
                   {"label", cc.label},
                   {"alpha", number(cc.alpha)},
                   {"alpha_exact", rational_text(casimir_eigenvalue_exact(named_weight(roots, c.family), roots))},
                   {"brute_force", number(cc.brute_force)},
                   {"measured", complex_json(cplx(cc.measured, cc.measured_imag))},
                   {"samples", cc.samples}};
  report.add(Check::below("brute force vs alpha", std::abs(cc.brute_force - cc.alpha), tol));
  report.add(Check::below("measured vs alpha", std::abs(cplx(cc.measured, cc.measured_imag) - cc.alpha), tol));
}

void cmd_verify_family(const RunConfig& c, Report& report) {
  EigenFamily family = family_from_config(c);
  if (c.inject_corruption) family = family.with_corrupted_member(0, corruption(family.spec()));
  const double tol = c.tol.value_or(1e-8);
  const auto rep = verify_family(family, c.samples, *c.seed, tol);
  report.data() = {{"family", rep.family},
                   {"group", rep.group},
                   {"samples", rep.samples},
                   {"members", rep.members},
                   {"pairs", rep.pairs},
                   {"lambda", complex_json(rep.lambda)},
                   {"mu", complex_json(rep.mu)},
                   {"lambda_spread", number(rep.lambda_spread)},
                   {"mu_spread", number(rep.mu_spread)},
                   {"status", to_string(rep.status)},
                   {"note", rep.note},
                   {"corrupted", c.inject_corruption}};
  if (family.expected_lambda()) report.data()["expected_lambda"] = complex_json(*family.expected_lambda());
  if (family.expected_mu()) report.data()["expected_mu"] = complex_json(*family.expected_mu());
  report.add(Check::flag("conclusive", rep.status != VerificationStatus::Inconclusive));
  report.add(Check::below("tau residual", rep.tau_residual, tol));
  report.add(Check::below("kappa residual", rep.kappa_residual, tol));
  if (family.expected_lambda())
    report.add(Check::below("lambda vs expected", std::abs(rep.lambda - *family.expected_lambda()), tol));
  if (family.expected_mu())
    report.add(Check::below("mu vs expected", std::abs(rep.mu - *family.expected_mu()), tol));
}

void cmd_verify_morphism(const RunConfig& c, Report& report) {
  if (c.poly_p.empty() || c.poly_q.empty()) throw ConfigError("--poly-p and --poly-q are required");
  const EigenFamily family = family_from_config(c);
  auto load = [&](const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    return parse_polynomial(in, family.size());
  };
  std::vector<int> members(family.size());
  for (int i = 0; i < family.size(); ++i) members[i] = i;
  const auto m = build_morphism(family, members, load(c.poly_p), load(c.poly_q));
  const double tol = c.tol.value_or(1e-7);
  const auto primary = verify_harmonic_morphism(m, c.samples, *c.seed, tol, Chart::Primary);
  const auto opposite = verify_harmonic_morphism(m, c.samples, *c.seed, tol, Chart::Opposite);
  const auto singular = singular_set_probe(m, c.samples, derive_seed(*c.seed, 1));
  auto chart_json = [](const MorphismReport& r) {
    return json{{"chart", r.chart},
                {"samples", r.samples},
                {"used", r.used},
                {"median_denominator", number(r.median_denominator)},
                {"tau_residual", number(r.tau_residual)},
                {"kappa_residual", number(r.kappa_residual)},
                {"status", to_string(r.status)}};
  };
  report.data() = {{"family", family.label()},
                   {"p", m.p().to_text()},
                   {"q", m.q().to_text()},
                   {"degree", m.p().degree()},
                   {"primary", chart_json(primary)},
                   {"opposite", chart_json(opposite)},
                   {"singular_set",
                    {{"samples", singular.samples},
                     {"sampled_floor", number(singular.sampled_floor)},
                     {"floor", number(singular.floor)},
                     {"likely_empty", singular.likely_empty}}}};
  for (const auto* r : {&primary, &opposite}) {
    report.add(Check::flag(r->chart + " chart has usable samples", r->status != VerificationStatus::Inconclusive));
    report.add(Check::below(r->chart + " tau residual", r->tau_residual, tol));
    report.add(Check::below(r->chart + " kappa residual", r->kappa_residual, tol));
  }
}

void cmd_sample_manifold(const RunConfig& c, Report& report, std::ostream* artifact) {
  const Mat h = resolve_h_matrix(c);
  const auto spec = LevelSetSpec::phi_h(h);
  if (!distinct_eigenvalues(h)) report.warn("H has repeated eigenvalues; regularity is not guaranteed");
  const PointCloud cloud = sample_manifold(spec, c.samples, *c.seed);
  for (const auto& w : cloud.warnings) report.warn(w);

  double worst_psi = 0.0, worst_sigma = cloud.points.empty() ? 0.0 : 1e300;
  for (const auto& pt : cloud.points) {
    worst_psi = std::max(worst_psi, std::abs(pt.value));
    worst_sigma = std::min(worst_sigma, pt.sigma_min);
  }
  const int spots = std::min<int>(c.spot_checks, static_cast<int>(cloud.points.size()));
  std::vector<std::optional<double>> curvature(cloud.points.size());
  double worst_curv = 0.0, min_ratio = 1e300, max_ratio = 0.0;
  const bool refine = c.h_step / 2.0 >= 1e-4;
  for (int i = 0; i < spots; ++i) {
    const auto coarse = mean_curvature(spec, cloud.points[i], c.h_step);
    curvature[i] = coarse.norm;
    worst_curv = std::max(worst_curv, coarse.norm);
    if (refine) {
      const double ratio = coarse.norm / mean_curvature(spec, cloud.points[i], c.h_step / 2.0).norm;
      min_ratio = std::min(min_ratio, ratio);
      max_ratio = std::max(max_ratio, ratio);
    }
  }
  report.data() = {{"n", spec.group().n()},
                   {"points", cloud.points.size()},
                   {"requested", cloud.requested},
                   {"attempts", cloud.attempts},
                   {"distinct_eigenvalues", distinct_eigenvalues(h)},
                   {"max_abs_psi", number(worst_psi)},
                   {"min_sigma", number(worst_sigma)},
                   {"spot_checks", spots},
                   {"h_step", c.h_step}};
  report.add(Check::flag("requested point count reached", static_cast<int>(cloud.points.size()) == c.samples));
  report.add(Check::below("max |Psi|", worst_psi, 1e-12));
  report.add(Check::above("min sigma", worst_sigma, 1e-4));
  if (spots > 0) {
    report.data()["max_curvature"] = number(worst_curv);
    report.add(Check::below("max mean curvature", worst_curv, 5e-4));
    if (refine) {
      report.data()["refinement"] = {number(min_ratio), number(max_ratio)};
      report.add(Check::within("min refinement factor", min_ratio, 3.0, 5.0));
      report.add(Check::within("max refinement factor", max_ratio, 3.0, 5.0));
    }
  }
  if (artifact) {
    if (c.format == "csv") write_csv(*artifact, cloud, curvature);
    if (c.format == "ply") write_ply(*artifact, cloud);
  }
}

void cmd_acceptance(const RunConfig& c, Report& report, std::ostream* progress) {
  const auto ids = select_criteria(c.only);
  json per = json::object();
  json seconds = json::object();
  for (int id : ids) {
    const auto r = run_criterion(id, c.seed.value_or(1));
    const std::string prefix = std::to_string(id) + " " + r.info.key + ": ";
    for (const auto& ch : r.checks) {
      Check copy = ch;
      copy.name = prefix + ch.name;
      report.add(copy);
    }
    for (const auto& note : r.notes) report.warn(prefix + note);
    per[std::to_string(id)] = {{"key", r.info.key}, {"title", r.info.title}, {"pass", r.passed()}};
    seconds[std::to_string(id)] = r.seconds;
    if (r.over_budget()) {
      report.timing_note(prefix + "runtime " + std::to_string(r.seconds) + " s exceeds budget " +
                         std::to_string(r.info.budget_seconds) + " s");
    }
    if (progress) *progress << format_criterion(r);
  }
  report.data()["criteria"] = per;
  report.timing_extra()["criteria_seconds"] = seconds;
}

int run_command(const RunConfig& c, std::ostream& out, std::ostream& err) {
  Report report(c.command);
  report.set_config(c.to_json());
  int code = kPass;
  std::ostringstream artifact;
  const bool data_file = c.format == "csv" || c.format == "ply";
  try {
    c.validate();
    if (c.command == "casimir") cmd_casimir(c, report);
    else if (c.command == "verify-family") cmd_verify_family(c, report);
    else if (c.command == "verify-morphism") cmd_verify_morphism(c, report);
    else if (c.command == "sample-manifold") cmd_sample_manifold(c, report, data_file ? &artifact : nullptr);
    else if (c.command == "acceptance") cmd_acceptance(c, report, &err);
    else throw ConfigError("unknown command '" + c.command + "'");
    code = report.passed() ? kPass : kCheckFail;
  } catch (const ConfigError& e) {
    report.set_error("config", e.what());
    code = kUsageError;
  } catch (const Error& e) {
    report.set_error(to_string(e.kind()), e.what());
    code = exit_code_for(e.kind());
  } catch (const std::exception& e) {
    report.set_error("internal", e.what());
    code = kNumericalFailure;
  }
  report.finish();
  if (report.has_error()) err << "error: " << report.to_json()["error"]["message"].get<std::string>() << "\n";

  try {
    if (data_file && !report.has_error()) {
      if (c.out.empty()) {
        out << artifact.str();
      } else {
        auto f = open_output(c.out);
        f << artifact.str();
      }
      if (!c.report.empty()) {
        auto f = open_output(c.report);
        f << report.dump();
      }
      err << "verdict: " << (report.passed() ? "pass" : "fail") << "\n";
    } else if (!c.out.empty() && !data_file) {
      auto f = open_output(c.out);
      f << report.dump();
    } else {
      out << report.dump();
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
  return code;
}

}  // namespace lie::app
