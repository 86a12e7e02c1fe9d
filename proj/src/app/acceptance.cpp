#include "lie_eigenlab/app/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <random>
#include <sstream>

#include "lie_eigenlab/app/commands.hpp"
#include "lie_eigenlab/levelset.hpp"
#include "lie_eigenlab/roots.hpp"

namespace lie::app {

namespace {

using Checks = std::vector<Check>;

struct Context {
  std::uint64_t seed;
  Checks checks;
  std::vector<std::string> notes;
};

CVec isotropic(int m) {
  CVec a = CVec::Zero(m);
  a[0] = 1.0;
  a[1] = cplx(0.0, 1.0);
  return a;
}

std::vector<EigenFamily> catalogue() {
  return {su_standard(3, unit_vector(3, 0)),
          su_dual(3, unit_vector(3, 0)),
          so_isotropic(4, isotropic(4)),
          sp_standard(2, unit_vector(4, 0)),
          su_tensor(3, unit_vector(3, 0), unit_vector(3, 1)),
          su_extended(4, 2)};
}

std::string tag(const EigenFamily& f) { return f.label() + " on " + f.spec().name(); }

void casimir(Context& ctx) {
  for (int n = 2; n <= 5; ++n) {
    const GroupSpec spec(Family::SU, n);
    const double expected = -(n * n - 1.0) / n;
    const auto cc = crosscheck_casimir(spec, "standard", 50, ctx.seed);
    const std::string g = spec.name();
    ctx.checks.push_back(Check::below(g + " brute-force sum X^2 vs -(n^2-1)/n", std::abs(cc.brute_force - expected), 1e-9));
    ctx.checks.push_back(Check::below(g + " root-system alpha vs -(n^2-1)/n", std::abs(cc.alpha - expected), 1e-9));
    ctx.checks.push_back(Check::below(g + " measured lambda vs alpha",
                                      std::abs(cplx(cc.measured, cc.measured_imag) - cc.alpha), 1e-9));
  }
}

void tensor(Context& ctx) {
  for (int n : {3, 4}) {
    const auto f = su_tensor(n, unit_vector(n, 0), unit_vector(n, 1));
    const auto rep = verify_family(f, 50, ctx.seed);
    const std::string g = f.spec().name();
    ctx.checks.push_back(Check::below(g + " |mu + 2|", std::abs(rep.mu + 2.0), 1e-9));
    ctx.checks.push_back(Check::below(g + " mu spread", rep.mu_spread, 1e-9));
    ctx.checks.push_back(Check::above(g + " member pairs", rep.pairs, 19.5));
    ctx.checks.push_back(Check::above(g + " Haar points", rep.samples, 49.5));
  }
}

void orthogonality(Context& ctx) {
  const GroupSpec su3(Family::SU, 3);
  const Calculus calc(build_basis(su3));
  const auto rows = su_standard(3, unit_vector(3, 0));  // z_i1
  const auto cols = su_dual(3, unit_vector(3, 1));      // conj z_k2
  double worst = 0.0, worst_identity = 0.0, ratio_spread = 0.0;
  cplx ratio(0.0);
  bool have_ratio = false;
  for (int s = 0; s < 50; ++s) {
    const auto p = haar_sample(su3, derive_seed(ctx.seed, 300 + s));
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) {
        const cplx phi = rows.member(i)(p.matrix()), psi = cols.member(k)(p.matrix());
        worst_identity = std::max({worst_identity, std::abs(phi - p.matrix()(i, 0)),
                                   std::abs(psi - std::conj(p.matrix()(k, 1)))});
        const cplx kap = kappa(calc, rows.member(i), cols.member(k), p).value;
        worst = std::max(worst, std::abs(kap));
        if (std::abs(phi * psi) > 1e-3) {
          const cplx r = kap / (phi * psi);
          if (!have_ratio) ratio = r, have_ratio = true;
          ratio_spread = std::max(ratio_spread, std::abs(r - ratio));
        }
      }
  }
  ctx.checks.push_back(Check::below("fields are z_i1 and conj z_k2", worst_identity, 1e-14));
  ctx.checks.push_back(Check::below("max |kappa(z_i1, conj z_k2)| over 9 pairs x 50 points", worst, 1e-10));
  if (worst >= 1e-10) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "kappa(z_i1, conj z_k2) = (%.12g %+.12gi) z_i1 conj z_k2, spread %.2g", ratio.real(),
                  ratio.imag(), ratio_spread);
    ctx.notes.emplace_back(buf);
  }

  const auto ten = verify_family(su_tensor(3, unit_vector(3, 0), unit_vector(3, 1)), 50, ctx.seed);
  try {
    const auto prod = verify_family(product_family(rows, cols), 50, ctx.seed);
    ctx.checks.push_back(Check::flag("product family verdict (" + to_string(prod.status) + ") equals tensor verdict (" +
                                         to_string(ten.status) + ")",
                                     prod.status == ten.status));
  } catch (const Error& e) {
    ctx.checks.push_back(Check::flag("product family constructible", false));
    ctx.notes.push_back(e.what());
  }
}

void families(Context& ctx) {
  for (const auto& f : catalogue()) {
    const auto rep = verify_family(f, 50, ctx.seed, 1e-8);
    ctx.checks.push_back(Check::below(tag(f) + " max(tau, kappa) residual",
                                      std::max(rep.tau_residual, rep.kappa_residual), 1e-8));
    ctx.checks.push_back(Check::flag(tag(f) + " verify_family passes", rep.status == VerificationStatus::Pass));
  }
}

void morphisms(Context& ctx) {
  for (const auto& f : catalogue()) {
    std::vector<int> members(f.size());
    for (int i = 0; i < f.size(); ++i) members[i] = i;
    double worst = 0.0;
    int used = 0;
    for (int t = 0; t < 10; ++t) {
      const int degree = 1 + t % 3;
      const auto p = random_homogeneous(f.size(), degree, 4, derive_seed(ctx.seed, 500 + t));
      const auto q = random_homogeneous(f.size(), degree, 4, derive_seed(ctx.seed, 600 + t));
      const auto rep = verify_harmonic_morphism(build_morphism(f, members, p, q), 40, derive_seed(ctx.seed, t), 1e-7);
      worst = std::max({worst, rep.tau_residual, rep.kappa_residual});
      used += rep.used;
    }
    ctx.checks.push_back(Check::below(tag(f) + " worst chart residual over 10 pairs", worst, 1e-7));
    ctx.checks.push_back(Check::above(tag(f) + " samples away from chart boundary", used, 0.5));
  }
  const auto hopf = build_morphism(su_standard(2, unit_vector(2, 0)), {0, 1}, parse_polynomial("1 0 : 1 0", 2),
                                   parse_polynomial("1 0 : 0 1", 2));
  const auto rep = verify_harmonic_morphism(hopf, 100, ctx.seed, 1e-7);
  ctx.checks.push_back(Check::below("Hopf map chart residual", std::max(rep.tau_residual, rep.kappa_residual), 1e-7));
  ctx.checks.push_back(Check::flag("Hopf map verifies", rep.status == VerificationStatus::Pass));
  const auto singular = singular_set_probe(hopf, 2000, ctx.seed);
  ctx.checks.push_back(Check::above("Hopf singular-set floor", singular.floor, 0.0));
  ctx.checks.push_back(Check::flag("Hopf singular set reported empty", singular.likely_empty));
}

void minimal_level_sets(Context& ctx) {
  for (int n : {3, 4}) {
    double psi = 0.0, sigma = 1e300, curv = 0.0, rmin = 1e300, rmax = 0.0;
    int short_clouds = 0;
    for (int k = 0; k < 5; ++k) {
      const Mat h = random_distinct_matrix(n, derive_seed(ctx.seed, 700 + 10 * n + k));
      const auto spec = LevelSetSpec::phi_h(h);
      const auto cloud = sample_manifold(spec, 20, derive_seed(ctx.seed, 800 + 10 * n + k));
      if (cloud.points.size() != 20) ++short_clouds;
      for (const auto& pt : cloud.points) {
        psi = std::max(psi, std::abs(pt.value));
        sigma = std::min(sigma, pt.sigma_min);
        const double coarse = mean_curvature(spec, pt, 1e-3).norm;
        const double ratio = coarse / mean_curvature(spec, pt, 5e-4).norm;
        curv = std::max(curv, coarse);
        rmin = std::min(rmin, ratio);
        rmax = std::max(rmax, ratio);
      }
    }
    const std::string g = "SU(" + std::to_string(n) + ")";
    ctx.checks.push_back(Check::flag(g + " 5 manifolds x 20 points sampled", short_clouds == 0));
    ctx.checks.push_back(Check::below(g + " max |Psi|", psi, 1e-12));
    ctx.checks.push_back(Check::above(g + " min sigma", sigma, 1e-4));
    ctx.checks.push_back(Check::below(g + " max mean curvature at h = 1e-3", curv, 5e-4));
    ctx.checks.push_back(Check::within(g + " min refinement factor", rmin, 3.0, 5.0));
    ctx.checks.push_back(Check::within(g + " max refinement factor", rmax, 3.0, 5.0));
  }
  const GroupSpec su2(Family::SU, 2);
  const LevelSetSpec control(
      su2, linear_coefficient(su2, Form::Hermitian, unit_vector(2, 0), unit_vector(2, 0)) - constant_field(su2, 0.3),
      "Re z11 - 0.3");
  const auto cloud = sample_manifold(control, 5, derive_seed(ctx.seed, 900));
  double weakest = cloud.points.empty() ? 0.0 : 1e300;
  for (const auto& pt : cloud.points) weakest = std::min(weakest, mean_curvature(control, pt, 1e-3).norm);
  ctx.checks.push_back(Check::above("non-minimal control min mean curvature", weakest, 1e-2));
}

void gradient(Context& ctx) {
  std::mt19937_64 rng(derive_seed(ctx.seed, 1000));
  std::normal_distribution<double> normal;
  double worst_fd = 0.0, worst_exact = 0.0;
  for (int t = 0; t < 100; ++t) {
    const int n = 2 + t % 3;
    Mat h(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) h(i, j) = cplx(normal(rng), normal(rng));
    const auto spec = LevelSetSpec::phi_h(h);
    const auto& basis = spec.calculus().basis();
    const auto z = haar_sample(spec.group(), derive_seed(ctx.seed, 1100 + t));
    const CVec formula = commutator_gradient(h, z.matrix(), basis);
    worst_exact = std::max(worst_exact, max_abs(formula - gradient_coeffs(spec.calculus(), spec.psi(), z)));
    for (int k = 0; k < basis.size(); ++k) {
      const cplx fd = fd_first_derivative(spec.psi(), z.matrix(), basis[k].matrix(), 1e-3, 6);
      worst_fd = std::max(worst_fd, std::abs(fd - formula[k]));
    }
  }
  ctx.checks.push_back(Check::below("commutator formula vs finite differences (100 pairs)", worst_fd, 1e-9));
  ctx.checks.push_back(Check::below("commutator formula vs exact gradient (100 pairs)", worst_exact, 1e-9));
  double zero = 0.0;
  for (int n : {2, 3, 4}) {
    const auto spec = LevelSetSpec::phi_h(Mat::Identity(n, n));
    for (int s = 0; s < 10; ++s) {
      const auto z = haar_sample(spec.group(), derive_seed(ctx.seed, 1200 + 10 * n + s));
      zero = std::max({zero, max_abs(commutator_gradient(Mat::Identity(n, n), z.matrix(), spec.calculus().basis())),
                       max_abs(gradient_coeffs(spec.calculus(), spec.psi(), z))});
    }
  }
  ctx.checks.push_back(Check::below("H = I gradient magnitude", zero, 1e-14));
}

ScalarField random_field(const GroupSpec& spec, std::mt19937_64& rng, int kind) {
  const int m = spec.matrix_size();
  std::normal_distribution<double> normal;
  auto vec = [&] {
    CVec v(m);
    for (int i = 0; i < m; ++i) v[i] = cplx(normal(rng), normal(rng));
    return v;
  };
  auto mat = [&] {
    Mat a(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) a(i, j) = cplx(normal(rng), normal(rng));
    return a;
  };
  switch (kind) {
    case 0: return linear_coefficient(spec, Form::Hermitian, vec(), vec());
    case 1: return linear_coefficient(spec, Form::ConjHermitian, vec(), vec());
    case 2: return linear_coefficient(spec, Form::Bilinear, vec(), vec());
    case 3: return adjoint_coefficient(spec, mat(), mat());
    default: {
      const auto f = linear_coefficient(spec, Form::Hermitian, vec(), vec());
      const auto g = adjoint_coefficient(spec, mat(), mat());
      return polynomial_field(spec, {f, g}, {{cplx(0.5, 1), {2, 1}}, {cplx(-1, 0), {0, 1}}, {3.0, {0, 0}}});
    }
  }
}

void hygiene(Context& ctx) {
  // second-order differences: halving h from 1e-4 to 5e-5 divides the error by ~4
  const GroupSpec su3(Family::SU, 3);
  const Calculus calc(build_basis(su3));
  std::mt19937_64 rng(derive_seed(ctx.seed, 1300));
  double fmin = 1e300, fmax = 0.0;
  for (int kind = 0; kind < 5; ++kind) {
    const auto f = random_field(su3, rng, kind);
    const auto p = haar_sample(su3, derive_seed(ctx.seed, 1310 + kind));
    double coarse = 0.0, fine = 0.0;
    for (const auto& x : calc.basis().elements()) {
      const cplx exact = directional_derivative(calc, f, p, x).value;
      coarse += std::abs(fd_first_derivative(f, p.matrix(), x.matrix(), 1e-4, 2) - exact);
      fine += std::abs(fd_first_derivative(f, p.matrix(), x.matrix(), 5e-5, 2) - exact);
    }
    fmin = std::min(fmin, coarse / fine);
    fmax = std::max(fmax, coarse / fine);
  }
  ctx.checks.push_back(Check::within("exact vs FD min refinement factor", fmin, 3.5, 4.5));
  ctx.checks.push_back(Check::within("exact vs FD max refinement factor", fmax, 3.5, 4.5));

  double membership = 0.0, gram = 0.0, idempotence = 0.0;
  for (const GroupSpec spec : {GroupSpec(Family::SU, 2), GroupSpec(Family::SU, 4), GroupSpec(Family::SO, 3),
                               GroupSpec(Family::SO, 5), GroupSpec(Family::Sp, 1), GroupSpec(Family::Sp, 3)}) {
    const auto basis = build_basis(spec);
    gram = std::max(gram, max_abs(basis.gram() - RMat::Identity(basis.size(), basis.size())));
    for (int s = 0; s < 20; ++s) {
      const auto g = haar_sample(spec, derive_seed(ctx.seed, 1400 + s));
      membership = std::max(membership, membership_residual(spec, g.matrix()));
      const auto once = retract_to_group(g.matrix(), spec);
      const auto twice = retract_to_group(once.matrix(), spec);
      idempotence = std::max({idempotence, max_abs(once.matrix() - g.matrix()), max_abs(twice.matrix() - once.matrix())});
    }
  }
  ctx.checks.push_back(Check::below("Haar membership residual", membership, kTolerances.membership));
  ctx.checks.push_back(Check::below("basis Gram deviation", gram, kTolerances.gram));
  ctx.checks.push_back(Check::below("retraction idempotence", idempotence, kTolerances.retraction));

  // identical config and seed give identical envelopes and point clouds
  RunConfig vf;
  vf.command = "verify-family";
  vf.family = "tensor";
  vf.samples = 20;
  vf.seed = ctx.seed;
  auto envelope = [](const RunConfig& c) {
    Report r(c.command);
    r.set_config(c.to_json());
    cmd_verify_family(c, r);
    r.finish();
    return r.stable_json().dump(2);
  };
  ctx.checks.push_back(Check::flag("verify-family report byte-identical across runs", envelope(vf) == envelope(vf)));
  RunConfig sm;
  sm.command = "sample-manifold";
  sm.h_matrix = "diag:1,2,3";
  sm.samples = 30;
  sm.spot_checks = 2;
  sm.seed = ctx.seed;
  sm.format = "csv";
  auto cloud = [](const RunConfig& c) {
    Report r(c.command);
    std::ostringstream out;
    cmd_sample_manifold(c, r, &out);
    return out.str() + r.stable_json().dump(2);
  };
  ctx.checks.push_back(Check::flag("sample-manifold CSV and report byte-identical across runs", cloud(sm) == cloud(sm)));
}

}  // namespace

const std::vector<CriterionInfo>& criteria() {
  static const std::vector<CriterionInfo> list = {
      {1, "casimir", "Casimir agreement on SU(2..5)", 10.0},
      {2, "tensor", "tensor family conformality constant -2", 30.0},
      {3, "orthogonality", "kappa-orthogonality of z_i1 and conj z_k2", 0.0},
      {4, "families", "catalogued eigenfamilies verify", 120.0},
      {5, "morphisms", "harmonic morphisms from catalogued families", 0.0},
      {6, "minimal-level-sets", "level sets of Phi_H are minimal", 300.0},
      {7, "gradient", "commutator gradient formula", 0.0},
      {8, "hygiene", "numerical hygiene and reproducibility", 0.0},
  };
  return list;
}

std::vector<int> select_criteria(const std::vector<std::string>& only) {
  std::vector<int> ids;
  if (only.empty()) {
    for (const auto& c : criteria()) ids.push_back(c.id);
    return ids;
  }
  for (const auto& name : only) {
    const auto it = std::find_if(criteria().begin(), criteria().end(), [&](const CriterionInfo& c) {
      return c.key == name || std::to_string(c.id) == name;
    });
    if (it == criteria().end()) throw ConfigError("unknown criterion '" + name + "'");
    if (std::find(ids.begin(), ids.end(), it->id) == ids.end()) ids.push_back(it->id);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

bool CriterionResult::passed() const {
  if (checks.empty()) return false;
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

CriterionResult run_criterion(int id, std::uint64_t seed) {
  const auto it = std::find_if(criteria().begin(), criteria().end(), [&](const CriterionInfo& c) { return c.id == id; });
  if (it == criteria().end()) throw ConfigError("unknown criterion " + std::to_string(id));
  CriterionResult result{*it, {}, {}, 0.0};
  Context ctx{seed, {}, {}};
  const auto start = std::chrono::steady_clock::now();
  try {
    switch (id) {
      case 1: casimir(ctx); break;
      case 2: tensor(ctx); break;
      case 3: orthogonality(ctx); break;
      case 4: families(ctx); break;
      case 5: morphisms(ctx); break;
      case 6: minimal_level_sets(ctx); break;
      case 7: gradient(ctx); break;
      default: hygiene(ctx); break;
    }
  } catch (const std::exception& e) {
    ctx.checks.push_back(Check::flag("completed", false));
    ctx.notes.push_back(e.what());
  }
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  result.checks = std::move(ctx.checks);
  result.notes = std::move(ctx.notes);
  return result;
}

std::string format_criterion(const CriterionResult& r) {
  std::ostringstream out;
  char secs[32];
  std::snprintf(secs, sizeof secs, "%.1f", r.seconds);
  out << (r.passed() ? "[PASS] " : "[FAIL] ") << r.info.id << " " << r.info.key << ": " << r.info.title << " (" << secs
      << " s";
  if (r.info.budget_seconds > 0.0) out << ", budget " << r.info.budget_seconds << " s";
  out << ")\n";
  for (const auto& c : r.checks) out << "    " << (c.pass ? "ok   " : "FAIL ") << c.name << ": " << c.describe() << "\n";
  for (const auto& n : r.notes) out << "    note: " << n << "\n";
  if (r.over_budget()) out << "    warning: runtime budget exceeded\n";
  return out.str();
}

}  // namespace lie::app
