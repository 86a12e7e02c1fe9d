#include "lie_eigenlab/families.hpp"

#include <cmath>

#include "lie_eigenlab/parallel.hpp"
#include "lie_eigenlab/roots.hpp"

namespace lie {

namespace {

cplx bilinear_dot(const CVec& a, const CVec& b) { return (a.array() * b.array()).sum(); }

void require_nonzero(const CVec& a, const char* what) {
  if (a.norm() == 0.0) throw Error(ErrorKind::Precondition, std::string(what) + " must be nonzero");
}

void require_length(const CVec& a, int m, const char* what) {
  if (a.size() != m) {
    throw Error(ErrorKind::Precondition, std::string(what) + " must have length " + std::to_string(m));
  }
}

cplx casimir_of(const GroupSpec& spec, const std::string& label) {
  const RootSystem r = root_system(spec);
  return casimir_eigenvalue(named_weight(r, label), r);
}

std::string vec_label(const CVec& a) {
  std::string s;
  for (int i = 0; i < a.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(a[i].real());
    if (a[i].imag() != 0.0) s += (a[i].imag() > 0 ? "+" : "") + std::to_string(a[i].imag()) + "i";
  }
  return s;
}

EigenFamily linear_family(const GroupSpec& spec, Form form, const CVec& a, const std::string& label,
                          std::optional<cplx> lambda) {
  const int m = spec.matrix_size();
  std::vector<ScalarField> members;
  for (int k = 0; k < m; ++k) {
    members.push_back(linear_coefficient(spec, form, a, unit_vector(m, k),
                                         label + "[c=e" + std::to_string(k + 1) + "]"));
  }
  return EigenFamily(spec, label, std::move(members), m, lambda);
}

bool gaussian_integer(cplx z) {
  auto integral = [](double x) { return std::abs(x) < 1e9 && std::floor(x) == x; };
  return integral(z.real()) && integral(z.imag());
}

}  // namespace

EigenFamily::EigenFamily(GroupSpec spec, std::string label, std::vector<ScalarField> members,
                         int index_dimension, std::optional<cplx> expected_lambda,
                         std::optional<cplx> expected_mu)
    : spec_(spec),
      label_(std::move(label)),
      members_(std::move(members)),
      index_dimension_(index_dimension),
      expected_lambda_(expected_lambda),
      expected_mu_(expected_mu) {
  for (const auto& f : members_) {
    if (!(f.spec() == spec_)) throw Error(ErrorKind::SpecMismatch, "family member on another group");
  }
}

ScalarField EigenFamily::combination(const CVec& coeffs) const {
  if (coeffs.size() != size()) throw Error(ErrorKind::Precondition, "coefficient count mismatch");
  std::vector<field::Term> terms;
  for (int i = 0; i < size(); ++i) {
    std::vector<int> e(size(), 0);
    e[i] = 1;
    terms.push_back({coeffs[i], e});
  }
  return polynomial_field(spec_, members_, std::move(terms), label_ + "[combination]");
}

EigenFamily EigenFamily::with_corrupted_member(int i, const ScalarField& extra) const {
  EigenFamily copy = *this;
  copy.members_.at(i) = (members_.at(i) + extra).with_label(members_[i].label() + "+corruption");
  copy.label_ += "[corrupted]";
  return copy;
}

EigenFamily su_standard(int n, const CVec& a) {
  const GroupSpec spec(Family::SU, n);
  require_length(a, n, "a");
  require_nonzero(a, "a");
  return linear_family(spec, Form::Hermitian, a, "su_standard(a=" + vec_label(a) + ")",
                       casimir_of(spec, "standard"));
}

EigenFamily su_dual(int n, const CVec& a) {
  const GroupSpec spec(Family::SU, n);
  require_length(a, n, "a");
  require_nonzero(a, "a");
  return linear_family(spec, Form::ConjHermitian, a, "su_dual(a=" + vec_label(a) + ")",
                       casimir_of(spec, "dual"));
}

bool is_isotropic(const CVec& a, double tol) {
  bool exact = true;
  for (int i = 0; i < a.size(); ++i) exact = exact && gaussian_integer(a[i]);
  if (exact) {
    long long re = 0, im = 0;
    for (int i = 0; i < a.size(); ++i) {
      const auto x = static_cast<long long>(a[i].real());
      const auto y = static_cast<long long>(a[i].imag());
      re += x * x - y * y;
      im += 2 * x * y;
    }
    return re == 0 && im == 0;
  }
  return std::abs((a.array() * a.array()).sum()) <= tol * std::max(1.0, a.squaredNorm());
}

EigenFamily so_isotropic(int n, const CVec& a) {
  const GroupSpec spec(Family::SO, n);
  require_length(a, n, "a");
  require_nonzero(a, "a");
  if (!is_isotropic(a)) throw Error(ErrorKind::Precondition, "a is not isotropic: sum a_i^2 != 0");
  return linear_family(spec, Form::Bilinear, a, "so_isotropic(a=" + vec_label(a) + ")",
                       casimir_of(spec, "standard"));
}

EigenFamily sp_standard(int n, const CVec& a) {
  const GroupSpec spec(Family::Sp, n);
  require_length(a, 2 * n, "a");
  require_nonzero(a, "a");
  return linear_family(spec, Form::Hermitian, a, "sp_standard(a=" + vec_label(a) + ")",
                       casimir_of(spec, "standard"));
}

EigenFamily su_tensor(int n, const CVec& a, const CVec& b) {
  const GroupSpec spec(Family::SU, n);
  require_length(a, n, "a");
  require_length(b, n, "b");
  require_nonzero(a, "a");
  require_nonzero(b, "b");
  if (std::abs(b.dot(a)) > 1e-12 * a.norm() * b.norm()) {
    throw Error(ErrorKind::Precondition, "su_tensor requires a orthogonal to b");
  }
  // (za)_i conj(zb)_j = (z a b^* z^*)_{ij} = <z (a b^*) z^{-1}, E_ij>.
  const Mat ab = a * b.adjoint();
  std::vector<ScalarField> members;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Mat e = Mat::Zero(n, n);
      e(i, j) = 1.0;
      members.push_back(adjoint_coefficient(
          spec, ab, e, "su_tensor[A=E" + std::to_string(i + 1) + std::to_string(j + 1) + "]"));
    }
  return EigenFamily(spec, "su_tensor(a=" + vec_label(a) + ";b=" + vec_label(b) + ")",
                     std::move(members), n * n, casimir_of(spec, "adjoint"), cplx(-2.0));
}

EigenFamily su_extended(int n, int s) {
  const GroupSpec spec(Family::SU, n);
  if (s < 1 || 2 * s > n) {
    throw Error(ErrorKind::Precondition, "su_extended requires 1 <= s and 2s <= n");
  }
  std::vector<ScalarField> members;
  for (int r = 0; r < s; ++r) {
    const Mat slot = unit_vector(n, 2 * r) * unit_vector(n, 2 * r + 1).adjoint();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Mat e = Mat::Zero(n, n);
        e(i, j) = 1.0;
        members.push_back(adjoint_coefficient(spec, slot, e,
                                              "su_extended[r=" + std::to_string(r + 1) + ",A=E" +
                                                  std::to_string(i + 1) + std::to_string(j + 1) + "]"));
      }
  }
  return EigenFamily(spec, "su_extended(s=" + std::to_string(s) + ")", std::move(members), s * n * n,
                     casimir_of(spec, "adjoint"), cplx(-2.0));
}

CrossProbe probe_cross_kappa(const Calculus& calc, const EigenFamily& f, const EigenFamily& g,
                             int points, std::uint64_t seed, int max_pairs) {
  std::vector<std::pair<int, int>> pairs;
  const int total = f.size() * g.size();
  const int stride = std::max(1, total / std::max(1, max_pairs));
  for (int t = 0; t < total; t += stride) pairs.emplace_back(t / g.size(), t % g.size());

  struct Sample {
    std::vector<cplx> products;
    std::vector<cplx> kappas;
  };
  const auto samples = parallel_map(static_cast<std::size_t>(points), [&](std::size_t s) {
    const GroupElement p = haar_sample(f.spec(), derive_seed(seed, s));
    std::vector<FieldJet> jf, jg;
    for (const auto& m : f.members()) jf.push_back(calc.jet(m, p));
    for (const auto& m : g.members()) jg.push_back(calc.jet(m, p));
    Sample out;
    for (const auto& [i, k] : pairs) {
      out.products.push_back(jf[i].value * jg[k].value);
      out.kappas.push_back(bilinear_dot(jf[i].gradient, jg[k].gradient));
    }
    return out;
  });

  cplx num(0.0);
  double den = 0.0;
  for (const auto& s : samples)
    for (std::size_t t = 0; t < s.products.size(); ++t) {
      num += std::conj(s.products[t]) * s.kappas[t];
      den += std::norm(s.products[t]);
    }
  CrossProbe probe{den > 0.0 ? num / den : cplx(0.0), 0.0, points};
  for (const auto& s : samples)
    for (std::size_t t = 0; t < s.products.size(); ++t)
      probe.max_residual = std::max(probe.max_residual, std::abs(s.kappas[t] - probe.nu * s.products[t]));
  return probe;
}

EigenFamily product_family(const EigenFamily& f, const EigenFamily& g, double tol) {
  if (!(f.spec() == g.spec())) throw Error(ErrorKind::SpecMismatch, "product of families on different groups");
  const Calculus calc(build_basis(f.spec()));
  const CrossProbe probe = probe_cross_kappa(calc, f, g);
  if (probe.max_residual >= tol) {
    throw Error(ErrorKind::NotOrthogonal,
                "cross pairs are not conformally proportional: residual " + std::to_string(probe.max_residual));
  }
  std::vector<ScalarField> members;
  for (const auto& phi : f.members())
    for (const auto& psi : g.members()) members.push_back((phi * psi).with_label(phi.label() + "*" + psi.label()));

  std::optional<cplx> lambda, mu;
  if (f.expected_lambda() && g.expected_lambda()) lambda = *f.expected_lambda() + *g.expected_lambda() + 2.0 * probe.nu;
  if (f.expected_mu() && g.expected_mu()) mu = *f.expected_mu() + *g.expected_mu() + 2.0 * probe.nu;
  return EigenFamily(f.spec(), f.label() + "*" + g.label(), std::move(members),
                     f.index_dimension() * g.index_dimension(), lambda, mu);
}

std::string to_string(VerificationStatus status) {
  switch (status) {
    case VerificationStatus::Pass: return "pass";
    case VerificationStatus::Fail: return "fail";
    case VerificationStatus::Inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

// Least-squares fit of y = c x over complex samples.
struct Fit {
  cplx num{0.0};
  double den = 0.0;
  void add(cplx x, cplx y) {
    num += std::conj(x) * y;
    den += std::norm(x);
  }
  cplx value() const { return den > 0.0 ? num / den : cplx(0.0); }
};

double max_spread(const std::vector<cplx>& values) {
  double spread = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t j = i + 1; j < values.size(); ++j) spread = std::max(spread, std::abs(values[i] - values[j]));
  return spread;
}

}  // namespace

VerificationReport verify_family(const EigenFamily& f, int samples, std::uint64_t seed, double tol) {
  if (f.size() == 0) throw Error(ErrorKind::Precondition, "family has no members");
  VerificationReport rep;
  rep.family = f.label();
  rep.group = f.spec().name();
  rep.samples = std::max(samples, 0);
  rep.members = f.size();
  rep.pairs = f.size() * (f.size() + 1) / 2;
  rep.tol = tol;
  if (samples <= 0) {
    rep.note = "no samples";
    return rep;
  }

  const Calculus calc(build_basis(f.spec()));
  const auto jets = parallel_map(static_cast<std::size_t>(samples), [&](std::size_t s) {
    const GroupElement p = haar_sample(f.spec(), derive_seed(seed, s));
    std::vector<FieldJet> out;
    out.reserve(f.size());
    for (const auto& m : f.members()) out.push_back(calc.jet(m, p));
    return out;
  });

  const int k = f.size();
  // A fit whose total weight is below this is treated as degenerate.
  const double floor = 1e-20 * samples;

  std::vector<Fit> member_fits(k);
  Fit lambda_fit;
  for (const auto& point : jets)
    for (int i = 0; i < k; ++i) {
      member_fits[i].add(point[i].value, point[i].laplacian);
      lambda_fit.add(point[i].value, point[i].laplacian);
    }
  std::vector<cplx> lambdas;
  for (const auto& fit : member_fits)
    if (fit.den > floor) lambdas.push_back(fit.value());
  if (lambdas.empty()) {
    rep.note = "all members vanish at every sample";
    return rep;
  }
  rep.lambda = lambda_fit.value();
  rep.lambda_spread = max_spread(lambdas);

  std::vector<Fit> pair_fits;
  pair_fits.reserve(rep.pairs);
  Fit mu_fit;
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) {
      Fit fit;
      for (const auto& point : jets) {
        const cplx prod = point[i].value * point[j].value;
        const cplx kap = bilinear_dot(point[i].gradient, point[j].gradient);
        fit.add(prod, kap);
        mu_fit.add(prod, kap);
      }
      pair_fits.push_back(fit);
    }
  std::vector<cplx> mus;
  for (const auto& fit : pair_fits)
    if (fit.den > floor) mus.push_back(fit.value());
  rep.mu = mu_fit.value();
  rep.mu_spread = max_spread(mus);

  for (const auto& point : jets)
    for (int i = 0; i < k; ++i) {
      rep.tau_residual = std::max(rep.tau_residual, std::abs(point[i].laplacian - rep.lambda * point[i].value));
      for (int j = i; j < k; ++j) {
        const cplx kap = bilinear_dot(point[i].gradient, point[j].gradient);
        rep.kappa_residual =
            std::max(rep.kappa_residual, std::abs(kap - rep.mu * point[i].value * point[j].value));
      }
    }

  const bool ok = rep.tau_residual < tol && rep.kappa_residual < tol && rep.lambda_spread < tol &&
                  rep.mu_spread < tol;
  rep.status = ok ? VerificationStatus::Pass : VerificationStatus::Fail;
  return rep;
}

}  // namespace lie
