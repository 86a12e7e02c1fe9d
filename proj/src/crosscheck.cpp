#include "lie_eigenlab/families.hpp"
#include "lie_eigenlab/roots.hpp"

namespace lie {

namespace {

EigenFamily catalogued_family(const GroupSpec& spec, const std::string& label) {
  const int n = spec.n();
  const int m = spec.matrix_size();
  if (label == "zero") {
    return EigenFamily(spec, "constant", {constant_field(spec, 1.0)}, 1, cplx(0.0), cplx(0.0));
  }
  switch (spec.family()) {
    case Family::SU:
      if (label == "standard") return su_standard(n, unit_vector(m, 0));
      if (label == "dual") return su_dual(n, unit_vector(m, 0));
      if (label == "adjoint") return su_tensor(n, unit_vector(m, 0), unit_vector(m, 1));
      break;
    case Family::SO:
      if (label == "standard") {
        CVec a = CVec::Zero(m);
        a[0] = 1.0;
        a[1] = cplx(0.0, 1.0);
        return so_isotropic(n, a);
      }
      break;
    case Family::Sp:
      if (label == "standard") return sp_standard(n, unit_vector(m, 0));
      break;
  }
  throw Error(ErrorKind::InvalidSpec, "no catalogued family '" + label + "' on " + spec.name());
}

// Scalar by which sum_X ad_X^2 acts on the algebra.
double adjoint_casimir(const AlgebraBasis& basis) {
  double trace = 0.0;
  for (const auto& y : basis.elements()) {
    Mat acc = Mat::Zero(y.matrix().rows(), y.matrix().cols());
    for (const auto& x : basis.elements()) {
      const Mat c = x.matrix() * y.matrix() - y.matrix() * x.matrix();
      acc += x.matrix() * c - c * x.matrix();
    }
    trace += trace_inner(acc, y.matrix()).real();
  }
  return trace / basis.size();
}

}  // namespace

CasimirCrosscheck crosscheck_casimir(const GroupSpec& spec, const std::string& label, int samples,
                                     std::uint64_t seed) {
  const EigenFamily family = catalogued_family(spec, label);
  const RootSystem roots = root_system(spec);
  const AlgebraBasis basis = build_basis(spec);

  CasimirCrosscheck out;
  out.group = spec.name();
  out.label = label;
  out.samples = samples;
  out.alpha = casimir_eigenvalue(named_weight(roots, label), roots);
  if (label == "standard" || label == "dual") {
    const Mat c = basis.casimir();
    out.brute_force = c.trace().real() / c.rows();
  } else if (label == "adjoint") {
    out.brute_force = adjoint_casimir(basis);
  }
  const VerificationReport rep = verify_family(family, samples, seed);
  out.measured = rep.lambda.real();
  out.measured_imag = rep.lambda.imag();
  out.discrepancy = std::max({std::abs(rep.lambda - out.alpha), std::abs(out.brute_force - out.alpha)});
  return out;
}

}  // namespace lie
