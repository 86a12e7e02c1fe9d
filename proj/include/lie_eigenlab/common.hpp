#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace lie {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

/// Numerical tolerances shared by every module. Individual operations take
/// their own thresholds where the caller needs to override one.
struct Tolerances {
  double membership = 1e-12;
  double gram = 1e-12;
  double retraction = 1e-10;
  double algebra = 1e-12;
  double isotropy = 1e-12;
};

inline constexpr Tolerances kTolerances{};

/// Error categories. Each maps onto one CLI exit code.
enum class ErrorKind {
  InvalidSpec,      // bad group/family parameters
  Precondition,     // violated operation precondition
  SpecMismatch,     // objects from different groups combined
  Singularity,      // rank-deficient constraint differential
  Retraction,       // matrix too far from the group
  NonConvergence,   // iteration budget exhausted
  Domain,           // argument outside mathematical domain
  NotOrthogonal,    // cross conformality probe failed
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidSpec: return "invalid-spec";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::SpecMismatch: return "spec-mismatch";
    case ErrorKind::Singularity: return "singularity";
    case ErrorKind::Retraction: return "retraction-failure";
    case ErrorKind::NonConvergence: return "non-convergence";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::NotOrthogonal: return "not-orthogonal";
  }
  return "unknown";
}

/// Largest absolute entry; the norm used for all membership tolerances.
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// Hermitian trace inner product <A,B> = trace(A B^*).
inline cplx trace_inner(const Mat& a, const Mat& b) {
  return (a.array() * b.conjugate().array()).sum();
}

/// Integer power of a complex number, negative exponents allowed.
inline cplx ipow(cplx base, int exponent) {
  if (exponent < 0) return cplx(1.0) / ipow(base, -exponent);
  cplx result(1.0);
  for (int i = 0; i < exponent; ++i) result *= base;
  return result;
}

}  // namespace lie
