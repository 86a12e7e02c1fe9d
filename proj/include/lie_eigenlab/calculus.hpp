#pragma once

#include <optional>

#include "lie_eigenlab/field.hpp"

namespace lie {

enum class DerivativeMethod { Exact, CentralDifference };

struct DerivativeReport {
  cplx value;
  DerivativeMethod method = DerivativeMethod::Exact;
  std::optional<double> step;  // set only for CentralDifference
};

/// Central-difference stencil settings. order is 2, 4 or 6.
struct FiniteDifference {
  int order = 4;
  double first_step = 1e-5;
  double second_step = 1e-3;
};

/// Value, left-invariant gradient coefficients (X_k f)(p) and Laplacian of a
/// field at one point.
struct FieldJet {
  cplx value;
  CVec gradient;
  cplx laplacian;
  bool exact = true;
};

/// Left-invariant calculus on a group for a fixed orthonormal basis.
/// tau(f) = sum_X X^2 f, which is the Laplace-Beltrami operator for a
/// bi-invariant metric.
class Calculus {
 public:
  explicit Calculus(AlgebraBasis basis, FiniteDifference fd = {});

  const GroupSpec& spec() const noexcept { return basis_.spec(); }
  const AlgebraBasis& basis() const noexcept { return basis_; }
  const Mat& casimir() const noexcept { return casimir_; }
  const FiniteDifference& fd() const noexcept { return fd_; }
  int dimension() const noexcept { return basis_.size(); }

  FieldJet jet(const ScalarField& f, const GroupElement& p) const;

 private:
  FieldJet jet_at(const ScalarField& f, const Mat& g) const;
  FieldJet fd_jet(const ScalarField& f, const Mat& g) const;

  AlgebraBasis basis_;
  Mat casimir_;
  FiniteDifference fd_;
};

/// d/dt f(p exp(tX)) at t = 0.
DerivativeReport directional_derivative(const Calculus& calc, const ScalarField& f,
                                        const GroupElement& p, const AlgebraVector& x);
DerivativeReport laplacian(const Calculus& calc, const ScalarField& f, const GroupElement& p);
/// (X f)(p) for X in the basis.
CVec gradient_coeffs(const Calculus& calc, const ScalarField& f, const GroupElement& p);
/// sum_X X(f) X(g), complex bilinear.
DerivativeReport kappa(const Calculus& calc, const ScalarField& f, const ScalarField& g,
                       const GroupElement& p);

/// Checks tau(fg) = f tau(g) + g tau(f) + 2 kappa(f, g) with the left side
/// taken by sixth-order differences (h = 1e-2) of the product and the right
/// side exactly. tol is relative to max(1, |rhs|).
bool product_rule_check(const Calculus& calc, const ScalarField& f, const ScalarField& g,
                        const GroupElement& p, double tol = 1e-9);

/// exp(Y) - I by its power series, accurate relative to |Y| for small Y.
Mat expm1(const Mat& y);
/// f(p (I + E)) - f(p) for structured fields, with rounding error of order
/// eps |E| instead of eps |f(p)|. Black boxes are differenced directly.
cplx field_increment(const ScalarField& f, const Mat& p, const Mat& e);

/// Central-difference derivatives along t -> f(p exp(tX)).
cplx fd_first_derivative(const ScalarField& f, const Mat& p, const Mat& x, double h, int order);
cplx fd_second_derivative(const ScalarField& f, const Mat& p, const Mat& x, double h, int order);

}  // namespace lie
