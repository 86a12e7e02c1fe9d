#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lie_eigenlab/common.hpp"

namespace lie {

enum class Family { SU, SO, Sp };

std::string to_string(Family family);
Family parse_family(const std::string& name);

/// A compact matrix group: SU(n), SO(n) or Sp(n). Sp(n) is realized as
/// 2n x 2n unitary matrices preserving J = [[0, I], [-I, 0]].
class GroupSpec {
 public:
  /// Throws InvalidSpec for SU with n < 2, Sp with n < 1, SO with n < 3.
  GroupSpec(Family family, int n);

  Family family() const noexcept { return family_; }
  int n() const noexcept { return n_; }
  /// Size of the realizing matrices.
  int matrix_size() const noexcept { return family_ == Family::Sp ? 2 * n_ : n_; }
  /// Real dimension of the group.
  int dimension() const noexcept;
  std::string name() const;

  friend bool operator==(const GroupSpec&, const GroupSpec&) = default;

 private:
  Family family_;
  int n_;
};

/// The standard skew form on C^{2n}.
Mat symplectic_form(int n);

/// Largest violation of the defining equations of the group.
double membership_residual(const GroupSpec& spec, const Mat& m);
/// Largest violation of the Lie algebra conditions.
double algebra_residual(const GroupSpec& spec, const Mat& x);

class GroupElement {
 public:
  /// Validates membership at kTolerances.membership (scaled by matrix size).
  GroupElement(GroupSpec spec, Mat matrix);

  static GroupElement identity(const GroupSpec& spec);
  /// Skips validation; for matrices produced by group operations.
  static GroupElement unchecked(GroupSpec spec, Mat matrix);

  const GroupSpec& spec() const noexcept { return spec_; }
  const Mat& matrix() const noexcept { return matrix_; }
  GroupElement inverse() const { return unchecked(spec_, matrix_.adjoint()); }

 private:
  struct Unchecked {};
  GroupElement(GroupSpec spec, Mat matrix, Unchecked)
      : spec_(spec), matrix_(std::move(matrix)) {}

  GroupSpec spec_;
  Mat matrix_;
};

GroupElement operator*(const GroupElement& a, const GroupElement& b);
double distance(const GroupElement& a, const GroupElement& b);

class AlgebraVector {
 public:
  /// Validates algebra membership at kTolerances.algebra.
  AlgebraVector(GroupSpec spec, Mat matrix);
  static AlgebraVector unchecked(GroupSpec spec, Mat matrix);

  const GroupSpec& spec() const noexcept { return spec_; }
  const Mat& matrix() const noexcept { return matrix_; }

  AlgebraVector operator*(double s) const { return unchecked(spec_, matrix_ * s); }
  AlgebraVector operator+(const AlgebraVector& o) const;

 private:
  struct Unchecked {};
  AlgebraVector(GroupSpec spec, Mat matrix, Unchecked)
      : spec_(spec), matrix_(std::move(matrix)) {}

  GroupSpec spec_;
  Mat matrix_;
};

/// Real inner product <X,Y> = Re trace(X Y^*) on the Lie algebra.
double metric(const AlgebraVector& x, const AlgebraVector& y);

/// Ordered orthonormal basis of the Lie algebra.
class AlgebraBasis {
 public:
  /// Checks cardinality, membership and Gram = I at kTolerances.gram.
  AlgebraBasis(GroupSpec spec, std::vector<AlgebraVector> elements);

  const GroupSpec& spec() const noexcept { return spec_; }
  int size() const noexcept { return static_cast<int>(elements_.size()); }
  const AlgebraVector& operator[](int i) const { return elements_[i]; }
  const std::vector<AlgebraVector>& elements() const noexcept { return elements_; }

  /// Coordinates of an (anti-Hermitian) matrix in this basis.
  RVec coefficients(const Mat& x) const;
  AlgebraVector combine(const RVec& coeffs) const;
  RMat gram() const;
  /// The Casimir element sum_X X^2 acting on the defining representation.
  Mat casimir() const;
  /// New basis X'_i = sum_j rotation(i,j) X_j; rotation must be orthogonal.
  AlgebraBasis recombined(const RMat& rotation) const;

 private:
  GroupSpec spec_;
  std::vector<AlgebraVector> elements_;
};

/// Deterministic orthonormal basis: off-diagonal pairs first, then the
/// torus (for Sp: the u(n) block, then the symmetric block).
AlgebraBasis build_basis(const GroupSpec& spec);

/// Haar-distributed element; identical output for identical seed.
GroupElement haar_sample(const GroupSpec& spec, std::uint64_t seed);
/// Seed for the i-th member of a batch, independent of evaluation order.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Matrix exponential (Pade scaling-and-squaring).
Mat expm(const Mat& x);
/// Principal matrix logarithm.
Mat logm(const Mat& x);

/// p * exp(t X).
GroupElement group_exp(const GroupElement& p, const AlgebraVector& x, double t);

/// Polar-type projection of a nearby matrix onto the group. Throws
/// Retraction when a singular value of m leaves [0.5, 1.5].
GroupElement retract_to_group(const Mat& m, const GroupSpec& spec);

}  // namespace lie
