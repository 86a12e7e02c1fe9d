#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lie_eigenlab/calculus.hpp"

namespace lie {

/// A finite spanning set of members of an eigenfamily. Index spaces are
/// complex vector spaces, so the members stored are a canonical basis and
/// everything else follows by linearity.
class EigenFamily {
 public:
  EigenFamily(GroupSpec spec, std::string label, std::vector<ScalarField> members,
              int index_dimension, std::optional<cplx> expected_lambda = {},
              std::optional<cplx> expected_mu = {});

  const GroupSpec& spec() const noexcept { return spec_; }
  const std::string& label() const noexcept { return label_; }
  const std::vector<ScalarField>& members() const noexcept { return members_; }
  const ScalarField& member(int i) const { return members_.at(i); }
  int size() const noexcept { return static_cast<int>(members_.size()); }
  int index_dimension() const noexcept { return index_dimension_; }
  const std::optional<cplx>& expected_lambda() const noexcept { return expected_lambda_; }
  const std::optional<cplx>& expected_mu() const noexcept { return expected_mu_; }

  /// sum_i coeffs[i] * member(i).
  ScalarField combination(const CVec& coeffs) const;
  /// Copy with member i replaced by member(i) + extra.
  EigenFamily with_corrupted_member(int i, const ScalarField& extra) const;

 private:
  GroupSpec spec_;
  std::string label_;
  std::vector<ScalarField> members_;
  int index_dimension_;
  std::optional<cplx> expected_lambda_;
  std::optional<cplx> expected_mu_;
};

/// z -> <z a, c> on SU(n); members c = e_1..e_n.
EigenFamily su_standard(int n, const CVec& a);
/// z -> <c, z a> on SU(n).
EigenFamily su_dual(int n, const CVec& a);
/// x -> (x a)^T c on SO(n) for isotropic a (sum a_i^2 = 0).
EigenFamily so_isotropic(int n, const CVec& a);
/// q -> <q a, c> on Sp(n), a in C^{2n}.
EigenFamily sp_standard(int n, const CVec& a);
/// z -> (z a)^T A conj(z b) on SU(n) for a orthogonal to b; members A = E_ij.
EigenFamily su_tensor(int n, const CVec& a, const CVec& b);
/// z -> sum_r z_{2r-1}^T A_r conj(z_{2r}) on SU(n), 2s <= n; members are the
/// single-slot matrix units, s n^2 of them.
EigenFamily su_extended(int n, int s);

/// True when sum a_i^2 = 0. Exact for Gaussian-integer entries.
bool is_isotropic(const CVec& a, double tol = kTolerances.isotropy);

/// Result of probing kappa(phi, psi) = nu phi psi on cross pairs.
struct CrossProbe {
  cplx nu;
  double max_residual = 0.0;
  int points = 0;
};

CrossProbe probe_cross_kappa(const Calculus& calc, const EigenFamily& f, const EigenFamily& g,
                             int points = 20, std::uint64_t seed = 2024, int max_pairs = 64);

/// Family of products phi psi. Requires kappa(phi, psi) = nu phi psi across
/// the two families for one constant nu (nu = 0 is the orthogonal case);
/// otherwise throws NotOrthogonal.
EigenFamily product_family(const EigenFamily& f, const EigenFamily& g, double tol = 1e-10);

enum class VerificationStatus { Pass, Fail, Inconclusive };
std::string to_string(VerificationStatus status);

struct VerificationReport {
  std::string family;
  std::string group;
  int samples = 0;
  int members = 0;
  int pairs = 0;
  cplx lambda;
  cplx mu;
  double lambda_spread = 0.0;
  double mu_spread = 0.0;
  double tau_residual = 0.0;
  double kappa_residual = 0.0;
  double tol = 0.0;
  VerificationStatus status = VerificationStatus::Inconclusive;
  std::string note;
};

/// Fits lambda and mu by least squares over Haar samples and all member
/// pairs i <= j, and reports residuals and spreads of the per-member and
/// per-pair fits.
VerificationReport verify_family(const EigenFamily& f, int samples, std::uint64_t seed,
                                 double tol = 1e-8);

}  // namespace lie
