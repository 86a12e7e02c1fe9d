#pragma once

#include <array>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "lie_eigenlab/morphism.hpp"

namespace lie {

/// The level set Psi = 0 of a complex constraint on a group: two real
/// equations, so codimension two at regular points.
class LevelSetSpec {
 public:
  LevelSetSpec(GroupSpec group, ScalarField psi, std::string label);

  /// Phi_H(z) = z_1^T H conj(z_2) on SU(n), n = H.rows().
  static LevelSetSpec phi_h(const Mat& h);
  /// beta (P o Phi) - alpha (Q o Phi); (alpha, beta) must be nonzero.
  static LevelSetSpec from_morphism(const ProjectiveMorphism& m, cplx alpha, cplx beta);

  const GroupSpec& group() const noexcept { return group_; }
  const ScalarField& psi() const noexcept { return psi_; }
  const std::string& label() const noexcept { return label_; }
  const std::optional<Mat>& h() const noexcept { return h_; }
  const std::optional<std::pair<cplx, cplx>>& xi() const noexcept { return xi_; }
  const Calculus& calculus() const noexcept { return *calc_; }

 private:
  GroupSpec group_;
  ScalarField psi_;
  std::string label_;
  std::optional<Mat> h_;
  std::optional<std::pair<cplx, cplx>> xi_;
  std::shared_ptr<const Calculus> calc_;
};

struct ManifoldPoint {
  GroupElement p;
  cplx value;
  RMat gradient;   // 2 x d: coefficients of grad Re Psi and grad Im Psi
  double sigma_min = 0.0;
  std::vector<AlgebraVector> tangent;
  int iterations = 0;
};

/// Validates |Psi(p)| < tol and computes the frame. Throws Precondition off
/// the level set and Singularity when the differential has rank < 2.
ManifoldPoint manifold_point(const LevelSetSpec& spec, const GroupElement& p, double tol = 1e-10);

/// True iff the smallest pairwise eigenvalue gap exceeds rel times the
/// spectral radius.
bool distinct_eigenvalues(const Mat& h, double rel = 1e-8);
/// Gaussian complex matrix, redrawn until its eigenvalues are distinct.
Mat random_distinct_matrix(int n, std::uint64_t seed);

struct RegularityReport {
  double grad_re_norm = 0.0;
  double grad_im_norm = 0.0;
  double sigma_min = 0.0;
  bool regular = false;
  /// For Phi_H: max gap between the commutator formula and gradient_coeffs.
  std::optional<double> commutator_discrepancy;
};

RegularityReport regularity_check(const LevelSetSpec& spec, const GroupElement& p, double tol = 1e-10);

/// X(Phi_H)(z) = <[z^{-1} H^T z, X], e_2 e_1^*> for every basis element X.
CVec commutator_gradient(const Mat& h, const Mat& z, const AlgebraBasis& basis);
/// The complex-linear extension of the same expression to gl(n, C); entry
/// (i, j) is its value on E_ij.
Mat complexified_differential(const Mat& h, const Mat& z);

/// Gauss-Newton on (Re Psi, Im Psi) = 0 with steps in the span of the two
/// gradients, then retraction. After convergence, `polish` further steps
/// are taken while they do not increase |Psi|.
ManifoldPoint newton_project(const LevelSetSpec& spec, const GroupElement& p0, int max_iter = 50,
                             double tol = 1e-12, int polish = 0);

/// Orthonormal complement of the two gradient directions, d - 2 vectors.
std::vector<AlgebraVector> tangent_basis(const LevelSetSpec& spec, const GroupElement& p);

struct CurvatureReport {
  Mat point;
  double h = 0.0;
  double norm = 0.0;                        // |normal part of sum_i c_i''(0)|
  std::vector<double> normal_accelerations;  // |normal part of c_i''(0)| per direction
  int tangent_dimension = 0;
  bool minimal = false;                      // norm < 500 h^2
};

/// Mean-curvature estimate from projected curves p exp(+-h t_i) measured in
/// the chart q -> log(p^{-1} q). h must lie in [1e-4, 1e-2].
CurvatureReport mean_curvature(const LevelSetSpec& spec, const ManifoldPoint& point, double h);

struct SampleOptions {
  /// Start near this point instead of from Haar samples.
  std::optional<GroupElement> center;
  double radius = 0.05;
  double dedupe = 1e-8;
  int max_iter = 50;
};

struct PointCloud {
  std::vector<ManifoldPoint> points;
  int requested = 0;
  int attempts = 0;
  std::vector<std::string> warnings;
};

/// Projects Haar (or local) starts onto the level set, dropping failures and
/// near-duplicates. Warns when fewer than half the requested points result.
PointCloud sample_manifold(const LevelSetSpec& spec, int count, std::uint64_t seed,
                           const SampleOptions& options = {});

/// Columns m{i}{j}_re, m{i}{j}_im for the row-major entries, then abs_psi,
/// sigma_min and, when given, curvature.
void write_csv(std::ostream& out, const PointCloud& cloud,
               const std::vector<std::optional<double>>& curvature = {});
/// ASCII PLY of three chosen coordinates from the CSV matrix columns.
void write_ply(std::ostream& out, const PointCloud& cloud, std::array<int, 3> coords = {0, 1, 2});

}  // namespace lie
