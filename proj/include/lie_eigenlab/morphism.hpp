#pragma once

#include <istream>
#include <map>
#include <string>
#include <vector>

#include "lie_eigenlab/families.hpp"

namespace lie {

/// Homogeneous polynomial in k variables, stored sparsely by exponent vector.
class HomogeneousPoly {
 public:
  using Terms = std::map<std::vector<int>, cplx>;

  /// Merges repeated exponent vectors. Throws Precondition when exponents
  /// disagree in length or total degree, or when every coefficient is zero.
  HomogeneousPoly(int variables, const std::vector<std::pair<std::vector<int>, cplx>>& terms);

  int variables() const noexcept { return variables_; }
  int degree() const noexcept { return degree_; }
  const Terms& terms() const noexcept { return terms_; }

  cplx operator()(const std::vector<cplx>& x) const;
  HomogeneousPoly scaled(cplx c) const;
  /// P(phi_1, ..., phi_k) as a polynomial field.
  ScalarField compose(const GroupSpec& spec, const std::vector<ScalarField>& fields,
                      std::string label = {}) const;
  std::string to_text() const;

 private:
  int variables_;
  int degree_ = 0;
  Terms terms_;
};

/// One term per line: "re im : e_1 e_2 ... e_k" with e_i the exponent of
/// variable i. Blank lines and lines starting with '#' are skipped.
HomogeneousPoly parse_polynomial(std::istream& in, int variables);
HomogeneousPoly parse_polynomial(const std::string& text, int variables);

/// Random polynomial of the given degree with up to `terms` monomials and
/// Gaussian coefficients.
HomogeneousPoly random_homogeneous(int variables, int degree, int terms, std::uint64_t seed);

/// p -> [P(phi(p)), Q(phi(p))] into the projective line.
class ProjectiveMorphism {
 public:
  ProjectiveMorphism(EigenFamily family, std::vector<ScalarField> fields, HomogeneousPoly p,
                     HomogeneousPoly q);

  const EigenFamily& family() const noexcept { return family_; }
  const std::vector<ScalarField>& fields() const noexcept { return fields_; }
  const HomogeneousPoly& p() const noexcept { return p_; }
  const HomogeneousPoly& q() const noexcept { return q_; }
  /// P o Phi and Q o Phi.
  const ScalarField& p_field() const noexcept { return p_field_; }
  const ScalarField& q_field() const noexcept { return q_field_; }
  /// (P o Phi) / (Q o Phi).
  const ScalarField& chart() const noexcept { return chart_; }
  /// (Q o Phi) / (P o Phi).
  const ScalarField& opposite_chart() const noexcept { return opposite_; }

  std::pair<cplx, cplx> operator()(const GroupElement& g) const;
  bool in_domain(const GroupElement& g, double eps = 1e-12) const;

 private:
  EigenFamily family_;
  std::vector<ScalarField> fields_;
  HomogeneousPoly p_, q_;
  ScalarField p_field_, q_field_, chart_, opposite_;
};

/// Builds [P o Phi, Q o Phi] from the chosen members. Throws Precondition
/// for a variable-count or degree mismatch and for linearly dependent P, Q.
ProjectiveMorphism build_morphism(const EigenFamily& family, const std::vector<int>& members,
                                  const HomogeneousPoly& p, const HomogeneousPoly& q);

enum class Chart { Primary, Opposite };

struct MorphismReport {
  std::string chart;
  int samples = 0;
  int used = 0;
  double median_denominator = 0.0;
  double tau_residual = 0.0;
  double kappa_residual = 0.0;
  double tol = 0.0;
  VerificationStatus status = VerificationStatus::Inconclusive;
};

/// Checks tau(f) = 0 and kappa(f, f) = 0 for the chart field f at Haar
/// samples whose denominator exceeds 0.1 times its median.
MorphismReport verify_harmonic_morphism(const ProjectiveMorphism& m, int samples, std::uint64_t seed,
                                        double tol = 1e-8, Chart chart = Chart::Primary);

struct SingularSetReport {
  int samples = 0;
  double sampled_floor = 0.0;  // best over the raw samples
  double floor = 0.0;          // after refinement
  bool likely_empty = false;
  Mat witness;                 // point attaining the floor
};

/// Estimates min max(|P o Phi|, |Q o Phi|) by Haar sampling followed by
/// Gauss-Newton refinement of the best samples. likely_empty when the floor
/// exceeds empty_floor.
SingularSetReport singular_set_probe(const ProjectiveMorphism& m, int samples, std::uint64_t seed,
                                     double empty_floor = 0.01);

}  // namespace lie
