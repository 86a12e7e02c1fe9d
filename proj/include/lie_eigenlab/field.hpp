#pragma once

#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "lie_eigenlab/group.hpp"

namespace lie {

/// How a linear coefficient q(ga, b) pairs its two vectors.
enum class Form {
  Hermitian,      // <ga, b> = b^* g a
  ConjHermitian,  // <b, ga> = conj(b^* g a)
  Bilinear,       // (ga)^T b
};

class ScalarField;

namespace field {

/// f(g) = trace(K g) + trace(K' conj(g)); covers q(ga, b) for every Form.
struct LinearCoefficient {
  Mat k;
  Mat k_conj;
};

/// f(g) = <g A g^{-1}, B> = trace(g A g^* B^*).
struct AdjointCoefficient {
  Mat a;
  Mat b;
};

/// One Laurent monomial coeff * prod_i child_i^exponents[i].
struct Term {
  cplx coeff;
  std::vector<int> exponents;
};

/// A polynomial (negative exponents allowed) in child fields.
struct Polynomial {
  std::vector<ScalarField> children;
  std::vector<Term> terms;
};

struct BlackBox {
  std::function<cplx(const Mat&)> fn;
};

using Node = std::variant<LinearCoefficient, AdjointCoefficient, Polynomial, BlackBox>;

}  // namespace field

/// A complex-valued function on a matrix group. Structured variants carry
/// enough data for exact derivatives; BlackBox falls back to differences.
class ScalarField {
 public:
  ScalarField(GroupSpec spec, field::Node node, std::string label = {});

  const GroupSpec& spec() const noexcept { return spec_; }
  const field::Node& node() const noexcept { return *node_; }
  const std::string& label() const noexcept { return label_; }
  bool is_structured() const noexcept;
  /// "linear", "adjoint", "polynomial" or "black-box".
  std::string tag() const;

  cplx operator()(const Mat& g) const;
  cplx operator()(const GroupElement& g) const { return (*this)(g.matrix()); }

  /// Same evaluation rule with every structural hint removed.
  ScalarField black_box() const;
  ScalarField conjugate() const;
  ScalarField with_label(std::string label) const;

 private:
  GroupSpec spec_;
  std::shared_ptr<const field::Node> node_;
  std::string label_;
};

// Constructors for the structured forms.

/// q(ga, b) with the chosen pairing.
ScalarField linear_coefficient(const GroupSpec& spec, Form form, const CVec& a, const CVec& b,
                               std::string label = {});
/// <g A g^{-1}, B>.
ScalarField adjoint_coefficient(const GroupSpec& spec, const Mat& a, const Mat& b,
                                std::string label = {});
ScalarField constant_field(const GroupSpec& spec, cplx value);
ScalarField polynomial_field(const GroupSpec& spec, std::vector<ScalarField> children,
                             std::vector<field::Term> terms, std::string label = {});
ScalarField black_box_field(const GroupSpec& spec, std::function<cplx(const Mat&)> fn,
                            std::string label = {});

ScalarField operator*(const ScalarField& f, const ScalarField& g);
ScalarField operator+(const ScalarField& f, const ScalarField& g);
ScalarField operator-(const ScalarField& f, const ScalarField& g);
ScalarField operator*(cplx c, const ScalarField& f);
/// f / g as a Laurent monomial.
ScalarField operator/(const ScalarField& f, const ScalarField& g);

/// The standard basis vector e_i of C^m.
CVec unit_vector(int m, int i);

}  // namespace lie
