#include "lie_eigenlab/field.hpp"

namespace lie {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

cplx evaluate(const field::Node& node, const Mat& g) {
  return std::visit(
      overloaded{
          [&](const field::LinearCoefficient& f) -> cplx {
            return (f.k.transpose().array() * g.array()).sum() +
                   (f.k_conj.transpose().array() * g.conjugate().array()).sum();
          },
          [&](const field::AdjointCoefficient& f) -> cplx {
            return trace_inner(g * f.a * g.adjoint(), f.b);
          },
          [&](const field::Polynomial& f) -> cplx {
            std::vector<cplx> values;
            values.reserve(f.children.size());
            for (const auto& c : f.children) values.push_back(c(g));
            cplx sum(0.0);
            for (const auto& t : f.terms) {
              cplx v = t.coeff;
              for (std::size_t i = 0; i < values.size(); ++i) v *= ipow(values[i], t.exponents[i]);
              sum += v;
            }
            return sum;
          },
          [&](const field::BlackBox& f) -> cplx { return f.fn(g); },
      },
      node);
}

}  // namespace

ScalarField::ScalarField(GroupSpec spec, field::Node node, std::string label)
    : spec_(spec), node_(std::make_shared<const field::Node>(std::move(node))), label_(std::move(label)) {
  if (const auto* p = std::get_if<field::Polynomial>(node_.get())) {
    for (const auto& c : p->children) {
      if (!(c.spec() == spec_)) throw Error(ErrorKind::SpecMismatch, "polynomial child spec");
    }
    for (const auto& t : p->terms) {
      if (t.exponents.size() != p->children.size()) {
        throw Error(ErrorKind::Precondition, "term exponent count does not match child count");
      }
    }
  }
}

bool ScalarField::is_structured() const noexcept {
  return std::visit(overloaded{
                        [](const field::BlackBox&) { return false; },
                        [](const field::Polynomial& p) {
                          for (const auto& c : p.children)
                            if (!c.is_structured()) return false;
                          return true;
                        },
                        [](const auto&) { return true; },
                    },
                    *node_);
}

std::string ScalarField::tag() const {
  return std::visit(overloaded{
                        [](const field::LinearCoefficient&) { return std::string("linear"); },
                        [](const field::AdjointCoefficient&) { return std::string("adjoint"); },
                        [](const field::Polynomial&) { return std::string("polynomial"); },
                        [](const field::BlackBox&) { return std::string("black-box"); },
                    },
                    *node_);
}

cplx ScalarField::operator()(const Mat& g) const { return evaluate(*node_, g); }

ScalarField ScalarField::black_box() const {
  auto node = node_;
  return ScalarField(spec_, field::BlackBox{[node](const Mat& g) { return evaluate(*node, g); }},
                     label_);
}

ScalarField ScalarField::conjugate() const {
  const std::string label = label_.empty() ? std::string() : "conj(" + label_ + ")";
  return std::visit(
      overloaded{
          [&](const field::LinearCoefficient& f) {
            return ScalarField(spec_, field::LinearCoefficient{f.k_conj.conjugate(), f.k.conjugate()},
                               label);
          },
          // conj <gAg^*, B> = <g A^* g^*, B^*> on unitary g
          [&](const field::AdjointCoefficient& f) {
            return ScalarField(spec_, field::AdjointCoefficient{f.a.adjoint(), f.b.adjoint()}, label);
          },
          [&](const field::Polynomial& f) {
            field::Polynomial out;
            for (const auto& c : f.children) out.children.push_back(c.conjugate());
            for (const auto& t : f.terms) out.terms.push_back({std::conj(t.coeff), t.exponents});
            return ScalarField(spec_, std::move(out), label);
          },
          [&](const field::BlackBox& f) {
            auto fn = f.fn;
            return ScalarField(spec_, field::BlackBox{[fn](const Mat& g) { return std::conj(fn(g)); }},
                               label);
          },
      },
      *node_);
}

ScalarField ScalarField::with_label(std::string label) const {
  ScalarField out = *this;
  out.label_ = std::move(label);
  return out;
}

ScalarField linear_coefficient(const GroupSpec& spec, Form form, const CVec& a, const CVec& b,
                               std::string label) {
  const int m = spec.matrix_size();
  if (a.size() != m || b.size() != m) {
    throw Error(ErrorKind::Precondition, "coefficient vectors must have length " + std::to_string(m));
  }
  field::LinearCoefficient f{Mat::Zero(m, m), Mat::Zero(m, m)};
  switch (form) {
    case Form::Hermitian: f.k = a * b.adjoint(); break;
    case Form::ConjHermitian: f.k_conj = a.conjugate() * b.transpose(); break;
    case Form::Bilinear: f.k = a * b.transpose(); break;
  }
  return ScalarField(spec, std::move(f), std::move(label));
}

ScalarField adjoint_coefficient(const GroupSpec& spec, const Mat& a, const Mat& b, std::string label) {
  const int m = spec.matrix_size();
  if (a.rows() != m || a.cols() != m || b.rows() != m || b.cols() != m) {
    throw Error(ErrorKind::Precondition, "adjoint coefficient matrices must be square of size " +
                                             std::to_string(m));
  }
  return ScalarField(spec, field::AdjointCoefficient{a, b}, std::move(label));
}

ScalarField constant_field(const GroupSpec& spec, cplx value) {
  return ScalarField(spec, field::Polynomial{{}, {field::Term{value, {}}}}, "const");
}

ScalarField polynomial_field(const GroupSpec& spec, std::vector<ScalarField> children,
                             std::vector<field::Term> terms, std::string label) {
  return ScalarField(spec, field::Polynomial{std::move(children), std::move(terms)}, std::move(label));
}

ScalarField black_box_field(const GroupSpec& spec, std::function<cplx(const Mat&)> fn,
                            std::string label) {
  return ScalarField(spec, field::BlackBox{std::move(fn)}, std::move(label));
}

namespace {

ScalarField binary(const ScalarField& f, const ScalarField& g, std::vector<field::Term> terms) {
  if (!(f.spec() == g.spec())) throw Error(ErrorKind::SpecMismatch, "field arithmetic across specs");
  return polynomial_field(f.spec(), {f, g}, std::move(terms));
}

}  // namespace

ScalarField operator*(const ScalarField& f, const ScalarField& g) {
  return binary(f, g, {{1.0, {1, 1}}});
}

ScalarField operator+(const ScalarField& f, const ScalarField& g) {
  return binary(f, g, {{1.0, {1, 0}}, {1.0, {0, 1}}});
}

ScalarField operator-(const ScalarField& f, const ScalarField& g) {
  return binary(f, g, {{1.0, {1, 0}}, {-1.0, {0, 1}}});
}

ScalarField operator*(cplx c, const ScalarField& f) {
  return polynomial_field(f.spec(), {f}, {{c, {1}}});
}

ScalarField operator/(const ScalarField& f, const ScalarField& g) {
  return binary(f, g, {{1.0, {1, -1}}});
}

CVec unit_vector(int m, int i) {
  CVec e = CVec::Zero(m);
  e[i] = 1.0;
  return e;
}

}  // namespace lie
