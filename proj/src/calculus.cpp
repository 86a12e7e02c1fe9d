#include "lie_eigenlab/calculus.hpp"

#include <tuple>

namespace lie {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

cplx bilinear_dot(const CVec& a, const CVec& b) { return (a.array() * b.array()).sum(); }

cplx linear_eval(const field::LinearCoefficient& f, const Mat& gx) {
  return (f.k.transpose().array() * gx.array()).sum() +
         (f.k_conj.transpose().array() * gx.conjugate().array()).sum();
}

// Partial derivatives of a Laurent polynomial at given child values.
struct PolynomialPartials {
  cplx value;
  CVec first;
  Mat second;
};

PolynomialPartials polynomial_partials(const field::Polynomial& poly, const std::vector<cplx>& v) {
  const int k = static_cast<int>(v.size());
  PolynomialPartials out{cplx(0.0), CVec::Zero(k), Mat::Zero(k, k)};
  std::vector<int> e(k);
  for (const auto& term : poly.terms) {
    auto product = [&](const std::vector<int>& exps) {
      cplx r = term.coeff;
      for (int i = 0; i < k; ++i) r *= ipow(v[i], exps[i]);
      return r;
    };
    out.value += product(term.exponents);
    for (int i = 0; i < k; ++i) {
      const int ei = term.exponents[i];
      if (ei == 0) continue;
      e = term.exponents;
      e[i] -= 1;
      out.first[i] += double(ei) * product(e);
      for (int j = 0; j < k; ++j) {
        const int ej = e[j];
        if (ej == 0) continue;
        auto e2 = e;
        e2[j] -= 1;
        out.second(i, j) += double(ei) * double(ej) * product(e2);
      }
    }
  }
  return out;
}

Mat curve_point(const Mat& p, const Mat& x, double t) { return p * expm(t * x); }

// Central stencils: weights for offsets 1..r (antisymmetric for the first
// derivative, symmetric for the second, with the centre weight separate).
struct Stencil {
  std::vector<double> weights;
  double centre;
  double denominator;
};

Stencil first_stencil(int order) {
  switch (order) {
    case 2: return {{0.5}, 0.0, 1.0};
    case 4: return {{8.0, -1.0}, 0.0, 12.0};
    case 6: return {{45.0, -9.0, 1.0}, 0.0, 60.0};
  }
  throw Error(ErrorKind::Precondition, "finite-difference order must be 2, 4 or 6");
}

Stencil second_stencil(int order) {
  switch (order) {
    case 2: return {{1.0}, -2.0, 1.0};
    case 4: return {{16.0, -1.0}, -30.0, 12.0};
    case 6: return {{270.0, -27.0, 2.0}, -490.0, 180.0};
  }
  throw Error(ErrorKind::Precondition, "finite-difference order must be 2, 4 or 6");
}


}  // namespace

Calculus::Calculus(AlgebraBasis basis, FiniteDifference fd)
    : basis_(std::move(basis)), casimir_(basis_.casimir()), fd_(fd) {
  first_stencil(fd_.order);
}

FieldJet Calculus::jet(const ScalarField& f, const GroupElement& p) const {
  if (!(f.spec() == spec()) || !(p.spec() == spec())) {
    throw Error(ErrorKind::SpecMismatch, "field, point and basis must share a group");
  }
  return jet_at(f, p.matrix());
}

FieldJet Calculus::jet_at(const ScalarField& f, const Mat& g) const {
  const int d = dimension();
  return std::visit(
      overloaded{
          [&](const field::LinearCoefficient& lc) {
            FieldJet j{linear_eval(lc, g), CVec(d), cplx(0.0), true};
            for (int k = 0; k < d; ++k) j.gradient[k] = linear_eval(lc, g * basis_[k].matrix());
            j.laplacian = linear_eval(lc, g * casimir_);
            return j;
          },
          [&](const field::AdjointCoefficient& ac) {
            // f(g e^{tX}) = trace(e^{tX} A e^{-tX} W) with W = g^* B^* g.
            const Mat w = g.adjoint() * ac.b.adjoint() * g;
            FieldJet j{(ac.a * w).trace(), CVec(d), cplx(0.0), true};
            Mat second = Mat::Zero(ac.a.rows(), ac.a.cols());
            for (int k = 0; k < d; ++k) {
              const Mat& x = basis_[k].matrix();
              const Mat c1 = x * ac.a - ac.a * x;
              j.gradient[k] = (c1 * w).trace();
              second += x * c1 - c1 * x;
            }
            j.laplacian = (second * w).trace();
            return j;
          },
          [&](const field::Polynomial& poly) {
            const int k = static_cast<int>(poly.children.size());
            std::vector<FieldJet> kids;
            std::vector<cplx> values;
            kids.reserve(k);
            for (const auto& c : poly.children) {
              kids.push_back(jet_at(c, g));
              values.push_back(kids.back().value);
            }
            const PolynomialPartials pp = polynomial_partials(poly, values);
            FieldJet j{pp.value, CVec::Zero(d), cplx(0.0), true};
            for (int i = 0; i < k; ++i) {
              j.exact = j.exact && kids[i].exact;
              if (pp.first[i] == cplx(0.0)) continue;
              j.gradient += pp.first[i] * kids[i].gradient;
              j.laplacian += pp.first[i] * kids[i].laplacian;
            }
            for (int a = 0; a < k; ++a)
              for (int b = 0; b < k; ++b)
                if (pp.second(a, b) != cplx(0.0))
                  j.laplacian += pp.second(a, b) * bilinear_dot(kids[a].gradient, kids[b].gradient);
            return j;
          },
          [&](const field::BlackBox&) { return fd_jet(f, g); },
      },
      f.node());
}

FieldJet Calculus::fd_jet(const ScalarField& f, const Mat& g) const {
  const int d = dimension();
  FieldJet j{f(g), CVec(d), cplx(0.0), false};
  for (int k = 0; k < d; ++k) {
    const Mat& x = basis_[k].matrix();
    j.gradient[k] = fd_first_derivative(f, g, x, fd_.first_step, fd_.order);
    j.laplacian += fd_second_derivative(f, g, x, fd_.second_step, fd_.order);
  }
  return j;
}

cplx fd_first_derivative(const ScalarField& f, const Mat& p, const Mat& x, double h, int order) {
  const Stencil s = first_stencil(order);
  cplx sum(0.0);
  for (std::size_t k = 0; k < s.weights.size(); ++k) {
    const double t = double(k + 1) * h;
    sum += s.weights[k] * (f(curve_point(p, x, t)) - f(curve_point(p, x, -t)));
  }
  return sum / (s.denominator * h);
}

cplx fd_second_derivative(const ScalarField& f, const Mat& p, const Mat& x, double h, int order) {
  const Stencil s = second_stencil(order);
  cplx sum = s.centre * f(p);
  for (std::size_t k = 0; k < s.weights.size(); ++k) {
    const double t = double(k + 1) * h;
    sum += s.weights[k] * (f(curve_point(p, x, t)) + f(curve_point(p, x, -t)));
  }
  return sum / (s.denominator * h * h);
}

namespace {

cplx exact_derivative(const ScalarField& f, const Mat& g, const Mat& x) {
  return std::visit(
      overloaded{
          [&](const field::LinearCoefficient& lc) { return linear_eval(lc, g * x); },
          [&](const field::AdjointCoefficient& ac) {
            const Mat w = g.adjoint() * ac.b.adjoint() * g;
            return ((x * ac.a - ac.a * x) * w).trace();
          },
          [&](const field::Polynomial& poly) {
            std::vector<cplx> values;
            for (const auto& c : poly.children) values.push_back(c(g));
            const PolynomialPartials pp = polynomial_partials(poly, values);
            cplx sum(0.0);
            for (std::size_t i = 0; i < poly.children.size(); ++i) {
              if (pp.first[i] != cplx(0.0)) sum += pp.first[i] * exact_derivative(poly.children[i], g, x);
            }
            return sum;
          },
          [&](const field::BlackBox&) -> cplx {
            throw Error(ErrorKind::Precondition, "black-box field has no exact derivative");
          },
      },
      f.node());
}

}  // namespace

DerivativeReport directional_derivative(const Calculus& calc, const ScalarField& f,
                                        const GroupElement& p, const AlgebraVector& x) {
  if (!(f.spec() == p.spec()) || !(x.spec() == p.spec())) {
    throw Error(ErrorKind::SpecMismatch, "directional derivative across specs");
  }
  if (f.is_structured()) return {exact_derivative(f, p.matrix(), x.matrix()), DerivativeMethod::Exact, {}};
  const double h = calc.fd().first_step;
  return {fd_first_derivative(f, p.matrix(), x.matrix(), h, calc.fd().order),
          DerivativeMethod::CentralDifference, h};
}

DerivativeReport laplacian(const Calculus& calc, const ScalarField& f, const GroupElement& p) {
  const FieldJet j = calc.jet(f, p);
  if (j.exact) return {j.laplacian, DerivativeMethod::Exact, {}};
  return {j.laplacian, DerivativeMethod::CentralDifference, calc.fd().second_step};
}

CVec gradient_coeffs(const Calculus& calc, const ScalarField& f, const GroupElement& p) {
  return calc.jet(f, p).gradient;
}

DerivativeReport kappa(const Calculus& calc, const ScalarField& f, const ScalarField& g,
                       const GroupElement& p) {
  const FieldJet jf = calc.jet(f, p);
  const FieldJet jg = calc.jet(g, p);
  const cplx value = bilinear_dot(jf.gradient, jg.gradient);
  if (jf.exact && jg.exact) return {value, DerivativeMethod::Exact, {}};
  return {value, DerivativeMethod::CentralDifference, calc.fd().first_step};
}

Mat expm1(const Mat& y) {
  const double norm = y.cwiseAbs().rowwise().sum().maxCoeff();
  if (norm > 0.5) return expm(y) - Mat::Identity(y.rows(), y.cols());
  Mat term = y;
  Mat sum = y;
  for (int k = 2; k < 30; ++k) {
    term = term * y / double(k);
    sum += term;
    if (max_abs(term) <= 1e-18 * max_abs(sum)) break;
  }
  return sum;
}

namespace {

// a^e - b^e where a - b = d is known accurately.
cplx power_difference(cplx a, cplx b, cplx d, int e) {
  if (e == 0) return 0.0;
  if (e < 0) return -power_difference(a, b, d, -e) / (ipow(a, -e) * ipow(b, -e));
  cplx sum(0.0);
  for (int j = 0; j < e; ++j) sum += ipow(a, j) * ipow(b, e - 1 - j);
  return d * sum;
}

std::pair<cplx, cplx> value_and_increment(const ScalarField& f, const Mat& p, const Mat& e) {
  return std::visit(
      overloaded{
          [&](const field::LinearCoefficient& lc) {
            return std::make_pair(linear_eval(lc, p), linear_eval(lc, p * e));
          },
          [&](const field::AdjointCoefficient& ac) {
            // U A U^* - A with U = I + E
            const Mat ea = e * ac.a;
            const Mat delta = ea + ac.a * e.adjoint() + ea * e.adjoint();
            const Mat pb = p.adjoint() * ac.b.adjoint() * p;
            return std::make_pair((ac.a * pb).trace(), (delta * pb).trace());
          },
          [&](const field::Polynomial& poly) {
            const std::size_t k = poly.children.size();
            std::vector<cplx> v(k), d(k), a(k);
            for (std::size_t i = 0; i < k; ++i) {
              std::tie(v[i], d[i]) = value_and_increment(poly.children[i], p, e);
              a[i] = v[i] + d[i];
            }
            cplx value(0.0), inc(0.0);
            for (const auto& term : poly.terms) {
              cplx base = term.coeff;
              for (std::size_t i = 0; i < k; ++i) base *= ipow(v[i], term.exponents[i]);
              value += base;
              // telescoping: prod a^e - prod v^e
              for (std::size_t j = 0; j < k; ++j) {
                if (term.exponents[j] == 0) continue;
                cplx t = term.coeff * power_difference(a[j], v[j], d[j], term.exponents[j]);
                for (std::size_t i = 0; i < j; ++i) t *= ipow(a[i], term.exponents[i]);
                for (std::size_t i = j + 1; i < k; ++i) t *= ipow(v[i], term.exponents[i]);
                inc += t;
              }
            }
            return std::make_pair(value, inc);
          },
          [&](const field::BlackBox& bb) {
            const cplx base = bb.fn(p);
            return std::make_pair(base, bb.fn(p + p * e) - base);
          },
      },
      f.node());
}

}  // namespace

cplx field_increment(const ScalarField& f, const Mat& p, const Mat& e) {
  return value_and_increment(f, p, e).second;
}

namespace {
constexpr double kProductRuleStep = 1e-2;
}  // namespace

bool product_rule_check(const Calculus& calc, const ScalarField& f, const ScalarField& g,
                        const GroupElement& p, double tol) {
  const FieldJet jf = calc.jet(f, p);
  const FieldJet jg = calc.jet(g, p);
  const cplx rhs = jf.value * jg.laplacian + jg.value * jf.laplacian +
                   2.0 * bilinear_dot(jf.gradient, jg.gradient);
  const ScalarField product = (f * g).black_box();
  cplx lhs(0.0);
  for (const auto& x : calc.basis().elements()) {
    lhs += fd_second_derivative(product, p.matrix(), x.matrix(), kProductRuleStep, 6);
  }
  return std::abs(lhs - rhs) <= tol * std::max(1.0, std::abs(rhs));
}

}  // namespace lie
