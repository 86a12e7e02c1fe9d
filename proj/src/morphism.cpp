#include "lie_eigenlab/morphism.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "lie_eigenlab/parallel.hpp"

namespace lie {

HomogeneousPoly::HomogeneousPoly(int variables,
                                 const std::vector<std::pair<std::vector<int>, cplx>>& terms)
    : variables_(variables) {
  if (variables < 1) throw Error(ErrorKind::Precondition, "polynomial needs at least one variable");
  bool first = true;
  for (const auto& [exps, coeff] : terms) {
    if (static_cast<int>(exps.size()) != variables) {
      throw Error(ErrorKind::Precondition, "monomial has " + std::to_string(exps.size()) +
                                               " exponents, expected " + std::to_string(variables));
    }
    int deg = 0;
    for (int e : exps) {
      if (e < 0) throw Error(ErrorKind::Precondition, "negative exponent");
      deg += e;
    }
    if (first) degree_ = deg;
    if (deg != degree_) throw Error(ErrorKind::Precondition, "polynomial is not homogeneous");
    first = false;
    terms_[exps] += coeff;
  }
  std::erase_if(terms_, [](const auto& t) { return t.second == cplx(0.0); });
  if (terms_.empty()) throw Error(ErrorKind::Precondition, "polynomial has no nonzero coefficient");
}

cplx HomogeneousPoly::operator()(const std::vector<cplx>& x) const {
  if (static_cast<int>(x.size()) != variables_) throw Error(ErrorKind::Precondition, "wrong variable count");
  cplx sum(0.0);
  for (const auto& [exps, coeff] : terms_) {
    cplx t = coeff;
    for (int i = 0; i < variables_; ++i) t *= ipow(x[i], exps[i]);
    sum += t;
  }
  return sum;
}

HomogeneousPoly HomogeneousPoly::scaled(cplx c) const {
  std::vector<std::pair<std::vector<int>, cplx>> t;
  for (const auto& [exps, coeff] : terms_) t.emplace_back(exps, c * coeff);
  return HomogeneousPoly(variables_, t);
}

ScalarField HomogeneousPoly::compose(const GroupSpec& spec, const std::vector<ScalarField>& fields,
                                     std::string label) const {
  if (static_cast<int>(fields.size()) != variables_) {
    throw Error(ErrorKind::Precondition, "field count does not match the polynomial");
  }
  std::vector<field::Term> terms;
  for (const auto& [exps, coeff] : terms_) terms.push_back({coeff, exps});
  return polynomial_field(spec, fields, std::move(terms), std::move(label));
}

std::string HomogeneousPoly::to_text() const {
  std::ostringstream out;
  out.precision(17);
  for (const auto& [exps, coeff] : terms_) {
    out << coeff.real() << ' ' << coeff.imag() << " :";
    for (int e : exps) out << ' ' << e;
    out << '\n';
  }
  return out.str();
}

HomogeneousPoly parse_polynomial(std::istream& in, int variables) {
  std::vector<std::pair<std::vector<int>, cplx>> terms;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    const auto colon = line.find(':');
    auto fail = [&](const std::string& why) {
      return Error(ErrorKind::Precondition, "polynomial line " + std::to_string(lineno) + ": " + why);
    };
    if (colon == std::string::npos) throw fail("missing ':'");
    std::istringstream lhs(line.substr(0, colon)), rhs(line.substr(colon + 1));
    double re = 0.0, im = 0.0;
    if (!(lhs >> re >> im)) throw fail("expected 're im' before ':'");
    std::string extra;
    if (lhs >> extra) throw fail("unexpected '" + extra + "'");
    std::vector<int> exps;
    for (int e; rhs >> e;) exps.push_back(e);
    if (!rhs.eof()) throw fail("exponents must be integers");
    terms.emplace_back(std::move(exps), cplx(re, im));
  }
  return HomogeneousPoly(variables, terms);
}

HomogeneousPoly parse_polynomial(const std::string& text, int variables) {
  std::istringstream in(text);
  return parse_polynomial(in, variables);
}

HomogeneousPoly random_homogeneous(int variables, int degree, int terms, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<int> pick(0, variables - 1);
  std::vector<std::pair<std::vector<int>, cplx>> t;
  for (int k = 0; k < terms; ++k) {
    std::vector<int> exps(variables, 0);
    for (int d = 0; d < degree; ++d) ++exps[pick(rng)];
    const double re = normal(rng);
    t.emplace_back(std::move(exps), cplx(re, normal(rng)));
  }
  return HomogeneousPoly(variables, t);
}

ProjectiveMorphism::ProjectiveMorphism(EigenFamily family, std::vector<ScalarField> fields,
                                       HomogeneousPoly p, HomogeneousPoly q)
    : family_(std::move(family)),
      fields_(std::move(fields)),
      p_(std::move(p)),
      q_(std::move(q)),
      p_field_(p_.compose(family_.spec(), fields_, "P")),
      q_field_(q_.compose(family_.spec(), fields_, "Q")),
      chart_(polynomial_field(family_.spec(), {p_field_, q_field_}, {{1.0, {1, -1}}}, "P/Q")),
      opposite_(polynomial_field(family_.spec(), {p_field_, q_field_}, {{1.0, {-1, 1}}}, "Q/P")) {}

std::pair<cplx, cplx> ProjectiveMorphism::operator()(const GroupElement& g) const {
  return {p_field_(g), q_field_(g)};
}

bool ProjectiveMorphism::in_domain(const GroupElement& g, double eps) const {
  const auto [p, q] = (*this)(g);
  return std::abs(p) > eps || std::abs(q) > eps;
}

ProjectiveMorphism build_morphism(const EigenFamily& family, const std::vector<int>& members,
                                  const HomogeneousPoly& p, const HomogeneousPoly& q) {
  const int k = static_cast<int>(members.size());
  if (p.variables() != k || q.variables() != k) {
    throw Error(ErrorKind::Precondition, "P and Q must have one variable per chosen member");
  }
  if (p.degree() != q.degree()) {
    throw Error(ErrorKind::Precondition, "P and Q have different degrees (" + std::to_string(p.degree()) +
                                             " vs " + std::to_string(q.degree()) + ")");
  }
  // Rank of the two coefficient vectors over the union of monomials.
  std::map<std::vector<int>, int> index;
  for (const auto& t : p.terms()) index.emplace(t.first, 0);
  for (const auto& t : q.terms()) index.emplace(t.first, 0);
  int row = 0;
  for (auto& [exps, i] : index) i = row++;
  Mat coeffs = Mat::Zero(row, 2);
  for (const auto& [exps, c] : p.terms()) coeffs(index[exps], 0) = c;
  for (const auto& [exps, c] : q.terms()) coeffs(index[exps], 1) = c;
  const Eigen::JacobiSVD<Mat> svd(coeffs);
  const auto sv = svd.singularValues();
  if (sv.size() < 2 || sv[1] <= 1e-12 * sv[0]) {
    throw Error(ErrorKind::Precondition, "P and Q are linearly dependent");
  }
  std::vector<ScalarField> fields;
  for (int i : members) {
    if (i < 0 || i >= family.size()) throw Error(ErrorKind::Precondition, "member index out of range");
    fields.push_back(family.member(i));
  }
  return ProjectiveMorphism(family, std::move(fields), p, q);
}

MorphismReport verify_harmonic_morphism(const ProjectiveMorphism& m, int samples, std::uint64_t seed,
                                        double tol, Chart chart) {
  MorphismReport rep;
  rep.chart = chart == Chart::Primary ? "P/Q" : "Q/P";
  rep.samples = std::max(samples, 0);
  rep.tol = tol;
  if (samples <= 0) return rep;

  const GroupSpec& spec = m.family().spec();
  const ScalarField& denominator = chart == Chart::Primary ? m.q_field() : m.p_field();
  const ScalarField& f = chart == Chart::Primary ? m.chart() : m.opposite_chart();

  std::vector<GroupElement> points;
  std::vector<double> denominators;
  for (int s = 0; s < samples; ++s) {
    points.push_back(haar_sample(spec, derive_seed(seed, s)));
    denominators.push_back(std::abs(denominator(points.back())));
  }
  std::vector<double> sorted = denominators;
  std::nth_element(sorted.begin(), sorted.begin() + samples / 2, sorted.end());
  rep.median_denominator = sorted[samples / 2];
  const double guard = 0.1 * rep.median_denominator;
  if (rep.median_denominator == 0.0) return rep;

  std::vector<std::size_t> kept;
  for (int s = 0; s < samples; ++s)
    if (denominators[s] > guard) kept.push_back(s);
  rep.used = static_cast<int>(kept.size());
  if (kept.empty()) return rep;

  const Calculus calc(build_basis(spec));
  const auto jets = parallel_map(kept.size(), [&](std::size_t i) { return calc.jet(f, points[kept[i]]); });
  for (const auto& j : jets) {
    rep.tau_residual = std::max(rep.tau_residual, std::abs(j.laplacian));
    rep.kappa_residual = std::max(rep.kappa_residual, std::abs((j.gradient.array() * j.gradient.array()).sum()));
  }
  rep.status = rep.tau_residual < tol && rep.kappa_residual < tol ? VerificationStatus::Pass
                                                                   : VerificationStatus::Fail;
  return rep;
}

namespace {

double singular_value(const ProjectiveMorphism& m, const Mat& g) {
  return std::max(std::abs(m.p_field()(g)), std::abs(m.q_field()(g)));
}

// Gauss-Newton on (P o Phi, Q o Phi) = 0 as four real equations.
Mat refine_towards_zero(const ProjectiveMorphism& m, const Calculus& calc, Mat g) {
  const GroupSpec& spec = calc.spec();
  double current = singular_value(m, g);
  for (int it = 0; it < 50 && current > 1e-15; ++it) {
    const GroupElement p = GroupElement::unchecked(spec, g);
    const FieldJet jp = calc.jet(m.p_field(), p);
    const FieldJet jq = calc.jet(m.q_field(), p);
    const int d = calc.dimension();
    RMat jac(4, d);
    jac.row(0) = jp.gradient.real().transpose();
    jac.row(1) = jp.gradient.imag().transpose();
    jac.row(2) = jq.gradient.real().transpose();
    jac.row(3) = jq.gradient.imag().transpose();
    const RVec r{{jp.value.real(), jp.value.imag(), jq.value.real(), jq.value.imag()}};
    const RVec step = -jac.completeOrthogonalDecomposition().solve(r);
    bool improved = false;
    for (double scale = 1.0; scale > 1e-4; scale *= 0.5) {
      const Mat next = g * expm(calc.basis().combine(scale * step).matrix());
      const double value = singular_value(m, next);
      if (value < current) {
        g = next;
        current = value;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  return g;
}

}  // namespace

SingularSetReport singular_set_probe(const ProjectiveMorphism& m, int samples, std::uint64_t seed,
                                     double empty_floor) {
  SingularSetReport rep;
  rep.samples = std::max(samples, 0);
  const GroupSpec& spec = m.family().spec();
  if (samples <= 0) return rep;

  const auto values = parallel_map(static_cast<std::size_t>(samples), [&](std::size_t s) {
    return singular_value(m, haar_sample(spec, derive_seed(seed, s)).matrix());
  });
  std::vector<std::size_t> order(values.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });
  rep.sampled_floor = values[order[0]];
  rep.floor = rep.sampled_floor;
  rep.witness = haar_sample(spec, derive_seed(seed, order[0])).matrix();

  if (rep.floor > 0.0) {
    const Calculus calc(build_basis(spec));
    const std::size_t best = std::min<std::size_t>(5, order.size());
    const auto refined = parallel_map(best, [&](std::size_t i) {
      return refine_towards_zero(m, calc, haar_sample(spec, derive_seed(seed, order[i])).matrix());
    });
    for (const auto& g : refined) {
      const double v = singular_value(m, g);
      if (v < rep.floor) {
        rep.floor = v;
        rep.witness = g;
      }
    }
  }
  rep.likely_empty = rep.floor > empty_floor;
  return rep;
}

}  // namespace lie
