#include "lie_eigenlab/levelset.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "lie_eigenlab/parallel.hpp"

namespace lie {

namespace {

constexpr double kRankFloor = 1e-10;

RMat real_differential(const CVec& gradient) {
  RMat j(2, gradient.size());
  j.row(0) = gradient.real().transpose();
  j.row(1) = gradient.imag().transpose();
  return j;
}

double smallest_singular_value(const RMat& j) {
  const Eigen::JacobiSVD<RMat> svd(j);
  return svd.singularValues()[svd.singularValues().size() - 1];
}

}  // namespace

LevelSetSpec::LevelSetSpec(GroupSpec group, ScalarField psi, std::string label)
    : group_(group),
      psi_(std::move(psi)),
      label_(std::move(label)),
      calc_(std::make_shared<const Calculus>(build_basis(group))) {
  if (!(psi_.spec() == group_)) throw Error(ErrorKind::SpecMismatch, "constraint lives on another group");
}

LevelSetSpec LevelSetSpec::phi_h(const Mat& h) {
  if (h.rows() != h.cols()) throw Error(ErrorKind::Precondition, "H must be square");
  const int n = static_cast<int>(h.rows());
  const GroupSpec spec(Family::SU, n);
  // z_1^T H conj(z_2) = trace(z E_12 z^* H^T) = <z E_12 z^{-1}, conj(H)>.
  Mat e12 = Mat::Zero(n, n);
  e12(0, 1) = 1.0;
  LevelSetSpec s(spec, adjoint_coefficient(spec, e12, h.conjugate(), "Phi_H"), "Phi_H on " + spec.name());
  s.h_ = h;
  return s;
}

LevelSetSpec LevelSetSpec::from_morphism(const ProjectiveMorphism& m, cplx alpha, cplx beta) {
  if (alpha == cplx(0.0) && beta == cplx(0.0)) {
    throw Error(ErrorKind::Precondition, "(alpha, beta) must be nonzero");
  }
  const GroupSpec& spec = m.family().spec();
  const ScalarField psi = polynomial_field(spec, {m.p_field(), m.q_field()}, {{beta, {1, 0}}, {-alpha, {0, 1}}},
                                           "beta P - alpha Q");
  LevelSetSpec s(spec, psi, "fibre of " + m.family().label());
  s.xi_ = std::make_pair(alpha, beta);
  return s;
}

ManifoldPoint manifold_point(const LevelSetSpec& spec, const GroupElement& p, double tol) {
  const Calculus& calc = spec.calculus();
  const FieldJet jet = calc.jet(spec.psi(), p);
  if (!(std::abs(jet.value) < tol)) {
    throw Error(ErrorKind::Precondition, "point is not on the level set: |Psi| = " + std::to_string(std::abs(jet.value)));
  }
  ManifoldPoint out{p, jet.value, real_differential(jet.gradient), 0.0, {}, 0};
  const Eigen::JacobiSVD<RMat> svd(out.gradient, Eigen::ComputeFullV);
  out.sigma_min = svd.singularValues()[1];
  if (out.sigma_min < kRankFloor) {
    throw Error(ErrorKind::Singularity, "constraint differential is rank deficient (sigma_min = " +
                                            std::to_string(out.sigma_min) + ")");
  }
  const RMat& v = svd.matrixV();
  for (int k = 2; k < v.cols(); ++k) out.tangent.push_back(calc.basis().combine(v.col(k)));
  return out;
}

bool distinct_eigenvalues(const Mat& h, double rel) {
  if (h.rows() != h.cols()) throw Error(ErrorKind::Precondition, "H must be square");
  const Eigen::ComplexEigenSolver<Mat> solver(h, false);
  const CVec ev = solver.eigenvalues();
  const double radius = ev.cwiseAbs().maxCoeff();
  for (int i = 0; i < ev.size(); ++i)
    for (int j = i + 1; j < ev.size(); ++j)
      if (!(std::abs(ev[i] - ev[j]) > rel * radius)) return false;
  return true;
}

Mat random_distinct_matrix(int n, std::uint64_t seed) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    std::mt19937_64 rng(derive_seed(seed, attempt));
    std::normal_distribution<double> normal;
    Mat h(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double re = normal(rng);
        h(i, j) = cplx(re, normal(rng));
      }
    if (distinct_eigenvalues(h)) return h;
  }
}

CVec commutator_gradient(const Mat& h, const Mat& z, const AlgebraBasis& basis) {
  const Mat w = z.adjoint() * h.transpose() * z;
  CVec out(basis.size());
  for (int k = 0; k < basis.size(); ++k) {
    const Mat& x = basis[k].matrix();
    out[k] = (w * x - x * w)(1, 0);  // <M, e_2 e_1^*> = M_21
  }
  return out;
}

Mat complexified_differential(const Mat& h, const Mat& z) {
  const Mat w = z.inverse() * h.transpose() * z;
  const int n = static_cast<int>(h.rows());
  Mat out(n, n);
  // ([W, E_ij])_21 = W_2i delta_j1 - delta_2i W_j1
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = (j == 0 ? w(1, i) : 0.0) - (i == 1 ? w(j, 0) : 0.0);
  return out;
}

RegularityReport regularity_check(const LevelSetSpec& spec, const GroupElement& p, double tol) {
  const FieldJet jet = spec.calculus().jet(spec.psi(), p);
  const RMat j = real_differential(jet.gradient);
  RegularityReport rep;
  rep.grad_re_norm = j.row(0).norm();
  rep.grad_im_norm = j.row(1).norm();
  rep.sigma_min = smallest_singular_value(j);
  rep.regular = rep.sigma_min > tol;
  if (spec.h()) {
    const CVec c = commutator_gradient(*spec.h(), p.matrix(), spec.calculus().basis());
    rep.commutator_discrepancy = max_abs(c - jet.gradient);
  }
  return rep;
}

namespace {

// One damped Gauss-Newton step. Returns false when no damping reduces |Psi|.
bool newton_step(const LevelSetSpec& spec, Mat& g, FieldJet& jet, bool allow_equal) {
  const Calculus& calc = spec.calculus();
  const RMat j = real_differential(jet.gradient);
  if (smallest_singular_value(j) < kRankFloor) {
    throw Error(ErrorKind::Singularity, "constraint differential is rank deficient during projection");
  }
  const Eigen::Vector2d r(jet.value.real(), jet.value.imag());
  const Eigen::Matrix2d gram = j * j.transpose();
  const RVec step = -j.transpose() * gram.ldlt().solve(r);
  const double current = std::abs(jet.value);
  for (double s = 1.0; s > 1e-3; s *= 0.5) {
    const Mat candidate = retract_to_group(g * expm(calc.basis().combine(s * step).matrix()), spec.group()).matrix();
    FieldJet next = calc.jet(spec.psi(), GroupElement::unchecked(spec.group(), candidate));
    const double value = std::abs(next.value);
    if (value < current || (allow_equal && value <= current)) {
      g = candidate;
      jet = std::move(next);
      return true;
    }
  }
  return false;
}

}  // namespace

ManifoldPoint newton_project(const LevelSetSpec& spec, const GroupElement& p0, int max_iter, double tol,
                             int polish) {
  if (!(p0.spec() == spec.group())) throw Error(ErrorKind::SpecMismatch, "start point on another group");
  const Calculus& calc = spec.calculus();
  Mat g = p0.matrix();
  FieldJet jet = calc.jet(spec.psi(), p0);
  if (smallest_singular_value(real_differential(jet.gradient)) < kRankFloor) {
    throw Error(ErrorKind::Singularity, "constraint differential is rank deficient at the start point");
  }
  int it = 0;
  while (!(std::abs(jet.value) < tol)) {
    if (it == max_iter || !newton_step(spec, g, jet, false)) {
      throw Error(ErrorKind::NonConvergence, "projection did not reach |Psi| < " + std::to_string(tol) + " after " +
                                                 std::to_string(it) + " iterations");
    }
    ++it;
  }
  for (int k = 0; k < polish && jet.value != cplx(0.0); ++k)
    if (!newton_step(spec, g, jet, true)) break;
  ManifoldPoint out = manifold_point(spec, GroupElement::unchecked(spec.group(), g), std::max(tol, 1e-10));
  out.iterations = it;
  return out;
}

std::vector<AlgebraVector> tangent_basis(const LevelSetSpec& spec, const GroupElement& p) {
  const FieldJet jet = spec.calculus().jet(spec.psi(), p);
  const RMat j = real_differential(jet.gradient);
  const Eigen::JacobiSVD<RMat> svd(j, Eigen::ComputeFullV);
  if (svd.singularValues()[1] < kRankFloor) {
    throw Error(ErrorKind::Singularity, "constraint differential is rank deficient");
  }
  std::vector<AlgebraVector> out;
  for (int k = 2; k < svd.matrixV().cols(); ++k) out.push_back(spec.calculus().basis().combine(svd.matrixV().col(k)));
  return out;
}

namespace {

// Solves Psi(p exp(Y)) = 0 in exponential coordinates at p, starting from y.
// Psi is evaluated as Psi(p) plus an increment, so the landing point is
// accurate relative to |Y| rather than to the unit scale of p.
RVec chart_project(const LevelSetSpec& spec, const Mat& p, cplx base, RVec y) {
  const Calculus& calc = spec.calculus();
  const AlgebraBasis& basis = calc.basis();
  const int d = basis.size();
  auto residual = [&](const RVec& c) { return base + field_increment(spec.psi(), p, expm1(basis.combine(c).matrix())); };
  cplx f = residual(y);
  RVec best = y;
  double best_abs = std::abs(f);
  for (int it = 0; it < 40 && best_abs > 0.0; ++it) {
    const Mat ym = basis.combine(y).matrix();
    const CVec grad = calc.jet(spec.psi(), GroupElement::unchecked(spec.group(), p * expm(ym))).gradient;
    // d/dt exp(Y + tZ) = exp(Y) sum_k (-1)^k ad_Y^k(Z) / (k+1)!
    RMat dexp(d, d);
    for (int k = 0; k < d; ++k) {
      Mat term = basis[k].matrix();
      Mat w = term;
      for (int j = 1; j < 14; ++j) {
        term = (ym * term - term * ym) * (-1.0 / (j + 1));
        w += term;
      }
      dexp.col(k) = basis.coefficients(w);
    }
    const RMat j = real_differential(dexp.transpose() * grad);
    const Eigen::Vector2d r(f.real(), f.imag());
    const RVec step = -j.transpose() * (j * j.transpose()).ldlt().solve(r);
    y += step;
    f = residual(y);
    if (std::abs(f) < best_abs) {
      best = y;
      best_abs = std::abs(f);
    }
    if (step.norm() <= 1e-19 * (1.0 + y.norm())) break;
  }
  return best;
}

}  // namespace

CurvatureReport mean_curvature(const LevelSetSpec& spec, const ManifoldPoint& point, double h) {
  if (!(h >= 1e-4 && h <= 1e-2)) throw Error(ErrorKind::Precondition, "curvature step must lie in [1e-4, 1e-2]");
  const AlgebraBasis& basis = spec.calculus().basis();
  const int d = basis.size();
  const ManifoldPoint center = newton_project(spec, point.p, 50, 1e-12, 3);
  const Mat& p = center.p.matrix();
  const cplx base = spec.psi()(p);
  const Eigen::HouseholderQR<RMat> qr(center.gradient.transpose());
  const RMat normal = qr.householderQ() * RMat::Identity(d, 2);
  const RVec origin = chart_project(spec, p, base, RVec::Zero(d));

  const auto accelerations = parallel_map(center.tangent.size(), [&](std::size_t i) {
    const RVec t = basis.coefficients(center.tangent[i].matrix());
    const RVec plus = chart_project(spec, p, base, h * t);
    const RVec minus = chart_project(spec, p, base, -h * t);
    return RVec((plus + minus - 2.0 * origin) / (h * h));
  });

  CurvatureReport rep;
  rep.point = p;
  rep.h = h;
  rep.tangent_dimension = static_cast<int>(center.tangent.size());
  RVec sum = RVec::Zero(d);
  for (const auto& acc : accelerations) {
    rep.normal_accelerations.push_back((normal.transpose() * acc).norm());
    sum += acc;
  }
  rep.norm = (normal.transpose() * sum).norm();
  rep.minimal = rep.norm < 500.0 * h * h;
  return rep;
}

PointCloud sample_manifold(const LevelSetSpec& spec, int count, std::uint64_t seed, const SampleOptions& options) {
  PointCloud cloud;
  cloud.requested = std::max(count, 0);
  if (count <= 0) return cloud;
  const int max_attempts = 4 * count + 8;
  const AlgebraBasis& basis = spec.calculus().basis();

  auto start = [&](std::uint64_t index) {
    const std::uint64_t s = derive_seed(seed, index);
    if (!options.center) return haar_sample(spec.group(), s);
    std::mt19937_64 rng(s);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> uniform;
    RVec y(basis.size());
    for (int k = 0; k < y.size(); ++k) y[k] = normal(rng);
    const double r = options.radius * std::pow(uniform(rng), 1.0 / y.size());
    return group_exp(*options.center, basis.combine(y.normalized()), r);
  };

  std::optional<Error> first_error;
  while (static_cast<int>(cloud.points.size()) < count && cloud.attempts < max_attempts) {
    const int batch = std::min(count - static_cast<int>(cloud.points.size()), max_attempts - cloud.attempts);
    const int offset = cloud.attempts;
    const auto results = parallel_map(static_cast<std::size_t>(batch), [&](std::size_t i) {
      std::pair<std::optional<ManifoldPoint>, std::optional<Error>> r;
      try {
        r.first = newton_project(spec, start(offset + i), options.max_iter);
      } catch (const Error& e) {
        r.second = e;
      }
      return r;
    });
    cloud.attempts += batch;
    for (const auto& [point, error] : results) {
      if (error && !first_error) first_error = error;
      if (!point || static_cast<int>(cloud.points.size()) >= count) continue;
      bool duplicate = false;
      for (const auto& q : cloud.points) duplicate = duplicate || distance(q.p, point->p) < options.dedupe;
      if (!duplicate) cloud.points.push_back(*point);
    }
  }
  if (cloud.points.empty() && first_error) throw *first_error;
  const int got = static_cast<int>(cloud.points.size());
  if (got < count) {
    cloud.warnings.push_back("sampled " + std::to_string(got) + " of " + std::to_string(count) + " points in " +
                             std::to_string(cloud.attempts) + " attempts");
  }
  if (2 * got < count) cloud.warnings.push_back("sampling yield below 50%");
  return cloud;
}

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<double> matrix_coordinates(const Mat& m) {
  std::vector<double> out;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      out.push_back(m(i, j).real());
      out.push_back(m(i, j).imag());
    }
  return out;
}

}  // namespace

void write_csv(std::ostream& out, const PointCloud& cloud, const std::vector<std::optional<double>>& curvature) {
  if (!curvature.empty() && curvature.size() != cloud.points.size()) {
    throw Error(ErrorKind::Precondition, "one curvature entry per point expected");
  }
  const int m = cloud.points.empty() ? 0 : static_cast<int>(cloud.points[0].p.matrix().rows());
  std::string header;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const std::string base = "m_" + std::to_string(i) + "_" + std::to_string(j);
      header += base + "_re," + base + "_im,";
    }
  header += "abs_psi,sigma_min";
  if (!curvature.empty()) header += ",curvature";
  out << header << '\n';
  for (std::size_t k = 0; k < cloud.points.size(); ++k) {
    const auto& pt = cloud.points[k];
    for (double x : matrix_coordinates(pt.p.matrix())) out << num(x) << ',';
    out << num(std::abs(pt.value)) << ',' << num(pt.sigma_min);
    if (!curvature.empty()) out << ',' << (curvature[k] ? num(*curvature[k]) : std::string());
    out << '\n';
  }
}

void write_ply(std::ostream& out, const PointCloud& cloud, std::array<int, 3> coords) {
  const int m = cloud.points.empty() ? 0 : static_cast<int>(cloud.points[0].p.matrix().rows());
  for (int c : coords)
    if (c < 0 || (m > 0 && c >= 2 * m * m)) throw Error(ErrorKind::Precondition, "PLY coordinate index out of range");
  out << "ply\nformat ascii 1.0\nelement vertex " << cloud.points.size()
      << "\nproperty double x\nproperty double y\nproperty double z\nend_header\n";
  for (const auto& pt : cloud.points) {
    const auto v = matrix_coordinates(pt.p.matrix());
    out << num(v[coords[0]]) << ' ' << num(v[coords[1]]) << ' ' << num(v[coords[2]]) << '\n';
  }
}

}  // namespace lie
