#include <algorithm>
#include <sstream>

#include "doctest.h"
#include "lie_eigenlab/levelset.hpp"
#include "oracles.hpp"

using namespace lie;

namespace {

const GroupSpec kSU3(Family::SU, 3);

Mat diag(std::initializer_list<double> v) {
  Mat h = Mat::Zero(v.size(), v.size());
  int i = 0;
  for (double x : v) h(i, i) = x, ++i;
  return h;
}

// z_1^T H conj(z_2) written out column by column.
cplx phi_direct(const Mat& h, const Mat& z) { return (z.col(0).transpose() * h * z.col(1).conjugate())(0, 0); }

// Same expression with conj(z_2) replaced by the second row of z^{-1}; it is
// holomorphic on GL(n, C) and agrees with phi on the unitary group.
cplx phi_holomorphic(const Mat& h, const Mat& z) {
  return (z.col(0).transpose() * h * z.inverse().row(1).transpose())(0, 0);
}

// Characteristic polynomial coefficients c_0..c_n (monic, c_n = 1) by
// Faddeev-LeVerrier.
CVec char_poly(const Mat& a) {
  const int n = static_cast<int>(a.rows());
  CVec c = CVec::Zero(n + 1);
  c[n] = 1.0;
  Mat m = Mat::Zero(n, n);
  for (int k = 1; k <= n; ++k) {
    m = a * m + c[n - k + 1] * Mat::Identity(n, n);
    c[n - k] = -(a * m).trace() / double(k);
  }
  return c;
}

// Resultant of p and p' via the Sylvester determinant; zero iff p has a
// repeated root.
cplx discriminant_like(const Mat& a) {
  const CVec p = char_poly(a);
  const int n = static_cast<int>(p.size()) - 1;
  CVec dp(n);
  for (int i = 1; i <= n; ++i) dp[i - 1] = double(i) * p[i];
  const int size = 2 * n - 1;
  Mat s = Mat::Zero(size, size);
  for (int r = 0; r < n - 1; ++r)
    for (int i = 0; i <= n; ++i) s(r, r + i) = p[n - i];
  for (int r = 0; r < n; ++r)
    for (int i = 0; i < n; ++i) s(n - 1 + r, r + i) = dp[n - 1 - i];
  return s.determinant();
}

LevelSetSpec control_spec() {
  const GroupSpec su2(Family::SU, 2);
  return LevelSetSpec(su2,
                      linear_coefficient(su2, Form::Hermitian, unit_vector(2, 0), unit_vector(2, 0)) -
                          constant_field(su2, 0.3),
                      "control");
}

ProjectiveMorphism hopf() {
  return build_morphism(su_standard(2, unit_vector(2, 0)), {0, 1}, parse_polynomial("1 0 : 1 0", 2),
                        parse_polynomial("1 0 : 0 1", 2));
}

// Penalty minimization of |Psi(p0 exp Y)|^2 + w |Y|^2 by descent with
// finite-difference gradients, continued with decreasing w.
GroupElement penalty_projection(const LevelSetSpec& spec, const GroupElement& p0) {
  const auto& basis = spec.calculus().basis();
  const int d = basis.size();
  RVec y = RVec::Zero(d);
  for (double w : {1e-2, 1e-4, 1e-6, 0.0}) {
    auto objective = [&](const RVec& c) {
      return std::norm(spec.psi()(p0.matrix() * basis.combine(c).matrix().exp())) + w * c.squaredNorm();
    };
    double step = 0.1;
    for (int it = 0; it < 600 && step > 1e-14; ++it) {
      RVec g(d);
      for (int k = 0; k < d; ++k) {
        RVec e = RVec::Zero(d);
        e[k] = 1e-7;
        g[k] = (objective(y + e) - objective(y - e)) / 2e-7;
      }
      const RVec next = y - step * g;
      if (objective(next) < objective(y)) {
        y = next;
        step *= 1.2;
      } else {
        step *= 0.5;
      }
    }
  }
  return GroupElement::unchecked(spec.group(), p0.matrix() * basis.combine(y).matrix().exp());
}

}  // namespace

TEST_CASE("Phi_H matches the column formula") {
  std::mt19937_64 rng(1);
  for (int n : {2, 3, 4}) {
    const Mat h = oracle::random_complex(n, n, rng);
    const auto spec = LevelSetSpec::phi_h(h);
    for (int s = 0; s < 5; ++s) {
      const Mat z = haar_sample(spec.group(), s).matrix();
      CHECK(std::abs(spec.psi()(z) - phi_direct(h, z)) < 1e-13);
      CHECK(std::abs(phi_holomorphic(h, z) - phi_direct(h, z)) < 1e-12);
    }
  }
  CHECK_THROWS_AS(LevelSetSpec::phi_h(Mat::Zero(2, 3)), Error);
}

TEST_CASE("distinct_eigenvalues agrees with the discriminant") {
  std::mt19937_64 rng(2);
  CHECK(distinct_eigenvalues(diag({1, 2, 3})));
  CHECK_FALSE(distinct_eigenvalues(diag({1, 1, 2})));
  CHECK_FALSE(distinct_eigenvalues(Mat::Identity(3, 3)));
  Mat jordan = diag({2, 2, 5});
  jordan(0, 1) = 1.0;
  CHECK_FALSE(distinct_eigenvalues(jordan));
  CHECK(std::abs(discriminant_like(jordan)) < 1e-10);
  CHECK(std::abs(discriminant_like(diag({1, 1, 2}))) < 1e-12);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 4;
    const Mat h = oracle::random_complex(n, n, rng);
    CHECK(distinct_eigenvalues(h) == (std::abs(discriminant_like(h)) > 1e-8));
    const Mat r = random_distinct_matrix(n, trial);
    CHECK(distinct_eigenvalues(r));
    CHECK(std::abs(discriminant_like(r)) > 1e-10);
  }
  CHECK(random_distinct_matrix(3, 7) == random_distinct_matrix(3, 7));
}

TEST_CASE("commutator gradient formula on 100 random pairs") {
  std::mt19937_64 rng(3);
  double worst_exact = 0.0, worst_fd = 0.0, worst_normality = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 3;
    const Mat h = oracle::random_complex(n, n, rng);
    worst_normality = std::max(worst_normality, max_abs(h * h.adjoint() - h.adjoint() * h));
    const auto spec = LevelSetSpec::phi_h(h);
    const auto& basis = spec.calculus().basis();
    const auto z = haar_sample(spec.group(), derive_seed(30, trial));
    const CVec formula = commutator_gradient(h, z.matrix(), basis);
    worst_exact = std::max(worst_exact, max_abs(formula - gradient_coeffs(spec.calculus(), spec.psi(), z)));
    for (int k = 0; k < basis.size(); ++k) {
      const cplx fd = oracle::central_first([&](const Mat& g) { return phi_direct(h, g); }, z.matrix(),
                                            basis[k].matrix(), 1e-5);
      worst_fd = std::max(worst_fd, std::abs(fd - formula[k]));
    }
  }
  CHECK(worst_normality > 0.1);  // the sample includes non-normal H
  CHECK(worst_exact < 1e-9);
  CHECK(worst_fd < 1e-9);
}

TEST_CASE("H = I has identically zero gradient") {
  const auto spec = LevelSetSpec::phi_h(Mat::Identity(3, 3));
  for (int s = 0; s < 10; ++s) {
    const auto z = haar_sample(kSU3, s);
    CHECK(max_abs(commutator_gradient(Mat::Identity(3, 3), z.matrix(), spec.calculus().basis())) < 1e-14);
    CHECK(max_abs(gradient_coeffs(spec.calculus(), spec.psi(), z)) < 1e-14);
    CHECK(max_abs(complexified_differential(Mat::Identity(3, 3), z.matrix())) < 1e-14);
    const auto reg = regularity_check(spec, z);
    CHECK_FALSE(reg.regular);
    CHECK(reg.sigma_min < 1e-14);
  }
}

TEST_CASE("complexified differential") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + trial % 3;
    const Mat h = oracle::random_complex(n, n, rng);
    const GroupSpec spec(Family::SU, n);
    const Mat z = haar_sample(spec, derive_seed(40, trial)).matrix();
    const Mat d = complexified_differential(h, z);

    {  // matches the holomorphic extension on every E_ij
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          Mat e = Mat::Zero(n, n);
          e(i, j) = 1.0;
          const double t = 1e-5;
          const cplx fd = (phi_holomorphic(h, z * (Mat::Identity(n, n) + t * e)) -
                           phi_holomorphic(h, z * (Mat::Identity(n, n) - t * e))) /
                          (2.0 * t);
          CHECK(std::abs(fd - d(i, j)) < 1e-8);
        }
    }

    {  // restricts to the real gradient
      const auto basis = build_basis(spec);
      const CVec grad = commutator_gradient(h, z, basis);
      for (int k = 0; k < basis.size(); ++k) {
        const cplx value = (basis[k].matrix().array() * d.array()).sum();
        CHECK(std::abs(value - grad[k]) < 1e-12);
      }
    }
  }
}

TEST_CASE("newton_project") {
  const auto spec = LevelSetSpec::phi_h(diag({1, 2, 3}));

  SUBCASE("converges from Haar starts and matches a penalty-descent oracle") {
    for (int s = 0; s < 10; ++s) {
      CAPTURE(s);
      const auto p0 = haar_sample(kSU3, derive_seed(50, s));
      const auto pt = newton_project(spec, p0);
      CHECK(pt.iterations <= 8);
      CHECK(std::abs(pt.value) < 1e-12);
      CHECK(std::abs(phi_direct(diag({1, 2, 3}), pt.p.matrix())) < 1e-12);
      CHECK(membership_residual(kSU3, pt.p.matrix()) < 1e-11);
      const auto ref = penalty_projection(spec, p0);
      CHECK(std::abs(spec.psi()(ref.matrix())) < 1e-6);
      // both are local projections: comparable displacement from the start
      CHECK(distance(pt.p, p0) <= 2.0 * distance(ref, p0) + 1e-3);
    }
  }

  SUBCASE("a point already on the level set is a fixed point") {
    const auto pt = newton_project(spec, haar_sample(kSU3, 3));
    const auto again = newton_project(spec, pt.p);
    CHECK(again.iterations == 0);
    CHECK(again.p.matrix() == pt.p.matrix());
  }

  SUBCASE("degenerate constraint") {
    const auto flat = LevelSetSpec::phi_h(Mat::Identity(3, 3));
    try {
      newton_project(flat, haar_sample(kSU3, 1));
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Singularity);
    }
  }

  SUBCASE("wrong group") {
    CHECK_THROWS_AS(newton_project(spec, haar_sample(GroupSpec(Family::SU, 2), 1)), Error);
  }

  SUBCASE("manifold_point validates its input") {
    const auto p0 = haar_sample(kSU3, 8);
    CHECK_THROWS_AS(manifold_point(spec, p0), Error);
    CHECK_NOTHROW(manifold_point(spec, newton_project(spec, p0).p));
  }
}

TEST_CASE("tangent frames") {
  for (int n : {3, 4}) {
    const auto spec = LevelSetSpec::phi_h(random_distinct_matrix(n, n));
    const auto pt = newton_project(spec, haar_sample(spec.group(), 5));
    const auto tangent = tangent_basis(spec, pt.p);
    CHECK(static_cast<int>(tangent.size()) == spec.group().dimension() - 2);
    for (const auto& t : tangent) {
      CHECK(std::abs(directional_derivative(spec.calculus(), spec.psi(), pt.p, t).value) < 1e-10);
    }
    for (std::size_t a = 0; a < tangent.size(); ++a)
      for (std::size_t b = 0; b < tangent.size(); ++b)
        CHECK(std::abs(trace_inner(tangent[a].matrix(), tangent[b].matrix()).real() - (a == b ? 1.0 : 0.0)) <
              1e-12);
  }
  CHECK(tangent_basis(LevelSetSpec::phi_h(diag({1, 2, 3})),
                      newton_project(LevelSetSpec::phi_h(diag({1, 2, 3})), haar_sample(kSU3, 1)).p)
            .size() == 6);
}

TEST_CASE("mean curvature") {
  SUBCASE("Hopf fibres are geodesic") {
    const auto spec = LevelSetSpec::from_morphism(hopf(), 1.0, 1.0);
    const auto cloud = sample_manifold(spec, 5, 1);
    REQUIRE(cloud.points.size() == 5);
    for (const auto& pt : cloud.points) {
      const auto c = mean_curvature(spec, pt, 1e-3);
      CHECK(c.tangent_dimension == 1);
      CHECK(c.norm < 1e-6);
      // FD oracle: the fibre through p is p exp(tX) for the unit tangent X
      const Mat x = pt.tangent[0].matrix();
      for (double t : {0.3, 1.0, 2.5}) CHECK(std::abs(spec.psi()(pt.p.matrix() * (t * x).exp())) < 1e-10);
    }
  }

  SUBCASE("Phi_H level set on SU(3) is minimal with second-order refinement") {
    const auto spec = LevelSetSpec::phi_h(diag({1, 2, 3}));
    const auto cloud = sample_manifold(spec, 20, 11);
    REQUIRE(cloud.points.size() == 20);
    for (const auto& pt : cloud.points) {
      const auto coarse = mean_curvature(spec, pt, 1e-3);
      const auto fine = mean_curvature(spec, pt, 5e-4);
      CHECK(coarse.norm < 5e-4);
      CHECK(coarse.minimal);
      CHECK(coarse.tangent_dimension == 6);
      CHECK(coarse.normal_accelerations.size() == 6);
      const double ratio = coarse.norm / fine.norm;
      CHECK(ratio >= 3.0);
      CHECK(ratio <= 5.0);
    }
  }

  SUBCASE("non-minimal control is flagged") {
    const auto spec = control_spec();
    const auto cloud = sample_manifold(spec, 3, 2);
    REQUIRE_FALSE(cloud.points.empty());
    for (const auto& pt : cloud.points) {
      const auto c = mean_curvature(spec, pt, 1e-3);
      CHECK(c.norm > 1e-2);
      CHECK_FALSE(c.minimal);
    }
  }

  SUBCASE("step range") {
    const auto spec = LevelSetSpec::phi_h(diag({1, 2, 3}));
    const auto pt = newton_project(spec, haar_sample(kSU3, 1));
    CHECK_THROWS_AS(mean_curvature(spec, pt, 5e-5), Error);
    CHECK_THROWS_AS(mean_curvature(spec, pt, 2e-2), Error);
  }
}

TEST_CASE("sample_manifold") {
  const auto spec = LevelSetSpec::phi_h(diag({1, 2, 3}));

  SUBCASE("500 points") {
    const auto cloud = sample_manifold(spec, 500, 3);
    CHECK(cloud.points.size() == 500);
    CHECK(cloud.warnings.empty());
    for (const auto& pt : cloud.points) {
      CHECK(std::abs(pt.value) < 1e-12);
      CHECK(membership_residual(kSU3, pt.p.matrix()) < 1e-11);
    }
  }

  SUBCASE("count 0") {
    const auto cloud = sample_manifold(spec, 0, 3);
    CHECK(cloud.points.empty());
    CHECK(cloud.requested == 0);
  }

  SUBCASE("local PCA sees codimension two") {
    const auto center = newton_project(spec, haar_sample(kSU3, 4));
    SampleOptions options;
    options.center = center.p;
    options.radius = 0.05;
    const auto cloud = sample_manifold(spec, 200, 6, options);
    REQUIRE(cloud.points.size() >= 50);
    const auto& basis = spec.calculus().basis();
    std::vector<RVec> coords;
    for (const auto& pt : cloud.points) coords.push_back(basis.coefficients(logm(center.p.matrix().adjoint() * pt.p.matrix())));
    std::sort(coords.begin(), coords.end(), [](const RVec& a, const RVec& b) { return a.norm() < b.norm(); });
    coords.resize(50);
    RVec mean = RVec::Zero(basis.size());
    for (const auto& c : coords) mean += c / 50.0;
    RMat cov = RMat::Zero(basis.size(), basis.size());
    for (const auto& c : coords) cov += (c - mean) * (c - mean).transpose();
    const Eigen::SelfAdjointEigenSolver<RMat> eig(cov);
    const RVec ev = eig.eigenvalues();  // ascending
    CHECK(ev[1] < 1e-3 * ev[2]);
    CHECK(ev[2] > 1e-3 * ev[basis.size() - 1]);
  }

  SUBCASE("deterministic") {
    const auto a = sample_manifold(spec, 20, 9);
    const auto b = sample_manifold(spec, 20, 9);
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) CHECK(a.points[i].p.matrix() == b.points[i].p.matrix());
  }
}

TEST_CASE("leaves of a morphism are disjoint away from the singular set") {
  const auto m = build_morphism(su_standard(3, unit_vector(3, 0)), {0, 1, 2}, parse_polynomial("1 0 : 2 0 0", 3),
                                parse_polynomial("1 0 : 0 1 1", 3));
  const std::pair<cplx, cplx> xi1{1.0, 2.0}, xi2{cplx(0.5, 1.0), 1.0};
  const auto leaf1 = LevelSetSpec::from_morphism(m, xi1.first, xi1.second);
  const auto leaf2 = LevelSetSpec::from_morphism(m, xi2.first, xi2.second);
  const auto cloud = sample_manifold(leaf1, 30, 4);
  REQUIRE(cloud.points.size() >= 15);
  int checked = 0;
  for (const auto& pt : cloud.points) {
    if (std::abs(m.q_field()(pt.p.matrix())) < 1e-6) continue;  // near the singular set
    ++checked;
    CHECK(std::abs(leaf2.psi()(pt.p.matrix())) > 1e-8);
  }
  CHECK(checked >= 15);
  CHECK_THROWS_AS(LevelSetSpec::from_morphism(m, 0.0, 0.0), Error);
}

TEST_CASE("CSV and PLY export") {
  const auto spec = LevelSetSpec::phi_h(diag({1, 2, 3}));
  const auto cloud = sample_manifold(spec, 5, 2);
  std::ostringstream a, b, ply;
  write_csv(a, cloud);
  write_csv(b, sample_manifold(spec, 5, 2));
  CHECK(a.str() == b.str());
  std::istringstream lines(a.str());
  std::string header;
  std::getline(lines, header);
  CHECK(std::count(header.begin(), header.end(), ',') == 2 * 9 + 2 - 1);
  CHECK(header.rfind("m_0_0_re,m_0_0_im", 0) == 0);

  std::ostringstream with_curv;
  write_csv(with_curv, cloud, std::vector<std::optional<double>>(5, 1e-7));
  CHECK(with_curv.str().find("curvature") != std::string::npos);
  CHECK_THROWS_AS(write_csv(with_curv, cloud, {1e-7}), Error);

  write_ply(ply, cloud, {0, 3, 5});
  CHECK(ply.str().rfind("ply\n", 0) == 0);
  CHECK(ply.str().find("element vertex 5") != std::string::npos);
  CHECK_THROWS_AS(write_ply(ply, cloud, {0, 1, 18}), Error);
}
