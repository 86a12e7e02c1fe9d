#include <cstdlib>
#include <random>

#include "doctest.h"
#include "lie_eigenlab/families.hpp"
#include "oracles.hpp"

using namespace lie;

namespace {

// kappa(<za,c>, <za,d>) by direct summation of (c^* p X a)(d^* p X a).
cplx brute_kappa_standard(const AlgebraBasis& basis, const Mat& p, const CVec& a, const CVec& c,
                          const CVec& d) {
  cplx sum(0.0);
  for (const auto& x : basis.elements()) {
    const CVec v = p * x.matrix() * a;
    sum += c.dot(v) * d.dot(v);
  }
  return sum;
}

// kappa through central differences of the black-box views.
cplx fd_kappa(const AlgebraBasis& basis, const ScalarField& f, const ScalarField& g, const Mat& p) {
  const auto fb = f.black_box();
  const auto gb = g.black_box();
  cplx sum(0.0);
  for (const auto& x : basis.elements())
    sum += oracle::central_first(fb, p, x.matrix(), 1e-6) * oracle::central_first(gb, p, x.matrix(), 1e-6);
  return sum;
}

CVec iso(int n) {
  CVec a = CVec::Zero(n);
  a[0] = 1.0;
  a[1] = cplx(0.0, 1.0);
  return a;
}

}  // namespace

TEST_CASE("su_standard") {
  SUBCASE("n = 2, a = e1 gives the first column") {
    const auto f = su_standard(2, unit_vector(2, 0));
    REQUIRE(f.size() == 2);
    const auto g = haar_sample(GroupSpec(Family::SU, 2), 4);
    CHECK(f.member(0)(g) == g.matrix()(0, 0));
    CHECK(f.member(1)(g) == g.matrix()(1, 0));
  }
  SUBCASE("SU(3) verification with the Casimir eigenvalue") {
    const GroupSpec su3(Family::SU, 3);
    const Mat cas = oracle::casimir_sum(build_basis(su3));
    const auto rep = verify_family(su_standard(3, unit_vector(3, 0)), 50, 1);
    CHECK(rep.status == VerificationStatus::Pass);
    CHECK(rep.tau_residual < 1e-9);
    CHECK(std::abs(rep.lambda - cas(0, 0)) < 1e-12);
    CHECK(std::abs(rep.lambda + 8.0 / 3.0) < 1e-12);
  }
  SUBCASE("kappa ratio is the same on 10 pairs") {
    const GroupSpec su3(Family::SU, 3);
    const auto basis = build_basis(su3);
    std::mt19937_64 rng(8);
    const CVec a = oracle::random_complex(3, 1, rng).col(0);
    std::vector<cplx> ratios;
    for (int t = 0; t < 10; ++t) {
      const CVec c = oracle::random_complex(3, 1, rng).col(0);
      const CVec d = oracle::random_complex(3, 1, rng).col(0);
      const Mat p = haar_sample(su3, 100 + t).matrix();
      const cplx k = brute_kappa_standard(basis, p, a, c, d);
      ratios.push_back(k / (c.dot(p * a) * d.dot(p * a)));
    }
    for (const auto& r : ratios) CHECK(std::abs(r - ratios[0]) < 1e-9);
    const auto rep = verify_family(su_standard(3, a), 50, 2);
    CHECK(std::abs(rep.mu - ratios[0]) < 1e-9);
  }
  CHECK_THROWS_AS(su_standard(3, CVec::Zero(3)), Error);
  CHECK_THROWS_AS(su_standard(3, CVec::Ones(2)), Error);
}

TEST_CASE("su_dual") {
  const GroupSpec su3(Family::SU, 3);
  std::mt19937_64 rng(9);
  const CVec a = oracle::random_complex(3, 1, rng).col(0);
  const auto dual = su_dual(3, a);
  const auto standard = su_standard(3, a);
  const auto p = haar_sample(su3, 6);
  for (int k = 0; k < 3; ++k) CHECK(std::abs(dual.member(k)(p) - std::conj(standard.member(k)(p))) < 1e-15);
  const auto rep = verify_family(dual, 50, 1);
  CHECK(rep.status == VerificationStatus::Pass);
  CHECK(std::abs(rep.lambda - verify_family(standard, 50, 1).lambda) < 1e-12);
  const Calculus calc(build_basis(su3));
  const cplx cross = kappa(calc, dual.member(0), standard.member(0), p).value;
  MESSAGE("kappa(dual_1, standard_1) at one point: " << cross.real() << " + " << cross.imag() << "i");
}

TEST_CASE("so_isotropic") {
  CHECK_NOTHROW(so_isotropic(4, iso(4)));
  CHECK_THROWS_AS(so_isotropic(4, unit_vector(4, 0)), Error);
  CHECK(is_isotropic(CVec::Map(std::vector<cplx>{3.0, 4.0, cplx(0, 5)}.data(), 3)));
  CHECK_FALSE(is_isotropic(CVec::Map(std::vector<cplx>{3.0, cplx(0, 4)}.data(), 2)));
  CHECK(is_isotropic(CVec::Map(std::vector<cplx>{1.0, cplx(0, 1 + 1e-14)}.data(), 2)));
  CHECK_FALSE(is_isotropic(CVec::Map(std::vector<cplx>{1.0, cplx(0, 1.1)}.data(), 2)));
  try {
    so_isotropic(5, unit_vector(5, 0));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Precondition);
  }

  const GroupSpec so4(Family::SO, 4);
  const auto rep = verify_family(so_isotropic(4, iso(4)), 50, 1);
  CHECK(rep.tau_residual < 1e-9);
  CHECK(rep.kappa_residual < 1e-9);
  CHECK(rep.mu.real() < 0.0);
  CHECK(std::abs(rep.mu.imag()) < 1e-12);
  // the fitted constant against finite differences at one point
  const auto fam = so_isotropic(4, iso(4));
  const Mat p = haar_sample(so4, 5).matrix();
  const cplx k = fd_kappa(build_basis(so4), fam.member(0), fam.member(1), p);
  CHECK(std::abs(k - rep.mu * fam.member(0)(p) * fam.member(1)(p)) < 1e-8);
}

TEST_CASE("sp_standard") {
  SUBCASE("Sp(1) matches SU(2)") {
    const auto rep = verify_family(sp_standard(1, unit_vector(2, 0)), 50, 1);
    const Mat cas = oracle::casimir_sum(build_basis(GroupSpec(Family::SU, 2)));
    CHECK(std::abs(rep.lambda - cas(0, 0)) < 1e-12);
  }
  SUBCASE("Sp(2)") {
    std::mt19937_64 rng(12);
    const auto rep = verify_family(sp_standard(2, oracle::random_complex(4, 1, rng).col(0)), 50, 1);
    CHECK(rep.status == VerificationStatus::Pass);
    CHECK(rep.tau_residual < 1e-9);
    CHECK(rep.kappa_residual < 1e-9);
    CHECK(rep.mu_spread < 1e-9);
    CHECK(std::abs(rep.lambda - oracle::casimir_sum(build_basis(GroupSpec(Family::Sp, 2)))(0, 0)) < 1e-12);
  }
  CHECK_THROWS_AS(sp_standard(2, CVec::Ones(3)), Error);
}

TEST_CASE("su_tensor") {
  const GroupSpec su3(Family::SU, 3);
  const auto fam = su_tensor(3, unit_vector(3, 0), unit_vector(3, 1));
  CHECK(fam.size() == 9);
  CHECK(fam.index_dimension() == 9);
  const auto p = haar_sample(su3, 2);
  CHECK(std::abs(fam.member(5)(p) - p.matrix()(1, 0) * std::conj(p.matrix()(2, 1))) < 1e-15);

  const auto rep = verify_family(fam, 50, 1);
  CHECK(rep.status == VerificationStatus::Pass);
  CHECK(std::abs(rep.mu + 2.0) < 1e-10);
  CHECK(rep.mu_spread < 1e-10);
  CHECK(std::abs(rep.lambda - oracle::adjoint_casimir(build_basis(su3))) < 1e-9);

  // kappa = -2 phi psi on one pair by finite differences
  const Mat q = haar_sample(su3, 77).matrix();
  const cplx k = fd_kappa(build_basis(su3), fam.member(1), fam.member(6), q);
  CHECK(std::abs(k + 2.0 * fam.member(1)(q) * fam.member(6)(q)) < 1e-8);

  SUBCASE("general orthogonal a, b") {
    std::mt19937_64 rng(4);
    const CVec a = oracle::random_complex(4, 1, rng).col(0);
    CVec b = oracle::random_complex(4, 1, rng).col(0);
    b -= a * (a.dot(b) / a.squaredNorm());
    const auto r = verify_family(su_tensor(4, a, b), 30, 5);
    CHECK(r.status == VerificationStatus::Pass);
    CHECK(std::abs(r.mu + 2.0) < 1e-9);
  }
  CHECK_THROWS_AS(su_tensor(3, unit_vector(3, 0), unit_vector(3, 0) + unit_vector(3, 1)), Error);
  CHECK_THROWS_AS(su_tensor(3, unit_vector(3, 0), CVec::Zero(3)), Error);
}

TEST_CASE("su_extended") {
  SUBCASE("s = 1 reduces to su_tensor") {
    const auto ext = su_extended(3, 1);
    const auto ten = su_tensor(3, unit_vector(3, 0), unit_vector(3, 1));
    REQUIRE(ext.size() == ten.size());
    const auto p = haar_sample(GroupSpec(Family::SU, 3), 21);
    for (int i = 0; i < ext.size(); ++i) CHECK(std::abs(ext.member(i)(p) - ten.member(i)(p)) < 1e-15);
  }
  SUBCASE("index dimension is s n^2") {
    CHECK(su_extended(4, 2).index_dimension() == 32);
    CHECK(su_extended(6, 3).index_dimension() == 108);
  }
  SUBCASE("2s > n is rejected") { CHECK_THROWS_AS(su_extended(3, 2), Error); }
  SUBCASE("SU(4), s = 2: members share lambda but not a kappa constant") {
    const GroupSpec su4(Family::SU, 4);
    const auto fam = su_extended(4, 2);
    const auto rep = verify_family(fam, 50, 1);
    CHECK(rep.tau_residual < 1e-9);
    CHECK(std::abs(rep.lambda + 8.0) < 1e-12);
    CHECK(rep.status == VerificationStatus::Fail);
    CHECK(rep.kappa_residual > 1e-2);
    // independent witness: z11 conj(z12) and z23 conj(z24) at one point,
    // kappa by finite differences against the closed form
    // kappa(z_ab, z_cd) = -z_ad z_cb + z_ab z_cd / n and its conjugate analogue
    const Mat z = haar_sample(su4, 3).matrix();
    const auto phi = fam.member(0);                 // r = 1, A = E11
    const auto psi = fam.member(16 + 1 * 4 + 1);    // r = 2, A = E22
    const cplx k = fd_kappa(build_basis(su4), phi, psi, z);
    const double n = 4.0;
    auto kz = [&](int a, int b, int c, int d) { return -z(a, d) * z(c, b) + z(a, b) * z(c, d) / n; };
    auto kzb = [&](int a, int b, int c, int d) {  // kappa(z_ab, conj z_cd)
      return (b == d ? (z * z.adjoint())(a, c) : cplx(0.0)) - z(a, b) * std::conj(z(c, d)) / n;
    };
    const cplx z11 = z(0, 0), z12b = std::conj(z(0, 1)), z23 = z(1, 2), z24b = std::conj(z(1, 3));
    const cplx closed = z12b * z24b * kz(0, 0, 1, 2) + z12b * z23 * kzb(0, 0, 1, 3) +
                        z11 * z24b * kzb(1, 2, 0, 1) + z11 * z23 * std::conj(kz(0, 1, 1, 3));
    CHECK(std::abs(k - closed) < 1e-8);
    CHECK(std::abs(k + 2.0 * phi(z) * psi(z)) > 1e-2);
  }
}

TEST_CASE("product_family") {
  const GroupSpec su3(Family::SU, 3);
  SUBCASE("first column times conjugated second column reproduces su_tensor") {
    const auto f = su_standard(3, unit_vector(3, 0));
    const auto g = su_dual(3, unit_vector(3, 1));
    const auto prod = product_family(f, g);
    const auto ten = su_tensor(3, unit_vector(3, 0), unit_vector(3, 1));
    REQUIRE(prod.size() == ten.size());
    for (std::uint64_t s = 0; s < 5; ++s) {
      const auto p = haar_sample(su3, 300 + s);
      for (int i = 0; i < prod.size(); ++i) CHECK(std::abs(prod.member(i)(p) - ten.member(i)(p)) < 1e-15);
    }
    const auto rp = verify_family(prod, 50, 1);
    const auto rt = verify_family(ten, 50, 1);
    CHECK(rp.status == rt.status);
    CHECK(std::abs(rp.mu - rt.mu) < 1e-10);
    CHECK(std::abs(*prod.expected_lambda() + 6.0) < 1e-10);
    CHECK(std::abs(*prod.expected_lambda() - rp.lambda) < 1e-10);
  }
  SUBCASE("non-proportional cross pairs are rejected") {
    try {
      product_family(su_standard(3, unit_vector(3, 0)), su_dual(3, unit_vector(3, 0)));
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NotOrthogonal);
    }
    CHECK_THROWS_AS(product_family(su_standard(3, unit_vector(3, 0)), su_standard(3, unit_vector(3, 1))),
                    Error);
  }
  SUBCASE("a family times itself on SU(2)") {
    const auto f = su_standard(2, unit_vector(2, 0));
    const auto rep = verify_family(product_family(f, f), 50, 1);
    CHECK(rep.status == VerificationStatus::Pass);
  }
}

TEST_CASE("verify_family edge cases") {
  const GroupSpec su3(Family::SU, 3);
  const auto ten = su_tensor(3, unit_vector(3, 0), unit_vector(3, 1));
  SUBCASE("corrupted member fails") {
    const auto extra = linear_coefficient(su3, Form::Hermitian, unit_vector(3, 1), CVec::Ones(3));
    const auto rep = verify_family(ten.with_corrupted_member(4, extra), 50, 1);
    CHECK(rep.status == VerificationStatus::Fail);
    CHECK(rep.tau_residual > 0.1);
  }
  SUBCASE("no samples") {
    CHECK(verify_family(ten, 0, 1).status == VerificationStatus::Inconclusive);
  }
  SUBCASE("identically zero members") {
    const EigenFamily zero(su3, "zero", {constant_field(su3, 0.0)}, 1);
    CHECK(verify_family(zero, 10, 1).status == VerificationStatus::Inconclusive);
  }
  SUBCASE("empty family") {
    CHECK_THROWS_AS(verify_family(EigenFamily(su3, "empty", {}, 0), 10, 1), Error);
  }
  SUBCASE("deterministic under a fixed seed and thread cap") {
    setenv("LIE_EIGENLAB_THREADS", "1", 1);
    const auto a = verify_family(ten, 20, 9);
    setenv("LIE_EIGENLAB_THREADS", "4", 1);
    const auto b = verify_family(ten, 20, 9);
    unsetenv("LIE_EIGENLAB_THREADS");
    CHECK(a.lambda == b.lambda);
    CHECK(a.mu == b.mu);
    CHECK(a.tau_residual == b.tau_residual);
  }
}

TEST_CASE("families are closed under linear combinations") {
  std::mt19937_64 rng(31);
  const auto families = {su_standard(3, unit_vector(3, 2)), su_tensor(3, unit_vector(3, 0), unit_vector(3, 2)),
                         so_isotropic(5, iso(5)), sp_standard(2, unit_vector(4, 1))};
  for (const auto& fam : families) {
    CAPTURE(fam.label());
    std::vector<ScalarField> members;
    for (int t = 0; t < 3; ++t) members.push_back(fam.combination(oracle::random_complex(fam.size(), 1, rng).col(0)));
    members.push_back(fam.member(0));
    const EigenFamily mixed(fam.spec(), fam.label() + "+combinations", members, fam.index_dimension());
    const auto rep = verify_family(mixed, 30, 4);
    CHECK(rep.status == VerificationStatus::Pass);
    CHECK(std::abs(rep.lambda - *fam.expected_lambda()) < 1e-8);
  }
}
