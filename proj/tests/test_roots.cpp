#include <random>

#include "doctest.h"
#include "lie_eigenlab/roots.hpp"
#include "oracles.hpp"

using namespace lie;

namespace {

std::vector<std::pair<Family, int>> groups() {
  return {{Family::SU, 2}, {Family::SU, 3}, {Family::SU, 4}, {Family::SU, 6}, {Family::SO, 3},
          {Family::SO, 4}, {Family::SO, 5}, {Family::SO, 6}, {Family::SO, 8}, {Family::SO, 9},
          {Family::Sp, 1}, {Family::Sp, 2}, {Family::Sp, 3}};
}

// Scalar by which the brute-force Casimir acts on the defining representation.
double defining_casimir(const GroupSpec& spec) {
  const Mat c = oracle::casimir_sum(build_basis(spec));
  const int m = spec.matrix_size();
  REQUIRE(max_abs(c - c(0, 0) * Mat::Identity(m, m)) < 1e-12);
  return c(0, 0).real();
}

}  // namespace

TEST_CASE("positive root counts") {
  CHECK(root_system(Family::SU, 4).positive_roots.size() == 6);
  CHECK(root_system(Family::Sp, 2).positive_roots.size() == 4);
  CHECK(root_system(Family::SO, 7).positive_roots.size() == 9);
  CHECK(root_system(Family::SO, 8).positive_roots.size() == 12);
  for (const auto& [family, n] : groups()) {
    const auto r = root_system(family, n);
    const std::size_t k = r.rank;
    std::size_t expected = 0;
    switch (r.type) {
      case RootType::A: expected = k * (k + 1) / 2; break;
      case RootType::B:
      case RootType::C: expected = k * k; break;
      case RootType::D: expected = k * (k - 1); break;
    }
    CHECK(r.positive_roots.size() == expected);
    CHECK(r.simple_roots.size() == k);
  }
  CHECK(root_system(Family::SO, 5).type == RootType::B);
  CHECK(root_system(Family::SO, 6).type == RootType::D);
  CHECK_THROWS_AS(root_system(Family::SU, 1), Error);
  CHECK_THROWS_AS(root_system(Family::SO, 2), Error);
}

TEST_CASE("delta is the half-sum and pairs to 1 with every simple coroot") {
  for (const auto& [family, n] : groups()) {
    const auto r = root_system(family, n);
    CAPTURE(to_string(r.type));
    CAPTURE(r.rank);
    RationalVector twice(r.ambient, Rational(0));
    for (const auto& a : r.positive_roots)
      for (int i = 0; i < r.ambient; ++i) twice[i] += a[i];
    for (int i = 0; i < r.ambient; ++i) CHECK(twice[i] == Rational(2) * r.delta[i]);
    for (const auto& a : r.simple_roots) {
      const Rational pairing = Rational(2) * inner(r, r.delta, a) / inner(r, a, a);
      CHECK(pairing == Rational(1));
    }
  }
}

TEST_CASE("SU(2) root length from the explicit torus element") {
  // H = diag(i, -i)/sqrt 2 has unit norm and [H, E_12] = i sqrt2 E_12, so the
  // dual root has squared length 2.
  const GroupSpec su2(Family::SU, 2);
  const auto basis = build_basis(su2);
  const Mat& h = basis[basis.size() - 1].matrix();
  REQUIRE(max_abs(h - h.diagonal().asDiagonal().toDenseMatrix()) == 0.0);
  Mat e = Mat::Zero(2, 2);
  e(0, 1) = 1.0;
  const Mat bracket = h * e - e * h;
  const double length2 = std::norm(bracket(0, 1));
  const auto r = root_system(Family::SU, 2);
  REQUIRE(r.positive_roots.size() == 1);
  CHECK(length2 == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(inner(r, r.positive_roots[0], r.positive_roots[0]) == Rational(2));
}

TEST_CASE("root lengths match the torus of SU(n) and Sp(n)") {
  // Sum of alpha(H_k)^2 over an orthonormal torus basis is |alpha|^2 in the
  // dual metric. Root vectors are matrix units E_ab with [H, E_ab] = i(d_a - d_b) E_ab.
  SUBCASE("SU(n)") {
    for (int n = 2; n <= 5; ++n) {
      const GroupSpec spec(Family::SU, n);
      const auto basis = build_basis(spec);
      const auto r = root_system(spec);
      for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
          double sum = 0.0;
          for (const auto& x : basis.elements()) {
            const Mat& m = x.matrix();
            if (max_abs(m - m.diagonal().asDiagonal().toDenseMatrix()) != 0.0) continue;
            sum += std::pow((m(a, a) - m(b, b)).imag(), 2);
          }
          RationalVector root(n, Rational(0));
          root[a] = 1;
          root[b] = -1;
          CHECK(sum == doctest::Approx(boost::rational_cast<double>(inner(r, root, root))).epsilon(1e-13));
        }
    }
  }
  SUBCASE("Sp(n)") {
    for (int n = 1; n <= 3; ++n) {
      const auto r = root_system(Family::Sp, n);
      // torus basis i diag(e_k, -e_k)/sqrt2 of the 2n x 2n realization
      auto d = [&](int k, int idx) {
        const double s = 1.0 / std::sqrt(2.0);
        if (idx < n) return idx == k ? s : 0.0;
        return idx - n == k ? -s : 0.0;
      };
      for (const auto& root : r.positive_roots) {
        // locate a matrix unit carrying this root
        int a = -1, b = -1;
        for (int i = 0; i < n && a < 0; ++i)
          for (int j = 0; j < 2 * n && a < 0; ++j) {
            RationalVector w(n, Rational(0));
            w[i] += 1;
            if (j < n) w[j] -= 1;
            else w[j - n] += 1;
            if (w == root && i != j) {
              a = i;
              b = j;
            }
          }
        REQUIRE(a >= 0);
        double sum = 0.0;
        for (int k = 0; k < n; ++k) sum += std::pow(d(k, a) - d(k, b), 2);
        CHECK(sum == doctest::Approx(boost::rational_cast<double>(inner(r, root, root))).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("casimir_eigenvalue against brute-force basis sums") {
  SUBCASE("zero weight") {
    const auto r = root_system(Family::SU, 3);
    CHECK(casimir_eigenvalue(zero_weight(r), r) == 0.0);
  }
  SUBCASE("A1 standard") {
    const auto r = root_system(Family::SU, 2);
    CHECK(casimir_eigenvalue_exact(standard_weight(r), r) == Rational(-3, 2));
    CHECK(defining_casimir(GroupSpec(Family::SU, 2)) == doctest::Approx(-1.5).epsilon(1e-13));
  }
  SUBCASE("A_{n-1} standard and dual") {
    for (int n = 2; n <= 6; ++n) {
      const auto r = root_system(Family::SU, n);
      const double bf = defining_casimir(GroupSpec(Family::SU, n));
      CHECK(std::abs(casimir_eigenvalue(standard_weight(r), r) - bf) < 1e-12);
      CHECK(std::abs(casimir_eigenvalue(dual_weight(r), r) - bf) < 1e-12);
    }
  }
  SUBCASE("defining representations of SO(n) and Sp(n)") {
    for (const auto& [family, n] : groups()) {
      if (family == Family::SU) continue;
      const GroupSpec spec(family, n);
      const auto r = root_system(spec);
      CAPTURE(spec.name());
      CHECK(std::abs(casimir_eigenvalue(standard_weight(r), r) - defining_casimir(spec)) < 1e-12);
    }
  }
  SUBCASE("adjoint representation") {
    for (const auto& [family, n] : groups()) {
      const GroupSpec spec(family, n);
      // the adjoint of SO(4) is not irreducible
      if (family == Family::SO && n == 4) continue;
      const auto r = root_system(spec);
      CAPTURE(spec.name());
      CHECK(std::abs(casimir_eigenvalue(adjoint_weight(r), r) - oracle::adjoint_casimir(build_basis(spec))) <
            1e-11);
    }
  }
}

TEST_CASE("casimir_eigenvalue is negative on nonzero dominant weights") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> step(0, 3);
  for (const auto& [family, n] : groups()) {
    const auto r = root_system(family, n);
    for (int trial = 0; trial < 50; ++trial) {
      // non-increasing integer coordinates, nonnegative except possibly the
      // last one for type D
      RationalVector c(r.ambient);
      long long v = 0;
      for (int i = r.ambient - 1; i >= 0; --i) c[i] = v += step(rng);
      if (r.type == RootType::D && step(rng) % 2) c[r.ambient - 1] = -c[r.ambient - 1];
      Weight w{c, "random"};
      if (r.type == RootType::A) {
        Rational mean(0);
        for (const auto& x : c) mean += x;
        mean /= Rational(r.ambient);
        for (auto& x : w.coords) x -= mean;
      }
      REQUIRE(is_dominant(w, r));
      bool zero = true;
      for (const auto& x : w.coords) zero = zero && x == Rational(0);
      if (!zero) CHECK(casimir_eigenvalue_exact(w, r) < Rational(0));
    }
  }
}

TEST_CASE("non-dominant weight is a domain error") {
  const auto r = root_system(Family::SU, 3);
  Weight w = standard_weight(r);
  for (auto& x : w.coords) x = -x;
  CHECK_FALSE(is_dominant(w, r));
  try {
    casimir_eigenvalue(w, r);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Domain);
  }
  CHECK_THROWS_AS(named_weight(r, "spin"), Error);
}

TEST_CASE("crosscheck_casimir") {
  SUBCASE("SU(3) standard") {
    const auto c = crosscheck_casimir(GroupSpec(Family::SU, 3), "standard");
    CHECK(c.discrepancy < 1e-10);
    CHECK(c.alpha == doctest::Approx(-8.0 / 3.0).epsilon(1e-15));
  }
  SUBCASE("SU(2) standard") {
    const auto c = crosscheck_casimir(GroupSpec(Family::SU, 2), "standard");
    CHECK(std::abs(c.alpha + 1.5) < 1e-12);
    CHECK(std::abs(c.measured + 1.5) < 1e-12);
  }
  SUBCASE("SU(3) adjoint uses the highest root") {
    const GroupSpec su3(Family::SU, 3);
    const auto c = crosscheck_casimir(su3, "adjoint");
    CHECK(std::abs(c.measured - oracle::adjoint_casimir(build_basis(su3))) < 1e-10);
    CHECK(std::abs(c.measured - c.alpha) < 1e-10);
  }
  SUBCASE("every catalogued family agrees within 1e-9") {
    const std::vector<std::pair<GroupSpec, std::string>> cases = {
        {GroupSpec(Family::SU, 4), "standard"}, {GroupSpec(Family::SU, 4), "dual"},
        {GroupSpec(Family::SU, 4), "adjoint"},  {GroupSpec(Family::SU, 3), "zero"},
        {GroupSpec(Family::SO, 4), "standard"}, {GroupSpec(Family::SO, 5), "standard"},
        {GroupSpec(Family::Sp, 1), "standard"}, {GroupSpec(Family::Sp, 2), "standard"}};
    for (const auto& [spec, label] : cases) {
      CAPTURE(spec.name());
      CAPTURE(label);
      const auto c = crosscheck_casimir(spec, label, 50, 3);
      CHECK(c.discrepancy < 1e-9);
      CHECK(std::abs(c.measured_imag) < 1e-9);
    }
  }
  SUBCASE("labels without a catalogued family") {
    CHECK_THROWS_AS(crosscheck_casimir(GroupSpec(Family::SO, 5), "adjoint"), Error);
    CHECK_THROWS_AS(crosscheck_casimir(GroupSpec(Family::SU, 3), "spin"), Error);
  }
}
