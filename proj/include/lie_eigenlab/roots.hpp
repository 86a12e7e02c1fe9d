#pragma once

#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "lie_eigenlab/group.hpp"

namespace lie {

using Rational = boost::rational<long long>;
using RationalVector = std::vector<Rational>;

enum class RootType { A, B, C, D };

std::string to_string(RootType type);

/// Positive roots in epsilon coordinates. The inner product on these
/// coordinates is scale * (Euclidean), which is the dual of the trace form
/// restricted to the maximal torus: scale 1 for type A, 1/2 for B, C, D.
struct RootSystem {
  RootType type;
  int rank;
  int ambient;
  Rational scale;
  std::vector<RationalVector> positive_roots;
  std::vector<RationalVector> simple_roots;
  RationalVector delta;
};

struct Weight {
  RationalVector coords;
  std::string label;
};

/// SU(n) -> A_{n-1}, SO(2k+1) -> B_k, Sp(n) -> C_n, SO(2k) -> D_k.
RootSystem root_system(Family family, int n);
RootSystem root_system(const GroupSpec& spec);

Rational inner(const RootSystem& r, const RationalVector& x, const RationalVector& y);

Weight zero_weight(const RootSystem& r);
/// Highest weight of the defining representation.
Weight standard_weight(const RootSystem& r);
/// Highest weight of the dual of the defining representation.
Weight dual_weight(const RootSystem& r);
/// The highest root.
Weight adjoint_weight(const RootSystem& r);
/// "zero", "standard", "dual" or "adjoint"; anything else is InvalidSpec.
Weight named_weight(const RootSystem& r, const std::string& label);

bool is_dominant(const Weight& w, const RootSystem& r);

/// alpha = -(|w|^2 + 2 <w, delta>), exact. Throws Domain for a non-dominant w.
Rational casimir_eigenvalue_exact(const Weight& w, const RootSystem& r);
double casimir_eigenvalue(const Weight& w, const RootSystem& r);

/// Casimir value against the Laplacian eigenvalue measured on the catalogued
/// family for the label.
struct CasimirCrosscheck {
  std::string group;
  std::string label;
  double alpha = 0.0;           // from the root system
  double brute_force = 0.0;     // sum_X X^2 acting on the representation
  double measured = 0.0;        // fitted Laplacian eigenvalue
  double measured_imag = 0.0;
  double discrepancy = 0.0;     // max of |measured - alpha|, |brute_force - alpha|
  int samples = 0;
};

/// Labels: "standard" and "zero" for every group; "dual" and "adjoint" on SU.
CasimirCrosscheck crosscheck_casimir(const GroupSpec& spec, const std::string& label,
                                     int samples = 50, std::uint64_t seed = 1);

}  // namespace lie
