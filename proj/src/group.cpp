#include "lie_eigenlab/group.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

namespace lie {

std::string to_string(Family family) {
  switch (family) {
    case Family::SU: return "su";
    case Family::SO: return "so";
    case Family::Sp: return "sp";
  }
  return "?";
}

Family parse_family(const std::string& name) {
  if (name == "su" || name == "SU") return Family::SU;
  if (name == "so" || name == "SO") return Family::SO;
  if (name == "sp" || name == "Sp" || name == "SP") return Family::Sp;
  throw Error(ErrorKind::InvalidSpec, "unknown group family '" + name + "'");
}

GroupSpec::GroupSpec(Family family, int n) : family_(family), n_(n) {
  const int min_n = family == Family::SU ? 2 : family == Family::SO ? 3 : 1;
  if (n < min_n) {
    throw Error(ErrorKind::InvalidSpec,
                to_string(family) + "(" + std::to_string(n) + ") is not supported; need n >= " +
                    std::to_string(min_n));
  }
}

int GroupSpec::dimension() const noexcept {
  switch (family_) {
    case Family::SU: return n_ * n_ - 1;
    case Family::SO: return n_ * (n_ - 1) / 2;
    case Family::Sp: return n_ * (2 * n_ + 1);
  }
  return 0;
}

std::string GroupSpec::name() const {
  const char* prefix = family_ == Family::SU ? "SU" : family_ == Family::SO ? "SO" : "Sp";
  return std::string(prefix) + "(" + std::to_string(n_) + ")";
}

Mat symplectic_form(int n) {
  Mat j = Mat::Zero(2 * n, 2 * n);
  j.topRightCorner(n, n) = Mat::Identity(n, n);
  j.bottomLeftCorner(n, n) = -Mat::Identity(n, n);
  return j;
}

double membership_residual(const GroupSpec& spec, const Mat& m) {
  const int size = spec.matrix_size();
  if (m.rows() != size || m.cols() != size) return std::numeric_limits<double>::infinity();
  double r = max_abs(m.adjoint() * m - Mat::Identity(size, size));
  switch (spec.family()) {
    case Family::SU:
      r = std::max(r, std::abs(m.determinant() - cplx(1.0)));
      break;
    case Family::SO:
      r = std::max(r, max_abs(m.imag()));
      r = std::max(r, std::abs(m.real().determinant() - 1.0));
      break;
    case Family::Sp: {
      const Mat j = symplectic_form(spec.n());
      r = std::max(r, max_abs(m.transpose() * j * m - j));
      break;
    }
  }
  return r;
}

double algebra_residual(const GroupSpec& spec, const Mat& x) {
  const int size = spec.matrix_size();
  if (x.rows() != size || x.cols() != size) return std::numeric_limits<double>::infinity();
  double r = max_abs(x + x.adjoint());
  switch (spec.family()) {
    case Family::SU:
      r = std::max(r, std::abs(x.trace()));
      break;
    case Family::SO:
      r = std::max(r, max_abs(x.imag()));
      break;
    case Family::Sp: {
      const Mat j = symplectic_form(spec.n());
      r = std::max(r, max_abs(x.transpose() * j + j * x));
      break;
    }
  }
  return r;
}

GroupElement::GroupElement(GroupSpec spec, Mat matrix) : spec_(spec), matrix_(std::move(matrix)) {
  const double tol = kTolerances.membership * spec_.matrix_size();
  const double r = membership_residual(spec_, matrix_);
  if (!(r <= tol)) {
    throw Error(ErrorKind::Precondition,
                "matrix is not in " + spec_.name() + " (residual " + std::to_string(r) + ")");
  }
}

GroupElement GroupElement::identity(const GroupSpec& spec) {
  const int m = spec.matrix_size();
  return unchecked(spec, Mat::Identity(m, m));
}

GroupElement GroupElement::unchecked(GroupSpec spec, Mat matrix) {
  return GroupElement(spec, std::move(matrix), Unchecked{});
}

GroupElement operator*(const GroupElement& a, const GroupElement& b) {
  if (!(a.spec() == b.spec())) throw Error(ErrorKind::SpecMismatch, "group product across specs");
  return GroupElement::unchecked(a.spec(), a.matrix() * b.matrix());
}

double distance(const GroupElement& a, const GroupElement& b) {
  return (a.matrix() - b.matrix()).norm();
}

AlgebraVector::AlgebraVector(GroupSpec spec, Mat matrix) : spec_(spec), matrix_(std::move(matrix)) {
  const double r = algebra_residual(spec_, matrix_);
  if (!(r <= kTolerances.algebra * std::max(1.0, matrix_.norm()))) {
    throw Error(ErrorKind::Precondition, "matrix is not in the Lie algebra of " + spec_.name());
  }
}

AlgebraVector AlgebraVector::unchecked(GroupSpec spec, Mat matrix) {
  return AlgebraVector(spec, std::move(matrix), Unchecked{});
}

AlgebraVector AlgebraVector::operator+(const AlgebraVector& o) const {
  if (!(spec_ == o.spec_)) throw Error(ErrorKind::SpecMismatch, "algebra sum across specs");
  return unchecked(spec_, matrix_ + o.matrix_);
}

double metric(const AlgebraVector& x, const AlgebraVector& y) {
  return trace_inner(x.matrix(), y.matrix()).real();
}

AlgebraBasis::AlgebraBasis(GroupSpec spec, std::vector<AlgebraVector> elements)
    : spec_(spec), elements_(std::move(elements)) {
  if (size() != spec_.dimension()) {
    throw Error(ErrorKind::InvalidSpec, "basis cardinality " + std::to_string(size()) +
                                            " does not match dim " + spec_.name());
  }
  for (const auto& x : elements_) {
    if (!(x.spec() == spec_)) throw Error(ErrorKind::SpecMismatch, "basis element spec");
    if (algebra_residual(spec_, x.matrix()) > kTolerances.algebra) {
      throw Error(ErrorKind::InvalidSpec, "basis element outside the Lie algebra");
    }
  }
  const RMat g = gram();
  if (max_abs(g - RMat::Identity(size(), size())) > kTolerances.gram) {
    throw Error(ErrorKind::InvalidSpec, "basis is not orthonormal");
  }
}

RVec AlgebraBasis::coefficients(const Mat& x) const {
  RVec c(size());
  for (int i = 0; i < size(); ++i) c[i] = trace_inner(x, elements_[i].matrix()).real();
  return c;
}

AlgebraVector AlgebraBasis::combine(const RVec& coeffs) const {
  const int m = spec_.matrix_size();
  Mat x = Mat::Zero(m, m);
  for (int i = 0; i < size(); ++i) x += coeffs[i] * elements_[i].matrix();
  return AlgebraVector::unchecked(spec_, std::move(x));
}

RMat AlgebraBasis::gram() const {
  RMat g(size(), size());
  for (int i = 0; i < size(); ++i)
    for (int j = 0; j < size(); ++j) g(i, j) = metric(elements_[i], elements_[j]);
  return g;
}

Mat AlgebraBasis::casimir() const {
  const int m = spec_.matrix_size();
  Mat c = Mat::Zero(m, m);
  for (const auto& x : elements_) c += x.matrix() * x.matrix();
  return c;
}

AlgebraBasis AlgebraBasis::recombined(const RMat& rotation) const {
  std::vector<AlgebraVector> out;
  out.reserve(elements_.size());
  for (int i = 0; i < size(); ++i) out.push_back(combine(rotation.row(i).transpose()));
  return AlgebraBasis(spec_, std::move(out));
}

namespace {

AlgebraVector normalized(const GroupSpec& spec, Mat x) {
  const double norm = std::sqrt(trace_inner(x, x).real());
  return AlgebraVector(spec, x / norm);
}

// Traceless real diagonal matrices orthonormal under the trace form.
std::vector<RVec> torus_diagonals(int n) {
  std::vector<RVec> out;
  for (int k = 1; k < n; ++k) {
    RVec d = RVec::Zero(n);
    d.head(k).setOnes();
    d[k] = -k;
    out.push_back(d / std::sqrt(double(k) * (k + 1)));
  }
  return out;
}

std::vector<AlgebraVector> su_basis(const GroupSpec& spec) {
  const int n = spec.n();
  const cplx i1(0.0, 1.0);
  std::vector<AlgebraVector> out;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      Mat x = Mat::Zero(n, n);
      x(a, b) = 1.0;
      x(b, a) = -1.0;
      out.push_back(normalized(spec, x));
      Mat y = Mat::Zero(n, n);
      y(a, b) = i1;
      y(b, a) = i1;
      out.push_back(normalized(spec, y));
    }
  }
  for (const RVec& d : torus_diagonals(n)) {
    Mat x = (i1 * d.cast<cplx>()).asDiagonal();
    out.push_back(AlgebraVector(spec, x));
  }
  return out;
}

std::vector<AlgebraVector> so_basis(const GroupSpec& spec) {
  const int n = spec.n();
  std::vector<AlgebraVector> out;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      Mat x = Mat::Zero(n, n);
      x(a, b) = 1.0;
      x(b, a) = -1.0;
      out.push_back(normalized(spec, x));
    }
  }
  return out;
}

// sp(n) = { [[A, B], [-conj(B), conj(A)]] : A anti-Hermitian, B symmetric }.
std::vector<AlgebraVector> sp_basis(const GroupSpec& spec) {
  const int n = spec.n();
  const cplx i1(0.0, 1.0);
  std::vector<AlgebraVector> out;
  auto embed = [&](const Mat& a, const Mat& b) {
    Mat x(2 * n, 2 * n);
    x.topLeftCorner(n, n) = a;
    x.topRightCorner(n, n) = b;
    x.bottomLeftCorner(n, n) = -b.conjugate();
    x.bottomRightCorner(n, n) = a.conjugate();
    return normalized(spec, x);
  };
  const Mat zero = Mat::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      Mat x = Mat::Zero(n, n);
      x(a, b) = 1.0;
      x(b, a) = -1.0;
      out.push_back(embed(x, zero));
      Mat y = Mat::Zero(n, n);
      y(a, b) = i1;
      y(b, a) = i1;
      out.push_back(embed(y, zero));
    }
  }
  for (int a = 0; a < n; ++a) {
    Mat x = Mat::Zero(n, n);
    x(a, a) = i1;
    out.push_back(embed(x, zero));
  }
  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b) {
      Mat s = Mat::Zero(n, n);
      s(a, b) = 1.0;
      s(b, a) = 1.0;
      out.push_back(embed(zero, s));
      out.push_back(embed(zero, i1 * s));
    }
  }
  return out;
}

Mat complex_gaussian(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Mat m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = cplx(re, im);
    }
  return m;
}

// Unitary factor of a QR decomposition with the phase ambiguity removed, so
// that the result is Haar on U(m) / O(m) for Gaussian input.
template <typename MatrixT>
MatrixT haar_qr(const MatrixT& g) {
  Eigen::HouseholderQR<MatrixT> qr(g);
  MatrixT q = qr.householderQ();
  const MatrixT r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (int k = 0; k < q.cols(); ++k) {
    const auto d = r(k, k);
    const double a = std::abs(d);
    if (a > 0) q.col(k) *= d / a;
  }
  return q;
}

// n-th root of det(u)^{-1} on the branch that keeps u * root closest to m.
Mat fix_determinant(const Mat& u, const Mat& reference) {
  const int n = static_cast<int>(u.rows());
  const double theta = std::arg(u.determinant());
  Mat best;
  double best_dist = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n; ++k) {
    const Mat candidate = u * std::polar(1.0, -(theta + 2.0 * std::numbers::pi * k) / n);
    const double dist = (candidate - reference).norm();
    if (dist < best_dist) {
      best_dist = dist;
      best = candidate;
    }
  }
  return best;
}

}  // namespace

AlgebraBasis build_basis(const GroupSpec& spec) {
  switch (spec.family()) {
    case Family::SU: return AlgebraBasis(spec, su_basis(spec));
    case Family::SO: return AlgebraBasis(spec, so_basis(spec));
    case Family::Sp: return AlgebraBasis(spec, sp_basis(spec));
  }
  throw Error(ErrorKind::InvalidSpec, "unsupported family");
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer over (seed, index)
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

GroupElement haar_sample(const GroupSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int n = spec.n();
  switch (spec.family()) {
    case Family::SU: {
      const Mat u = haar_qr(complex_gaussian(n, n, rng));
      // det^{-1/n} on any branch differs by a central element; Haar is kept.
      const Mat v = u * std::polar(1.0, -std::arg(u.determinant()) / n);
      return GroupElement::unchecked(spec, v);
    }
    case Family::SO: {
      std::normal_distribution<double> normal(0.0, 1.0);
      RMat g(n, n);
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) g(i, j) = normal(rng);
      RMat q = haar_qr(g);
      if (q.determinant() < 0) q.col(0) *= -1.0;
      return GroupElement::unchecked(spec, q.cast<cplx>());
    }
    case Family::Sp: {
      // Quaternionic Gram-Schmidt: column n+k is -J conj(column k).
      const Mat j = symplectic_form(n);
      Mat q = Mat::Zero(2 * n, 2 * n);
      for (int k = 0; k < n; ++k) {
        CVec v = complex_gaussian(2 * n, 1, rng).col(0);
        for (int pass = 0; pass < 2; ++pass) {
          for (int c = 0; c < k; ++c) {
            v -= q.col(c) * q.col(c).dot(v);
            v -= q.col(n + c) * q.col(n + c).dot(v);
          }
        }
        v.normalize();
        q.col(k) = v;
        q.col(n + k) = -j * v.conjugate();
      }
      return GroupElement::unchecked(spec, q);
    }
  }
  throw Error(ErrorKind::InvalidSpec, "unsupported family");
}

Mat expm(const Mat& x) { return x.exp(); }

Mat logm(const Mat& x) { return x.log(); }

GroupElement group_exp(const GroupElement& p, const AlgebraVector& x, double t) {
  if (!(p.spec() == x.spec())) throw Error(ErrorKind::SpecMismatch, "group_exp across specs");
  if (t == 0.0) return p;
  Mat e = expm(t * x.matrix());
  if (p.spec().family() == Family::SO) e = e.real().cast<cplx>();
  return GroupElement::unchecked(p.spec(), p.matrix() * e);
}

GroupElement retract_to_group(const Mat& m, const GroupSpec& spec) {
  const int size = spec.matrix_size();
  if (m.rows() != size || m.cols() != size) {
    throw Error(ErrorKind::Retraction, "matrix has the wrong size for " + spec.name());
  }
  if (!m.allFinite()) throw Error(ErrorKind::Retraction, "matrix has non-finite entries");

  auto check_singular_values = [&](const auto& sv) {
    if (sv.minCoeff() < 0.5 || sv.maxCoeff() > 1.5) {
      throw Error(ErrorKind::Retraction, "matrix is too far from " + spec.name() + " to retract");
    }
  };

  switch (spec.family()) {
    case Family::SU: {
      Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
      check_singular_values(svd.singularValues());
      const Mat u = svd.matrixU() * svd.matrixV().adjoint();
      return GroupElement::unchecked(spec, fix_determinant(u, m));
    }
    case Family::SO: {
      const RMat re = m.real();
      Eigen::JacobiSVD<RMat> svd(re, Eigen::ComputeFullU | Eigen::ComputeFullV);
      check_singular_values(svd.singularValues());
      const RMat u = svd.matrixU() * svd.matrixV().transpose();
      if (u.determinant() < 0) {
        throw Error(ErrorKind::Retraction, "matrix is closer to the other component of O(n)");
      }
      return GroupElement::unchecked(spec, u.cast<cplx>());
    }
    case Family::Sp: {
      // Average with the image under conj-by-J so the polar factor is symplectic.
      const Mat j = symplectic_form(spec.n());
      const Mat quaternionic = 0.5 * (m - j * m.conjugate() * j);
      Eigen::JacobiSVD<Mat> svd(quaternionic, Eigen::ComputeFullU | Eigen::ComputeFullV);
      check_singular_values(svd.singularValues());
      return GroupElement::unchecked(spec, svd.matrixU() * svd.matrixV().adjoint());
    }
  }
  throw Error(ErrorKind::InvalidSpec, "unsupported family");
}

}  // namespace lie
