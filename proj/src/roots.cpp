#include "lie_eigenlab/roots.hpp"

namespace lie {

namespace {

RationalVector unit(int dim, int i, long long c = 1) {
  RationalVector v(dim, Rational(0));
  v[i] = Rational(c);
  return v;
}

RationalVector combine(const RationalVector& x, const RationalVector& y, long long sy) {
  RationalVector v(x);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += Rational(sy) * y[i];
  return v;
}

// Orthogonal projection onto the trace-zero hyperplane.
RationalVector trace_free(RationalVector v) {
  Rational mean(0);
  for (const auto& x : v) mean += x;
  mean /= Rational(static_cast<long long>(v.size()));
  for (auto& x : v) x -= mean;
  return v;
}

}  // namespace

std::string to_string(RootType type) {
  switch (type) {
    case RootType::A: return "A";
    case RootType::B: return "B";
    case RootType::C: return "C";
    case RootType::D: return "D";
  }
  return "?";
}

RootSystem root_system(Family family, int n) {
  RootSystem r;
  switch (family) {
    case Family::SU:
      if (n < 2) throw Error(ErrorKind::InvalidSpec, "SU(n) root system needs n >= 2");
      r.type = RootType::A;
      r.rank = n - 1;
      r.ambient = n;
      r.scale = Rational(1);
      break;
    case Family::SO:
      if (n < 3) throw Error(ErrorKind::InvalidSpec, "SO(n) root system needs n >= 3");
      r.type = n % 2 ? RootType::B : RootType::D;
      r.rank = n / 2;
      r.ambient = r.rank;
      r.scale = Rational(1, 2);
      break;
    case Family::Sp:
      if (n < 1) throw Error(ErrorKind::InvalidSpec, "Sp(n) root system needs n >= 1");
      r.type = RootType::C;
      r.rank = n;
      r.ambient = n;
      r.scale = Rational(1, 2);
      break;
  }

  const int m = r.ambient;
  if (r.type == RootType::A) {
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) r.positive_roots.push_back(combine(unit(m, i), unit(m, j), -1));
    for (int i = 0; i + 1 < m; ++i) r.simple_roots.push_back(combine(unit(m, i), unit(m, i + 1), -1));
  } else {
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        r.positive_roots.push_back(combine(unit(m, i), unit(m, j), -1));
        r.positive_roots.push_back(combine(unit(m, i), unit(m, j), 1));
      }
    for (int i = 0; i < m; ++i) {
      if (r.type == RootType::B) r.positive_roots.push_back(unit(m, i));
      if (r.type == RootType::C) r.positive_roots.push_back(unit(m, i, 2));
    }
    for (int i = 0; i + 1 < m; ++i) r.simple_roots.push_back(combine(unit(m, i), unit(m, i + 1), -1));
    switch (r.type) {
      case RootType::B: r.simple_roots.push_back(unit(m, m - 1)); break;
      case RootType::C: r.simple_roots.push_back(unit(m, m - 1, 2)); break;
      case RootType::D: r.simple_roots.push_back(combine(unit(m, m - 2), unit(m, m - 1), 1)); break;
      case RootType::A: break;
    }
  }

  r.delta.assign(m, Rational(0));
  for (const auto& alpha : r.positive_roots)
    for (int i = 0; i < m; ++i) r.delta[i] += alpha[i] / Rational(2);
  return r;
}

RootSystem root_system(const GroupSpec& spec) { return root_system(spec.family(), spec.n()); }

Rational inner(const RootSystem& r, const RationalVector& x, const RationalVector& y) {
  if (x.size() != y.size() || static_cast<int>(x.size()) != r.ambient) {
    throw Error(ErrorKind::SpecMismatch, "weight dimension does not match the root system");
  }
  Rational sum(0);
  for (std::size_t i = 0; i < x.size(); ++i) sum += x[i] * y[i];
  return r.scale * sum;
}

Weight zero_weight(const RootSystem& r) { return {RationalVector(r.ambient, Rational(0)), "zero"}; }

Weight standard_weight(const RootSystem& r) {
  RationalVector v = unit(r.ambient, 0);
  if (r.type == RootType::A) v = trace_free(v);
  return {v, "standard"};
}

Weight dual_weight(const RootSystem& r) {
  if (r.type != RootType::A) return {standard_weight(r).coords, "dual"};
  return {trace_free(unit(r.ambient, r.ambient - 1, -1)), "dual"};
}

Weight adjoint_weight(const RootSystem& r) {
  const int m = r.ambient;
  switch (r.type) {
    case RootType::A: return {combine(unit(m, 0), unit(m, m - 1), -1), "adjoint"};
    case RootType::B:
      if (m == 1) return {unit(m, 0), "adjoint"};
      return {combine(unit(m, 0), unit(m, 1), 1), "adjoint"};
    case RootType::C: return {unit(m, 0, 2), "adjoint"};
    case RootType::D: return {combine(unit(m, 0), unit(m, 1), 1), "adjoint"};
  }
  return zero_weight(r);
}

Weight named_weight(const RootSystem& r, const std::string& label) {
  if (label == "zero") return zero_weight(r);
  if (label == "standard") return standard_weight(r);
  if (label == "dual") return dual_weight(r);
  if (label == "adjoint") return adjoint_weight(r);
  throw Error(ErrorKind::InvalidSpec, "unknown weight label '" + label + "'");
}

bool is_dominant(const Weight& w, const RootSystem& r) {
  for (const auto& alpha : r.positive_roots)
    if (inner(r, w.coords, alpha) < Rational(0)) return false;
  return true;
}

Rational casimir_eigenvalue_exact(const Weight& w, const RootSystem& r) {
  if (!is_dominant(w, r)) {
    throw Error(ErrorKind::Domain, "weight '" + w.label + "' is not dominant");
  }
  return -(inner(r, w.coords, w.coords) + Rational(2) * inner(r, w.coords, r.delta));
}

double casimir_eigenvalue(const Weight& w, const RootSystem& r) {
  return boost::rational_cast<double>(casimir_eigenvalue_exact(w, r));
}

}  // namespace lie
