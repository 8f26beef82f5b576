#pragma once

#include <array>
#include <cstddef>

#include "cartan/rational.hpp"

namespace cartan {

// Free nilpotent Lie algebra of step 3 on two generators, basis X1..X5 with
//   [X2,X1] = X3,   [X3,X1] = X4,   [X3,X2] = X5,
// all other basis brackets zero. Stratification V1 = <X1,X2>, V2 = <X3>,
// V3 = <X4,X5>.

template <class S>
struct AlgebraElement {
  std::array<S, 5> c{};

  static AlgebraElement zero() { return {}; }
  static AlgebraElement basis(int i, S coef = S(1)) {
    AlgebraElement a;
    a.c[static_cast<size_t>(i - 1)] = coef;
    return a;
  }

  S& operator[](int i) { return c[static_cast<size_t>(i - 1)]; }
  const S& operator[](int i) const { return c[static_cast<size_t>(i - 1)]; }

  friend AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) {
    AlgebraElement r;
    for (size_t i = 0; i < 5; ++i) r.c[i] = a.c[i] + b.c[i];
    return r;
  }
  friend AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) {
    AlgebraElement r;
    for (size_t i = 0; i < 5; ++i) r.c[i] = a.c[i] - b.c[i];
    return r;
  }
  friend AlgebraElement operator-(const AlgebraElement& a) {
    AlgebraElement r;
    for (size_t i = 0; i < 5; ++i) r.c[i] = -a.c[i];
    return r;
  }
  friend AlgebraElement operator*(const S& s, const AlgebraElement& a) {
    AlgebraElement r;
    for (size_t i = 0; i < 5; ++i) r.c[i] = s * a.c[i];
    return r;
  }
  friend bool operator==(const AlgebraElement& a, const AlgebraElement& b) {
    return a.c == b.c;
  }
};

/// Lie bracket. Output lands in V2 + V3, so coefficients on X1, X2 are zero.
template <class S>
AlgebraElement<S> bracket(const AlgebraElement<S>& a, const AlgebraElement<S>& b) {
  AlgebraElement<S> r;
  r[3] = a[2] * b[1] - a[1] * b[2];
  r[4] = a[3] * b[1] - a[1] * b[3];
  r[5] = a[3] * b[2] - a[2] * b[3];
  return r;
}

/// Step-3 Baker-Campbell-Hausdorff product:
///   bch3(a,b) = a + b + 1/2 [a,b] + 1/12 ([a,[a,b]] + [b,[b,a]]).
/// Exact group multiplication in exponential coordinates of the first kind.
template <class S>
AlgebraElement<S> bch3(const AlgebraElement<S>& a, const AlgebraElement<S>& b) {
  const AlgebraElement<S> ab = bracket(a, b);
  const AlgebraElement<S> aab = bracket(a, ab);
  const AlgebraElement<S> bba = bracket(b, bracket(b, a));
  const S half = S(1) / S(2);
  const S twelfth = S(1) / S(12);
  return a + b + half * ab + twelfth * (aab + bba);
}

// Points of the group in exponential coordinates of the second kind:
//   (x1,...,x5) = exp(x5 X5) * exp(x4 X4) * exp(x3 X3) * exp(x2 X2) * exp(x1 X1).
template <class S>
struct GroupPoint {
  std::array<S, 5> x{};

  static GroupPoint identity() { return {}; }
  static GroupPoint from(S x1, S x2, S x3, S x4, S x5) {
    return GroupPoint{{std::move(x1), std::move(x2), std::move(x3), std::move(x4), std::move(x5)}};
  }

  S& operator[](int i) { return x[static_cast<size_t>(i - 1)]; }
  const S& operator[](int i) const { return x[static_cast<size_t>(i - 1)]; }

  friend bool operator==(const GroupPoint& a, const GroupPoint& b) { return a.x == b.x; }
};

template <class S>
GroupPoint<double> to_double_point(const GroupPoint<S>& p) {
  GroupPoint<double> q;
  for (size_t i = 0; i < 5; ++i) q.x[i] = to_double(p.x[i]);
  return q;
}

inline double euclidean_gap(const GroupPoint<double>& p, const GroupPoint<double>& q) {
  double s = 0;
  for (size_t i = 0; i < 5; ++i) s += (p.x[i] - q.x[i]) * (p.x[i] - q.x[i]);
  return std::sqrt(s);
}

/// Second-kind coordinates of exp(a): peel the exp(x1 X1) and exp(x2 X2)
/// factors off with bch3; what remains lives in V2 + V3 and commutes.
template <class S>
GroupPoint<S> exp_to_group(const AlgebraElement<S>& a) {
  AlgebraElement<S> rest = bch3(a, AlgebraElement<S>::basis(1, -a[1]));
  rest = bch3(rest, AlgebraElement<S>::basis(2, -a[2]));
  return GroupPoint<S>::from(a[1], a[2], rest[3], rest[4], rest[5]);
}

/// Inverse of exp_to_group: fold the defining five-factor word with bch3.
template <class S>
AlgebraElement<S> group_to_exp(const GroupPoint<S>& p) {
  AlgebraElement<S> a = AlgebraElement<S>::basis(5, p[5]);
  a = bch3(a, AlgebraElement<S>::basis(4, p[4]));
  a = bch3(a, AlgebraElement<S>::basis(3, p[3]));
  a = bch3(a, AlgebraElement<S>::basis(2, p[2]));
  a = bch3(a, AlgebraElement<S>::basis(1, p[1]));
  return a;
}

/// Group product, degree-3 polynomial law. Derived once from the bch3
/// pipeline (see mul_via_bch, kept as the test oracle) and frozen here.
template <class S>
GroupPoint<S> mul(const GroupPoint<S>& p, const GroupPoint<S>& q) {
  const S half = S(1) / S(2);
  GroupPoint<S> z;
  z[1] = p[1] + q[1];
  z[2] = p[2] + q[2];
  z[3] = p[3] + q[3] - p[1] * q[2];
  z[4] = p[4] + q[4] - p[1] * q[3] + half * p[1] * p[1] * q[2];
  z[5] = p[5] + q[5] - p[2] * q[3] + p[1] * p[2] * q[2] + half * p[1] * q[2] * q[2];
  return z;
}

/// Reference product through first-kind coordinates. Test oracle for mul.
template <class S>
GroupPoint<S> mul_via_bch(const GroupPoint<S>& p, const GroupPoint<S>& q) {
  return exp_to_group(bch3(group_to_exp(p), group_to_exp(q)));
}

/// Group inverse, exp(a)^{-1} = exp(-a) pushed through the coordinate change.
template <class S>
GroupPoint<S> inv(const GroupPoint<S>& p) {
  const S half = S(1) / S(2);
  GroupPoint<S> r;
  r[1] = -p[1];
  r[2] = -p[2];
  r[3] = -p[3] - p[1] * p[2];
  r[4] = -p[4] - p[1] * p[3] - half * p[1] * p[1] * p[2];
  r[5] = -p[5] - p[2] * p[3] - half * p[1] * p[2] * p[2];
  return r;
}

/// The left-invariant frame at p; column i holds the coordinates of X_i(p):
///   X1 = d1,  X2 = d2 - x1 d3 + (x1^2/2) d4 + x1 x2 d5,
///   X3 = d3 - x1 d4 - x2 d5,  X4 = d4,  X5 = d5.
template <class S>
struct Frame {
  std::array<std::array<S, 5>, 5> col{};
  const std::array<S, 5>& operator[](int i) const { return col[static_cast<size_t>(i - 1)]; }
};

template <class S>
Frame<S> frame(const GroupPoint<S>& p) {
  const S half = S(1) / S(2);
  Frame<S> f;
  f.col[0] = {S(1), S(0), S(0), S(0), S(0)};
  f.col[1] = {S(0), S(1), -p[1], half * p[1] * p[1], p[1] * p[2]};
  f.col[2] = {S(0), S(0), S(1), -p[1], -p[2]};
  f.col[3] = {S(0), S(0), S(0), S(1), S(0)};
  f.col[4] = {S(0), S(0), S(0), S(0), S(1)};
  return f;
}

/// Velocity of t -> p * exp(t(u1 X1 + u2 X2)) at t = 0.
template <class S>
std::array<S, 5> horizontal_velocity(const GroupPoint<S>& p, const S& u1, const S& u2) {
  const Frame<S> f = frame(p);
  std::array<S, 5> v;
  for (size_t i = 0; i < 5; ++i) v[i] = u1 * f.col[0][i] + u2 * f.col[1][i];
  return v;
}

}  // namespace cartan
