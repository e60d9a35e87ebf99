#pragma once

#include <array>
#include <cmath>

namespace frpfrac {

/// First-order forward-mode dual number with N derivative slots.  Used to
/// obtain exact gradients of scalar constitutive energies with respect to a
/// small, fixed set of inputs (deformation gradient components, fiber
/// direction gradients, phase-field values).
template <int N>
struct Dual {
  double v = 0.0;
  std::array<double, N> d{};

  Dual() = default;
  Dual(double value) : v(value) {}  // NOLINT: implicit from constants is intended

  static Dual seed(double value, int slot) {
    Dual r(value);
    r.d[slot] = 1.0;
    return r;
  }

  Dual operator-() const {
    Dual r(-v);
    for (int i = 0; i < N; ++i) r.d[i] = -d[i];
    return r;
  }

  Dual& operator+=(const Dual& o) {
    v += o.v;
    for (int i = 0; i < N; ++i) d[i] += o.d[i];
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    v -= o.v;
    for (int i = 0; i < N; ++i) d[i] -= o.d[i];
    return *this;
  }
  Dual& operator*=(const Dual& o) {
    for (int i = 0; i < N; ++i) d[i] = d[i] * o.v + v * o.d[i];
    v *= o.v;
    return *this;
  }

  friend Dual operator+(Dual a, const Dual& b) { return a += b; }
  friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
  friend Dual operator*(Dual a, const Dual& b) { return a *= b; }

  friend Dual operator*(double c, Dual a) {
    a.v *= c;
    for (int i = 0; i < N; ++i) a.d[i] *= c;
    return a;
  }
  friend Dual operator*(Dual a, double c) { return c * a; }

  friend Dual operator/(const Dual& a, const Dual& b) {
    Dual r(a.v / b.v);
    double ib = 1.0 / b.v;
    for (int i = 0; i < N; ++i) r.d[i] = (a.d[i] - r.v * b.d[i]) * ib;
    return r;
  }
  friend Dual operator/(Dual a, double c) { return a * (1.0 / c); }

  friend bool operator>(const Dual& a, double c) { return a.v > c; }
  friend bool operator<(const Dual& a, double c) { return a.v < c; }
  friend bool operator>=(const Dual& a, double c) { return a.v >= c; }
  friend bool operator<=(const Dual& a, double c) { return a.v <= c; }
};

template <int N>
Dual<N> chain(double f, double dfdx, const Dual<N>& x) {
  Dual<N> r(f);
  for (int i = 0; i < N; ++i) r.d[i] = dfdx * x.d[i];
  return r;
}

template <int N>
Dual<N> sqrt(const Dual<N>& x) {
  double s = std::sqrt(x.v);
  return chain(s, 0.5 / s, x);
}
template <int N>
Dual<N> log(const Dual<N>& x) {
  return chain(std::log(x.v), 1.0 / x.v, x);
}
template <int N>
Dual<N> exp(const Dual<N>& x) {
  double e = std::exp(x.v);
  return chain(e, e, x);
}
template <int N>
Dual<N> pow(const Dual<N>& x, double p) {
  double f = std::pow(x.v, p);
  return chain(f, p * std::pow(x.v, p - 1.0), x);
}
template <int N>
Dual<N> acos(const Dual<N>& x) {
  return chain(std::acos(x.v), -1.0 / std::sqrt(1.0 - x.v * x.v), x);
}
template <int N>
Dual<N> tan(const Dual<N>& x) {
  double t = std::tan(x.v);
  return chain(t, 1.0 + t * t, x);
}
template <int N>
Dual<N> cosh(const Dual<N>& x) {
  return chain(std::cosh(x.v), std::sinh(x.v), x);
}
template <int N>
Dual<N> sinh(const Dual<N>& x) {
  return chain(std::sinh(x.v), std::cosh(x.v), x);
}

// value extraction usable in generic code (double or Dual)
inline double value_of(double x) { return x; }
template <int N>
double value_of(const Dual<N>& x) {
  return x.v;
}

}  // namespace frpfrac
