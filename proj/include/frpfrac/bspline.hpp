#pragma once

#include <vector>

#include "frpfrac/common.hpp"

namespace frpfrac {

/// Knot span containing xi; the right end of the parametric domain is closed.
inline int find_span(const std::vector<double>& knots, int degree, double xi) {
  const int n = int(knots.size()) - degree - 2;  // highest basis index
  if (xi >= knots[n + 1]) return n;
  if (xi <= knots[degree]) return degree;
  int lo = degree, hi = n + 1;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    (xi < knots[mid] ? hi : lo) = mid;
  }
  return lo;
}

struct BasisDers {
  int span = 0;
  std::vector<double> value, d1, d2;  // the degree+1 active functions
};

/// Values and first two derivatives of the active B-splines at xi
/// (Cox-de Boor recursion in the triangular-table form).
inline BasisDers bspline_basis(const std::vector<double>& knots, int degree, double xi) {
  const int p = degree;
  if (xi < knots.front() - 1e-12 || xi > knots.back() + 1e-12)
    throw InvalidState("bspline_basis: parameter outside the knot range");
  BasisDers out;
  const int span = find_span(knots, p, xi);
  out.span = span;
  out.value.assign(p + 1, 0.0);
  out.d1.assign(p + 1, 0.0);
  out.d2.assign(p + 1, 0.0);

  std::vector<std::vector<double>> ndu(p + 1, std::vector<double>(p + 1, 0.0));
  std::vector<double> left(p + 1), right(p + 1);
  ndu[0][0] = 1.0;
  for (int j = 1; j <= p; ++j) {
    left[j] = xi - knots[span + 1 - j];
    right[j] = knots[span + j] - xi;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      ndu[j][r] = right[r + 1] + left[j - r];
      const double temp = ndu[r][j - 1] / ndu[j][r];
      ndu[r][j] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    ndu[j][j] = saved;
  }
  for (int j = 0; j <= p; ++j) out.value[j] = ndu[j][p];

  const int max_der = std::min(2, p);
  std::vector<std::vector<double>> ders(max_der + 1, std::vector<double>(p + 1, 0.0));
  std::vector<std::vector<double>> a(2, std::vector<double>(p + 1, 0.0));
  for (int r = 0; r <= p; ++r) {
    int s1 = 0, s2 = 1;
    a[0][0] = 1.0;
    for (int k = 1; k <= max_der; ++k) {
      double d = 0.0;
      const int rk = r - k, pk = p - k;
      if (r >= k) {
        a[s2][0] = a[s1][0] / ndu[pk + 1][rk];
        d = a[s2][0] * ndu[rk][pk];
      }
      const int j1 = (rk >= -1) ? 1 : -rk;
      const int j2 = (r - 1 <= pk) ? k - 1 : p - r;
      for (int j = j1; j <= j2; ++j) {
        a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][rk + j];
        d += a[s2][j] * ndu[rk + j][pk];
      }
      if (r <= pk) {
        a[s2][k] = -a[s1][k - 1] / ndu[pk + 1][r];
        d += a[s2][k] * ndu[r][pk];
      }
      ders[k][r] = d;
      std::swap(s1, s2);
    }
  }
  double factor = p;
  for (int j = 0; j <= p; ++j) out.d1[j] = ders.size() > 1 ? ders[1][j] * factor : 0.0;
  factor *= (p - 1);
  if (max_der >= 2)
    for (int j = 0; j <= p; ++j) out.d2[j] = ders[2][j] * factor;
  return out;
}

/// Greville abscissae (knot averages); B-splines reproduce linear functions
/// through them, so placing control points at the Greville lattice makes the
/// geometry map exactly affine.
inline std::vector<double> greville_abscissae(const std::vector<double>& knots, int degree) {
  const int n = int(knots.size()) - degree - 1;
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int k = 1; k <= degree; ++k) s += knots[i + k];
    g[i] = s / degree;
  }
  return g;
}

/// Open uniform knot vector on [0, length] with n_elem non-empty spans.
inline std::vector<double> open_uniform_knots(int degree, int n_elem, double length) {
  std::vector<double> k;
  for (int i = 0; i <= degree; ++i) k.push_back(0.0);
  for (int i = 1; i < n_elem; ++i) k.push_back(length * i / n_elem);
  for (int i = 0; i <= degree; ++i) k.push_back(length);
  return k;
}

struct GaussRule {
  std::vector<double> xi, w;  // on [-1, 1]
};

inline GaussRule gauss_rule(int n) {
  GaussRule g;
  switch (n) {
    case 1:
      g.xi = {0.0};
      g.w = {2.0};
      break;
    case 2:
      g.xi = {-0.5773502691896257, 0.5773502691896257};
      g.w = {1.0, 1.0};
      break;
    case 3:
      g.xi = {-0.7745966692414834, 0.0, 0.7745966692414834};
      g.w = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
      break;
    case 4:
      g.xi = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563, 0.8611363115940526};
      g.w = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461, 0.3478548451374538};
      break;
    case 5:
      g.xi = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831, 0.9061798459386640};
      g.w = {0.2369268850561891, 0.4786286704993665, 128.0 / 225.0, 0.4786286704993665, 0.2369268850561891};
      break;
    default:
      throw InvalidState("gauss_rule: unsupported point count");
  }
  return g;
}

}  // namespace frpfrac
