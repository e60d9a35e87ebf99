#pragma once

#include <array>
#include <vector>

#include "frpfrac/bspline.hpp"
#include "frpfrac/common.hpp"

namespace frpfrac {

/// Single-patch trivariate NURBS geometry.  Control points are indexed
/// A = i + n1 (j + n2 k), x-direction fastest.
struct NurbsPatch {
  std::array<int, 3> degree{2, 2, 2};
  std::array<std::vector<double>, 3> knots;
  std::array<int, 3> n_basis{0, 0, 0};   // basis functions per direction
  std::array<int, 3> n_elem{0, 0, 0};    // non-empty spans per direction
  std::array<std::vector<double>, 3> span_breaks;  // unique knot values, size n_elem+1
  std::vector<Vec3> control;
  std::vector<double> weight;

  int cp_count() const { return n_basis[0] * n_basis[1] * n_basis[2]; }
  int elem_count() const { return n_elem[0] * n_elem[1] * n_elem[2]; }
  int cp_index(int i, int j, int k) const { return i + n_basis[0] * (j + n_basis[1] * k); }

  std::array<int, 3> elem_multi(int e) const {
    return {e % n_elem[0], (e / n_elem[0]) % n_elem[1], e / (n_elem[0] * n_elem[1])};
  }

  void finalize() {
    for (int d = 0; d < 3; ++d) {
      n_basis[d] = int(knots[d].size()) - degree[d] - 1;
      span_breaks[d].clear();
      for (std::size_t i = 0; i + 1 < knots[d].size(); ++i)
        if (knots[d][i + 1] > knots[d][i]) {
          if (span_breaks[d].empty()) span_breaks[d].push_back(knots[d][i]);
          span_breaks[d].push_back(knots[d][i + 1]);
        }
      n_elem[d] = int(span_breaks[d].size()) - 1;
    }
    if (weight.empty()) weight.assign(cp_count(), 1.0);
    for (double w : weight)
      if (!(w > 0.0)) throw ConfigError("patch: NURBS weights must be positive");
    if (int(control.size()) != cp_count()) throw ConfigError("patch: control point count mismatch");
    for (int d = 0; d < 3; ++d) {
      const auto& kv = knots[d];
      for (int i = 0; i <= degree[d]; ++i)
        if (kv[i] != kv.front() || kv[kv.size() - 1 - i] != kv.back())
          throw ConfigError("patch: knot vectors must be open");
    }
  }
};

/// Axis-aligned box [0,L1]x[0,L2]x[0,L3] with open uniform knots and control
/// points on the Greville lattice, making the geometry map exactly affine.
inline NurbsPatch make_box_patch(const Vec3& lengths, const std::array<int, 3>& elems, int degree = 2) {
  NurbsPatch p;
  std::array<std::vector<double>, 3> grev;
  for (int d = 0; d < 3; ++d) {
    p.degree[d] = degree;
    p.knots[d] = open_uniform_knots(degree, elems[d], lengths[d]);
    grev[d] = greville_abscissae(p.knots[d], degree);
  }
  for (std::size_t k = 0; k < grev[2].size(); ++k)
    for (std::size_t j = 0; j < grev[1].size(); ++j)
      for (std::size_t i = 0; i < grev[0].size(); ++i)
        p.control.emplace_back(grev[0][i], grev[1][j], grev[2][k]);
  p.finalize();
  return p;
}

/// Basis data at one parametric point, in physical coordinates.
struct ShapeEval {
  Vec3 x = Vec3::Zero();
  Mat3 Jgeo = Mat3::Identity();  // dx/dxi
  double detJ = 1.0;
  std::vector<int> cps;          // active control points
  std::vector<double> R;
  std::vector<Vec3> dR;          // physical gradients
  std::vector<Mat3> d2R;         // physical Hessians
};

/// Rational shape functions with first and second physical derivatives,
/// including the second-derivative geometry correction.
inline ShapeEval nurbs_shape(const NurbsPatch& p, const Vec3& xi) {
  std::array<BasisDers, 3> B;
  for (int d = 0; d < 3; ++d) B[d] = bspline_basis(p.knots[d], p.degree[d], xi[d]);

  const int nA = (p.degree[0] + 1) * (p.degree[1] + 1) * (p.degree[2] + 1);
  ShapeEval ev;
  ev.cps.resize(nA);
  ev.R.resize(nA);
  ev.dR.assign(nA, Vec3::Zero());
  ev.d2R.assign(nA, Mat3::Zero());

  // weighted numerators N and their parametric derivatives
  std::vector<double> N(nA);
  std::vector<Vec3> dN(nA);
  std::vector<Mat3> d2N(nA);
  double W = 0.0;
  Vec3 dW = Vec3::Zero();
  Mat3 d2W = Mat3::Zero();
  int a = 0;
  for (int k = 0; k <= p.degree[2]; ++k)
    for (int j = 0; j <= p.degree[1]; ++j)
      for (int i = 0; i <= p.degree[0]; ++i, ++a) {
        const int gi = B[0].span - p.degree[0] + i;
        const int gj = B[1].span - p.degree[1] + j;
        const int gk = B[2].span - p.degree[2] + k;
        const int A = p.cp_index(gi, gj, gk);
        ev.cps[a] = A;
        const double w = p.weight[A];
        const double b0 = B[0].value[i], b1 = B[1].value[j], b2 = B[2].value[k];
        N[a] = w * b0 * b1 * b2;
        dN[a] = w * Vec3(B[0].d1[i] * b1 * b2, b0 * B[1].d1[j] * b2, b0 * b1 * B[2].d1[k]);
        Mat3 h;
        h(0, 0) = B[0].d2[i] * b1 * b2;
        h(1, 1) = b0 * B[1].d2[j] * b2;
        h(2, 2) = b0 * b1 * B[2].d2[k];
        h(0, 1) = h(1, 0) = B[0].d1[i] * B[1].d1[j] * b2;
        h(0, 2) = h(2, 0) = B[0].d1[i] * b1 * B[2].d1[k];
        h(1, 2) = h(2, 1) = b0 * B[1].d1[j] * B[2].d1[k];
        d2N[a] = w * h;
        W += N[a];
        dW += dN[a];
        d2W += d2N[a];
      }

  // rationalize: parametric derivatives of R = N / W
  std::vector<Vec3> dR_par(nA);
  std::vector<Mat3> d2R_par(nA);
  for (a = 0; a < nA; ++a) {
    ev.R[a] = N[a] / W;
    dR_par[a] = (dN[a] - ev.R[a] * dW) / W;
    d2R_par[a] =
        (d2N[a] - dR_par[a] * dW.transpose() - dW * dR_par[a].transpose() - ev.R[a] * d2W) / W;
  }

  // geometry and its parametric derivatives
  std::array<Mat3, 3> Tgeo;  // Tgeo[c](alpha,beta) = d2 x_c / dxi_a dxi_b
  for (auto& t : Tgeo) t.setZero();
  ev.Jgeo.setZero();
  for (a = 0; a < nA; ++a) {
    const Vec3& P = p.control[ev.cps[a]];
    ev.x += ev.R[a] * P;
    ev.Jgeo += P * dR_par[a].transpose();
    for (int c = 0; c < 3; ++c) Tgeo[c] += P[c] * d2R_par[a];
  }
  ev.detJ = ev.Jgeo.determinant();
  if (!(ev.detJ > 0.0)) throw DegenerateGeometry("nurbs_shape: singular geometry Jacobian");
  const Mat3 Jinv = ev.Jgeo.inverse();

  for (a = 0; a < nA; ++a) {
    ev.dR[a] = Jinv.transpose() * dR_par[a];
    Mat3 corr = Mat3::Zero();
    for (int c = 0; c < 3; ++c) corr += ev.dR[a][c] * Tgeo[c];
    ev.d2R[a] = Jinv.transpose() * (d2R_par[a] - corr) * Jinv;
  }
  return ev;
}

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

struct QuadPoint {
  Vec3 xi;
  double w;  // parametric weight (product of mapped 1D weights)
};

/// (degree+1) Gauss points per direction on one element.
inline std::vector<QuadPoint> element_quadrature(const NurbsPatch& p, int e) {
  const auto em = p.elem_multi(e);
  std::array<GaussRule, 3> g;
  std::array<double, 3> lo, hi;
  for (int d = 0; d < 3; ++d) {
    g[d] = gauss_rule(p.degree[d] + 1);
    lo[d] = p.span_breaks[d][em[d]];
    hi[d] = p.span_breaks[d][em[d] + 1];
  }
  std::vector<QuadPoint> pts;
  for (std::size_t c = 0; c < g[2].xi.size(); ++c)
    for (std::size_t b = 0; b < g[1].xi.size(); ++b)
      for (std::size_t a = 0; a < g[0].xi.size(); ++a) {
        QuadPoint q;
        q.xi = Vec3(0.5 * ((hi[0] - lo[0]) * g[0].xi[a] + hi[0] + lo[0]),
                    0.5 * ((hi[1] - lo[1]) * g[1].xi[b] + hi[1] + lo[1]),
                    0.5 * ((hi[2] - lo[2]) * g[2].xi[c] + hi[2] + lo[2]));
        q.w = 0.125 * (hi[0] - lo[0]) * (hi[1] - lo[1]) * (hi[2] - lo[2]) * g[0].w[a] * g[1].w[b] * g[2].w[c];
        pts.push_back(q);
      }
  return pts;
}

// ---------------------------------------------------------------------------
// Companion linear mesh
// ---------------------------------------------------------------------------

/// One trilinear element per NURBS element; nodes at the physical images of
/// the element corners, shared nodes deduplicated through the corner lattice.
struct LinearCompanionMesh {
  std::array<int, 3> n_node{0, 0, 0};  // lattice extents (n_elem + 1)
  std::vector<Vec3> node;
  std::vector<std::array<int, 8>> conn;  // per NURBS element, lattice corner nodes

  int node_count() const { return int(node.size()); }
  int node_index(int i, int j, int k) const { return i + n_node[0] * (j + n_node[1] * k); }
};

inline LinearCompanionMesh build_companion_mesh(const NurbsPatch& p) {
  LinearCompanionMesh m;
  for (int d = 0; d < 3; ++d) m.n_node[d] = p.n_elem[d] + 1;
  m.node.resize(m.n_node[0] * m.n_node[1] * m.n_node[2]);
  for (int k = 0; k < m.n_node[2]; ++k)
    for (int j = 0; j < m.n_node[1]; ++j)
      for (int i = 0; i < m.n_node[0]; ++i) {
        const Vec3 xi(p.span_breaks[0][i], p.span_breaks[1][j], p.span_breaks[2][k]);
        m.node[m.node_index(i, j, k)] = nurbs_shape(p, xi).x;
      }
  m.conn.resize(p.elem_count());
  for (int e = 0; e < p.elem_count(); ++e) {
    const auto em = p.elem_multi(e);
    int c = 0;
    for (int k = 0; k < 2; ++k)
      for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 2; ++i) m.conn[e][c++] = m.node_index(em[0] + i, em[1] + j, em[2] + k);
  }
  return m;
}

/// Trilinear companion shape functions at a parametric point of element e,
/// with physical gradients through the patch geometry Jacobian.
struct CompanionEval {
  std::array<int, 8> nodes;
  std::array<double, 8> N;
  std::array<Vec3, 8> dN;
};

inline CompanionEval companion_shape(const NurbsPatch& p, const LinearCompanionMesh& m, int e, const Vec3& xi,
                                     const Mat3& Jgeo) {
  const auto em = p.elem_multi(e);
  std::array<double, 3> lo, hi, t;
  for (int d = 0; d < 3; ++d) {
    lo[d] = p.span_breaks[d][em[d]];
    hi[d] = p.span_breaks[d][em[d] + 1];
    t[d] = (xi[d] - lo[d]) / (hi[d] - lo[d]);
  }
  CompanionEval ce;
  ce.nodes = m.conn[e];
  const Mat3 JinvT = Jgeo.inverse().transpose();
  int c = 0;
  for (int k = 0; k < 2; ++k)
    for (int j = 0; j < 2; ++j)
      for (int i = 0; i < 2; ++i, ++c) {
        const double fi = i ? t[0] : 1.0 - t[0];
        const double fj = j ? t[1] : 1.0 - t[1];
        const double fk = k ? t[2] : 1.0 - t[2];
        ce.N[c] = fi * fj * fk;
        const Vec3 dpar((i ? 1.0 : -1.0) / (hi[0] - lo[0]) * fj * fk,
                        (j ? 1.0 : -1.0) / (hi[1] - lo[1]) * fi * fk,
                        (k ? 1.0 : -1.0) / (hi[2] - lo[2]) * fi * fj);
        ce.dN[c] = JinvT * dpar;
      }
  return ce;
}

// ---------------------------------------------------------------------------
// Boundary faces
// ---------------------------------------------------------------------------

struct FaceQuadPoint {
  Vec3 xi;
  double dA;  // physical area weight
  Vec3 normal;
};

/// Quadrature over a whole boundary face of the patch (dir in {0,1,2},
/// side 0 = parametric minimum, 1 = maximum).
inline std::vector<FaceQuadPoint> face_quadrature(const NurbsPatch& p, int dir, int side) {
  const int u = (dir + 1) % 3, v = (dir + 2) % 3;
  const double xi_face = side ? p.span_breaks[dir].back() : p.span_breaks[dir].front();
  GaussRule gu = gauss_rule(p.degree[u] + 1), gv = gauss_rule(p.degree[v] + 1);
  const Vec3 xi_in = 0.5 * Vec3(p.span_breaks[0].front() + p.span_breaks[0].back(),
                                p.span_breaks[1].front() + p.span_breaks[1].back(),
                                p.span_breaks[2].front() + p.span_breaks[2].back());
  const Vec3 x_in = nurbs_shape(p, xi_in).x;
  std::vector<FaceQuadPoint> pts;
  for (int eu = 0; eu < p.n_elem[u]; ++eu)
    for (int ev = 0; ev < p.n_elem[v]; ++ev) {
      const double ulo = p.span_breaks[u][eu], uhi = p.span_breaks[u][eu + 1];
      const double vlo = p.span_breaks[v][ev], vhi = p.span_breaks[v][ev + 1];
      for (std::size_t a = 0; a < gu.xi.size(); ++a)
        for (std::size_t b = 0; b < gv.xi.size(); ++b) {
          FaceQuadPoint q;
          q.xi[dir] = xi_face;
          q.xi[u] = 0.5 * ((uhi - ulo) * gu.xi[a] + uhi + ulo);
          q.xi[v] = 0.5 * ((vhi - vlo) * gv.xi[b] + vhi + vlo);
          ShapeEval ev_shape = nurbs_shape(p, q.xi);
          const Vec3 tu = ev_shape.Jgeo.col(u), tv = ev_shape.Jgeo.col(v);
          Vec3 nrm = tu.cross(tv);
          const double area = nrm.norm();
          q.dA = 0.25 * (uhi - ulo) * (vhi - vlo) * gu.w[a] * gv.w[b] * area;
          nrm /= area;
          if (nrm.dot(ev_shape.x - x_in) < 0.0) nrm = -nrm;  // outward
          q.normal = nrm;
          pts.push_back(q);
        }
    }
  return pts;
}

}  // namespace frpfrac
