#include <catch2/catch_amalgamated.hpp>

#include "frpfrac/patch.hpp"

using namespace frpfrac;

namespace {

// plain recursive Cox-de Boor evaluation, independent of the table-based code
double cdb(const std::vector<double>& U, int i, int p, double xi) {
  if (p == 0) {
    const bool closes_end = (U[i + 1] == U.back()) && xi == U.back();
    return ((xi >= U[i] && xi < U[i + 1]) || closes_end) ? 1.0 : 0.0;
  }
  double a = 0.0, b = 0.0;
  if (U[i + p] > U[i]) a = (xi - U[i]) / (U[i + p] - U[i]) * cdb(U, i, p - 1, xi);
  if (U[i + p + 1] > U[i + 1]) b = (U[i + p + 1] - xi) / (U[i + p + 1] - U[i + 1]) * cdb(U, i + 1, p - 1, xi);
  return a + b;
}

double cdb_d1(const std::vector<double>& U, int i, int p, double xi) {
  double a = 0.0, b = 0.0;
  if (U[i + p] > U[i]) a = p / (U[i + p] - U[i]) * cdb(U, i, p - 1, xi);
  if (U[i + p + 1] > U[i + 1]) b = p / (U[i + p + 1] - U[i + 1]) * cdb(U, i + 1, p - 1, xi);
  return a - b;
}

double cdb_d2(const std::vector<double>& U, int i, int p, double xi) {
  double a = 0.0, b = 0.0;
  if (U[i + p] > U[i]) a = p / (U[i + p] - U[i]) * cdb_d1(U, i, p - 1, xi);
  if (U[i + p + 1] > U[i + 1]) b = p / (U[i + p + 1] - U[i + 1]) * cdb_d1(U, i + 1, p - 1, xi);
  return a - b;
}

}  // namespace

TEST_CASE("bspline basis: Bernstein case and the independent recursion") {
  std::vector<double> bez = {0, 0, 0, 1, 1, 1};
  auto b = bspline_basis(bez, 2, 0.5);
  CHECK(b.value[0] == Catch::Approx(0.25));
  CHECK(b.value[1] == Catch::Approx(0.5));
  CHECK(b.value[2] == Catch::Approx(0.25));

  std::vector<double> U = {0, 0, 0, 1, 2, 3, 3, 3};
  for (double xi : {0.2, 0.999, 1.0, 1.5, 2.7, 3.0}) {
    auto d = bspline_basis(U, 2, xi);
    for (int k = 0; k <= 2; ++k) {
      const int i = d.span - 2 + k;
      CHECK(d.value[k] == Catch::Approx(cdb(U, i, 2, xi)).margin(1e-13));
      CHECK(d.d1[k] == Catch::Approx(cdb_d1(U, i, 2, xi)).margin(1e-12));
      CHECK(d.d2[k] == Catch::Approx(cdb_d2(U, i, 2, xi)).margin(1e-12));
    }
  }
}

TEST_CASE("bspline basis: partition of unity and derivative sums at random points") {
  Rng rng(1);
  std::vector<double> U = open_uniform_knots(2, 7, 4.2);
  for (int k = 0; k < 10000; ++k) {
    const double xi = rng.uniform(0.0, 4.2);
    auto d = bspline_basis(U, 2, xi);
    double s = 0, s1 = 0, s2 = 0;
    for (int j = 0; j <= 2; ++j) {
      s += d.value[j];
      s1 += d.d1[j];
      s2 += d.d2[j];
    }
    CHECK(std::abs(s - 1.0) < 1e-12);
    CHECK(std::abs(s1) < 1e-12);
    CHECK(std::abs(s2) < 1e-12);
  }
}

TEST_CASE("nurbs shape: unit weights reduce to tensor-product B-splines") {
  auto p = make_box_patch(Vec3(2.0, 1.0, 0.5), {3, 2, 1});
  Rng rng(21);
  for (int k = 0; k < 50; ++k) {
    Vec3 xi(rng.uniform(0, 2.0), rng.uniform(0, 1.0), rng.uniform(0, 0.5));
    auto ev = nurbs_shape(p, xi);
    std::array<BasisDers, 3> B = {bspline_basis(p.knots[0], 2, xi[0]), bspline_basis(p.knots[1], 2, xi[1]),
                                  bspline_basis(p.knots[2], 2, xi[2])};
    int a = 0;
    double sum = 0.0;
    for (int kk = 0; kk <= 2; ++kk)
      for (int jj = 0; jj <= 2; ++jj)
        for (int ii = 0; ii <= 2; ++ii, ++a) {
          CHECK(ev.R[a] == Catch::Approx(B[0].value[ii] * B[1].value[jj] * B[2].value[kk]).margin(1e-13));
          sum += ev.R[a];
        }
    CHECK(sum == Catch::Approx(1.0).margin(1e-12));
    CHECK((ev.x - xi).norm() < 1e-12);  // Greville lattice: identity geometry
  }
}

TEST_CASE("nurbs shape: C1 continuity across every interior knot plane") {
  auto p = make_box_patch(Vec3(10.0, 1.0, 0.5), {8, 2, 1});
  Rng rng(5);
  const double eps = 1e-12;
  for (int d = 0; d < 3; ++d) {
    for (std::size_t b = 1; b + 1 < p.span_breaks[d].size(); ++b) {
      const double kv = p.span_breaks[d][b];
      for (int trial = 0; trial < 5; ++trial) {
        Vec3 xi(rng.uniform(0.1, 9.9), rng.uniform(0.05, 0.95), rng.uniform(0.05, 0.45));
        Vec3 xm = xi, xp = xi;
        xm[d] = kv - eps;
        xp[d] = kv + eps;
        auto em = nurbs_shape(p, xm), ep = nurbs_shape(p, xp);
        // compare the interpolated field of a smooth nodal vector
        double fm = 0, fp = 0;
        Vec3 gm = Vec3::Zero(), gp = Vec3::Zero();
        for (std::size_t a = 0; a < em.cps.size(); ++a) {
          const Vec3 P = p.control[em.cps[a]];
          const double val = std::sin(0.4 * P[0]) + 0.2 * P[1] * P[2];
          fm += em.R[a] * val;
          gm += em.dR[a] * val;
        }
        for (std::size_t a = 0; a < ep.cps.size(); ++a) {
          const Vec3 P = p.control[ep.cps[a]];
          const double val = std::sin(0.4 * P[0]) + 0.2 * P[1] * P[2];
          fp += ep.R[a] * val;
          gp += ep.dR[a] * val;
        }
        CHECK(fm == Catch::Approx(fp).margin(1e-10));
        CHECK((gm - gp).norm() < 1e-10);
      }
    }
  }
}

TEST_CASE("nurbs shape: linear field reproduction gives exact gradient and zero Hessian") {
  auto p = make_box_patch(Vec3(10.0, 1.0, 0.5), {8, 2, 1});
  Mat3 A;
  A << 0.2, -0.4, 0.1, 0.7, 1.1, -0.3, 0.05, 0.2, 0.9;
  const Vec3 b(1.0, -2.0, 0.5);
  Rng rng(9);
  for (int k = 0; k < 40; ++k) {
    Vec3 xi(rng.uniform(0, 10.0), rng.uniform(0, 1.0), rng.uniform(0, 0.5));
    auto ev = nurbs_shape(p, xi);
    Mat3 grad = Mat3::Zero();
    Vec3 val = Vec3::Zero();
    double hess_norm = 0.0;
    for (std::size_t a = 0; a < ev.cps.size(); ++a) {
      const Vec3 q = A * p.control[ev.cps[a]] + b;
      val += ev.R[a] * q;
      grad += q * ev.dR[a].transpose();
      hess_norm += ev.d2R[a].norm();  // sums to zero only in combination
    }
    CHECK((val - (A * xi + b)).norm() < 1e-10);
    CHECK((grad - A).norm() < 1e-10);
    Mat3 hess_field = Mat3::Zero();
    for (std::size_t a = 0; a < ev.cps.size(); ++a)
      hess_field += (A * p.control[ev.cps[a]] + b)[0] * ev.d2R[a];
    CHECK(hess_field.norm() < 1e-10);
  }
}

TEST_CASE("quadrature: element counts, volumes and exact monomials") {
  auto cube = make_box_patch(Vec3(1, 1, 1), {1, 1, 1});
  auto q = element_quadrature(cube, 0);
  CHECK(q.size() == 27);
  double vol = 0.0;
  for (auto& pt : q) vol += pt.w * nurbs_shape(cube, pt.xi).detJ;
  CHECK(vol == Catch::Approx(1.0).epsilon(1e-12));

  auto plate = make_box_patch(Vec3(10.0, 1.0, 0.5), {8, 2, 1});
  vol = 0.0;
  for (int e = 0; e < plate.elem_count(); ++e)
    for (auto& pt : element_quadrature(plate, e)) vol += pt.w * nurbs_shape(plate, pt.xi).detJ;
  CHECK(vol == Catch::Approx(5.0).epsilon(1e-12));

  // int over the box of x^4 y^2 z: symbolic value L1^5/5 * L2^3/3 * L3^2/2
  double integral = 0.0;
  for (int e = 0; e < plate.elem_count(); ++e)
    for (auto& pt : element_quadrature(plate, e)) {
      auto ev = nurbs_shape(plate, pt.xi);
      integral += pt.w * ev.detJ * std::pow(ev.x[0], 4) * ev.x[1] * ev.x[1] * ev.x[2];
    }
  const double symbolic = std::pow(10.0, 5) / 5.0 * std::pow(1.0, 3) / 3.0 * std::pow(0.5, 2) / 2.0;
  CHECK(integral == Catch::Approx(symbolic).epsilon(1e-12));
}

TEST_CASE("companion mesh: lattice counts and node placement") {
  auto plate = make_box_patch(Vec3(10.0, 1.0, 0.5), {8, 2, 1});
  auto m = build_companion_mesh(plate);
  CHECK(m.node_count() == 54);  // 9 x 3 x 2

  auto single = make_box_patch(Vec3(1, 1, 1), {1, 1, 1});
  auto ms = build_companion_mesh(single);
  CHECK(ms.node_count() == 8);
  CHECK(ms.conn.size() == 1);

  // nodes coincide with the geometry evaluated at corner parameters
  for (int k = 0; k < m.n_node[2]; ++k)
    for (int j = 0; j < m.n_node[1]; ++j)
      for (int i = 0; i < m.n_node[0]; ++i) {
        const Vec3 xi(plate.span_breaks[0][i], plate.span_breaks[1][j], plate.span_breaks[2][k]);
        CHECK((m.node[m.node_index(i, j, k)] - nurbs_shape(plate, xi).x).norm() < 1e-12);
      }

  // companion shape functions: partition of unity and linear reproduction
  Rng rng(3);
  for (int e : {0, 5, 15}) {
    for (auto& pt : element_quadrature(plate, e)) {
      auto ev = nurbs_shape(plate, pt.xi);
      auto ce = companion_shape(plate, m, e, pt.xi, ev.Jgeo);
      double s = 0.0;
      Vec3 x = Vec3::Zero(), gsum = Vec3::Zero();
      for (int c = 0; c < 8; ++c) {
        s += ce.N[c];
        x += ce.N[c] * m.node[ce.nodes[c]];
        gsum += ce.dN[c];
      }
      CHECK(s == Catch::Approx(1.0).margin(1e-13));
      CHECK((x - ev.x).norm() < 1e-12);
      CHECK(gsum.norm() < 1e-12);
    }
  }
}

TEST_CASE("face quadrature: areas and outward normals of the plate") {
  auto plate = make_box_patch(Vec3(10.0, 1.0, 0.5), {8, 2, 1});
  const double expect_area[3] = {0.5, 5.0, 10.0};
  for (int dir = 0; dir < 3; ++dir)
    for (int side = 0; side < 2; ++side) {
      auto pts = face_quadrature(plate, dir, side);
      double area = 0.0;
      for (auto& q : pts) {
        area += q.dA;
        Vec3 expected = Vec3::Zero();
        expected[dir] = side ? 1.0 : -1.0;
        CHECK((q.normal - expected).norm() < 1e-12);
      }
      CHECK(area == Catch::Approx(expect_area[dir]).epsilon(1e-12));
    }
}

TEST_CASE("degenerate geometry is rejected") {
  auto p = make_box_patch(Vec3(1, 1, 1), {1, 1, 1});
  for (auto& c : p.control) c[0] = 0.0;  // collapse onto a plane
  CHECK_THROWS_AS(nurbs_shape(p, Vec3(0.5, 0.5, 0.5)), DegenerateGeometry);
}
