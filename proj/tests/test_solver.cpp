#include <catch2/catch_amalgamated.hpp>

#include "frpfrac/solver.hpp"

using namespace frpfrac;

namespace {

PhysicsParams elastic_matrix_only() {
  PhysicsParams p;
  p.matrix.mu = {1630.4};
  p.matrix.alpha_exp = {2.0};
  p.fiber.wL = p.fiber.wM = 0.0;
  p.plasticity_on = false;
  p.fracture_on = false;
  p.thermal_coupled = false;
  return p;
}

/// constrain every control point of one parametric face of the box
void fix_face(const NurbsPatch& patch, FieldDofs& dofs, int dir, int side, int comp, double base = 0.0,
              double rate = 0.0) {
  const int idx_max = patch.n_basis[dir] - 1;
  for (int k = 0; k < patch.n_basis[2]; ++k)
    for (int j = 0; j < patch.n_basis[1]; ++j)
      for (int i = 0; i < patch.n_basis[0]; ++i) {
        const int lat[3] = {i, j, k};
        if (lat[dir] != (side ? idx_max : 0)) continue;
        dofs.bcs.push_back({patch.cp_index(i, j, k), comp, base, rate});
      }
}

bool on_boundary(const NurbsPatch& patch, int cp) {
  const int i = cp % patch.n_basis[0];
  const int j = (cp / patch.n_basis[0]) % patch.n_basis[1];
  const int k = cp / (patch.n_basis[0] * patch.n_basis[1]);
  return i == 0 || i == patch.n_basis[0] - 1 || j == 0 || j == patch.n_basis[1] - 1 || k == 0 ||
         k == patch.n_basis[2] - 1;
}

}  // namespace

TEST_CASE("mechanics: zero displacement and zero loads give a zero residual") {
  auto patch = make_box_patch(Vec3(2, 1, 1), {2, 2, 1});
  MultifieldSolver solver(patch, elastic_matrix_only(), DofLayout{}, SolverOptions{});
  Eigen::VectorXd R = solver.mechanical_residual(0.1);
  CHECK(R.lpNorm<Eigen::Infinity>() < 1e-10);
}

TEST_CASE("mechanics: linear displacement field passes the patch test") {
  auto patch = make_box_patch(Vec3(2, 1, 1), {3, 2, 2});
  MultifieldSolver solver(patch, elastic_matrix_only(), DofLayout{}, SolverOptions{});
  Mat3 A;
  A << 1.05, 0.02, 0.0, 0.01, 0.98, 0.03, 0.0, -0.02, 1.01;
  auto& u = solver.mutable_displacement();
  for (int cp = 0; cp < patch.cp_count(); ++cp) {
    const Vec3 d = (A - Mat3::Identity()) * patch.control[cp];
    for (int i = 0; i < 3; ++i) u[3 * cp + i] = d[i];
  }
  Eigen::VectorXd R = solver.mechanical_residual(0.1);
  const double scale = 1630.4 * 2.0;  // stiffness x area
  for (int cp = 0; cp < patch.cp_count(); ++cp)
    if (!on_boundary(patch, cp))
      for (int i = 0; i < 3; ++i) CHECK(std::abs(R[3 * cp + i]) < 1e-8 * scale);
}

TEST_CASE("mechanics: single-element uniaxial stretch reaction matches the point stress") {
  auto patch = make_box_patch(Vec3(1, 1, 1), {1, 1, 1});
  auto phys = elastic_matrix_only();
  MultifieldSolver solver(patch, phys, DofLayout{}, SolverOptions{});
  const double lam = 1.08;
  auto& u = solver.mutable_displacement();
  for (int cp = 0; cp < patch.cp_count(); ++cp) u[3 * cp + 0] = (lam - 1.0) * patch.control[cp][0];
  Eigen::VectorXd R = solver.mechanical_residual(0.1);

  // single constitutive evaluation at the homogeneous state
  auto st = make_deformation_state(Vec3(lam, 1.0, 1.0).asDiagonal());
  auto es = elastic_split(st, Mat3::Identity(), 0.0, phys.fracture.a_g);
  auto [dev, vol] = matrix_kirchhoff_stress(es, phys.matrix.theta0, phys.matrix);
  const Mat3 P = (dev + vol) * st.F.inverse().transpose();

  double force = 0.0;
  for (int k = 0; k < patch.n_basis[2]; ++k)
    for (int j = 0; j < patch.n_basis[1]; ++j)
      force += R[3 * patch.cp_index(patch.n_basis[0] - 1, j, k) + 0];
  CHECK(force == Catch::Approx(P(0, 0) * 1.0).epsilon(1e-10));
  // and the total over all control points vanishes (pure internal state)
  Vec3 total = Vec3::Zero();
  for (int cp = 0; cp < patch.cp_count(); ++cp)
    for (int i = 0; i < 3; ++i) total[i] += R[3 * cp + i];
  CHECK(total.norm() < 1e-10 * std::abs(P(0, 0)));
}

TEST_CASE("staggered step: zero load increment converges immediately and leaves the state") {
  auto patch = make_box_patch(Vec3(2, 1, 1), {2, 1, 1});
  DofLayout layout;
  fix_face(patch, layout.disp, 0, 0, 0);
  fix_face(patch, layout.disp, 0, 0, 1);
  fix_face(patch, layout.disp, 0, 0, 2);
  MultifieldSolver solver(patch, elastic_matrix_only(), layout, SolverOptions{});
  auto rec = solver.step(0.1);
  CHECK(rec.mech_iters <= 1);
  CHECK(solver.displacement().lpNorm<Eigen::Infinity>() < 1e-12);
  CHECK(rec.reaction.norm() < 1e-10);
}

TEST_CASE("staggered step: elastic tension ramp, equilibrium and reactions") {
  auto patch = make_box_patch(Vec3(4, 1, 1), {3, 1, 1});
  DofLayout layout;
  for (int c = 0; c < 3; ++c) fix_face(patch, layout.disp, 0, 0, c);
  fix_face(patch, layout.disp, 0, 1, 0, 0.0, 0.05);  // ramp u_x = 0.05 t
  fix_face(patch, layout.disp, 0, 1, 1);
  fix_face(patch, layout.disp, 0, 1, 2);
  const int last = patch.n_basis[0] - 1;
  for (int k = 0; k < patch.n_basis[2]; ++k)
    for (int j = 0; j < patch.n_basis[1]; ++j)
      layout.reaction_dofs.push_back({patch.cp_index(last, j, k), 0});

  MultifieldSolver solver(patch, elastic_matrix_only(), layout, SolverOptions{});
  StaggeredStep rec;
  for (int s = 0; s < 4; ++s) rec = solver.step(1.0);
  CHECK(rec.reaction[0] > 0.0);
  CHECK(rec.residual_sum.norm() <= 1e-8 * std::max(1.0, rec.load_scale));
  // quadratic-ish Newton convergence on the smooth elastic step
  CHECK(rec.newton_ratio < 1e3);
}

namespace {

PhysicsParams table1_full() {
  PhysicsParams p;
  p.matrix.mu = {1630.0};
  p.matrix.alpha_exp = {2.0};
  p.fiber.a = 79000.0;
  p.fiber.b = 0.0;
  p.fiber.c_par = p.fiber.c_perp = 16.46;
  p.fiber.wL = p.fiber.wM = (1.0 - p.matrix.zeta) / 2.0;
  p.plasticity_on = true;
  p.fracture_on = true;
  p.thermal_coupled = false;
  return p;
}

/// constrain every control point whose lattice x-index lies in [i0, i1]
void fix_slab(const NurbsPatch& patch, FieldDofs& dofs, int i0, int i1, int comp, double base, double rate) {
  for (int k = 0; k < patch.n_basis[2]; ++k)
    for (int j = 0; j < patch.n_basis[1]; ++j)
      for (int i = i0; i <= i1; ++i) dofs.bcs.push_back({patch.cp_index(i, j, k), comp, base, rate});
}

}  // namespace

TEST_CASE("gradient Dirichlet: satisfied data and zero penalty contribute nothing") {
  auto patch = make_box_patch(Vec3(2, 1, 0.5), {2, 1, 1});
  DofLayout layout;
  layout.grad_bcs.push_back({0, 0, Mat3::Identity()});
  SolverOptions opts;
  opts.beta_pen = 1e6;
  MultifieldSolver solver(patch, elastic_matrix_only(), layout, opts);
  // undeformed state satisfies grad(phi) N = N exactly
  CHECK(solver.mechanical_residual(0.1).lpNorm<Eigen::Infinity>() < 1e-8);

  SolverOptions free_opts;  // beta = 0 reduces to the natural condition
  MultifieldSolver solver2(patch, elastic_matrix_only(), layout, free_opts);
  CHECK(solver2.mechanical_residual(0.1).lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("gradient Dirichlet: clamped edge suppresses the cross-section rotation") {
  // in-plane bending plate; left edge clamped in position and normal gradient,
  // right edge pushed transversally
  auto patch = make_box_patch(Vec3(10, 1, 0.5), {8, 2, 1});
  auto phys = elastic_matrix_only();
  phys.fiber = FiberParams{};
  phys.fiber.a = 0.0;
  phys.fiber.b = 0.0;
  phys.fiber.c_par = 6583.3333;
  phys.fiber.c_perp = 2212.0;
  phys.fiber.wL = 1.0;
  phys.fiber.wM = 0.0;
  DofLayout layout;
  for (int c = 0; c < 3; ++c) fix_face(patch, layout.disp, 0, 0, c);
  fix_face(patch, layout.disp, 0, 1, 1, 0.0, 0.05);  // transversal ramp at the tip
  layout.grad_bcs.push_back({0, 0, Mat3::Identity()});

  SolverOptions opts;
  opts.beta_pen = 1e6;
  MultifieldSolver solver(patch, phys, layout, opts);
  auto rec = solver.step(1.0);
  CHECK(rec.mech_iters < 25);

  // measure the gradient error on the clamped face
  const auto& u = solver.displacement();
  auto pts = face_quadrature(patch, 0, 0);
  double err = 0.0;
  for (const auto& q : pts) {
    auto ev = nurbs_shape(patch, q.xi);
    Mat3 grad = Mat3::Zero();
    for (std::size_t a = 0; a < ev.cps.size(); ++a) {
      const Vec3 qa = patch.control[ev.cps[a]] + Vec3(u[3 * ev.cps[a]], u[3 * ev.cps[a] + 1], u[3 * ev.cps[a] + 2]);
      grad += qa * ev.dR[a].transpose();
    }
    err = std::max(err, ((grad - Mat3::Identity()) * q.normal).norm());
  }
  CHECK(err < 1e-3);

  // with beta = 0 the edge rotates: error grows by orders of magnitude
  SolverOptions opts0;
  MultifieldSolver solver0(patch, phys, layout, opts0);
  auto rec0 = solver0.step(1.0);
  (void)rec0;
  const auto& u0 = solver0.displacement();
  double err0 = 0.0;
  for (const auto& q : pts) {
    auto ev = nurbs_shape(patch, q.xi);
    Mat3 grad = Mat3::Zero();
    for (std::size_t a = 0; a < ev.cps.size(); ++a) {
      const Vec3 qa =
          patch.control[ev.cps[a]] + Vec3(u0[3 * ev.cps[a]], u0[3 * ev.cps[a] + 1], u0[3 * ev.cps[a] + 2]);
      grad += qa * ev.dR[a].transpose();
    }
    err0 = std::max(err0, ((grad - Mat3::Identity()) * q.normal).norm());
  }
  CHECK(err0 > 10.0 * err);
}

TEST_CASE("plastic pair: elastic regime projects the virgin resistance") {
  auto patch = make_box_patch(Vec3(2, 1, 1), {2, 1, 1});
  auto phys = table1_full();
  phys.fiber.wL = phys.fiber.wM = 0.0;
  phys.fracture_on = false;
  DofLayout layout;
  for (int c = 0; c < 3; ++c) fix_face(patch, layout.disp, 0, 0, c);
  fix_face(patch, layout.disp, 0, 1, 0, 0.0, 0.002);  // tiny elastic ramp
  MultifieldSolver solver(patch, phys, layout, SolverOptions{});
  auto rec = solver.step(1.0);
  (void)rec;
  CHECK(solver.plastic_strain_field().lpNorm<Eigen::Infinity>() == 0.0);
  const double expect = phys.matrix.zeta * 78.8;
  for (int i = 0; i < solver.mesh().node_count(); ++i)
    CHECK(solver.resistance_field()[i] == Catch::Approx(expect).epsilon(1e-9));
}

TEST_CASE("plastic pair: gradient-hardening matrix matches the dense oracle") {
  auto patch = make_box_patch(Vec3(2, 1, 1), {2, 1, 1});
  auto phys = table1_full();
  phys.fiber.wL = phys.fiber.wM = 0.0;
  phys.fracture_on = false;
  MultifieldSolver solver(patch, phys, DofLayout{}, SolverOptions{});
  const auto& mesh = solver.mesh();
  const int n = mesh.node_count();

  // manufactured profile along x
  Eigen::VectorXd a_prof(n), zero = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) a_prof[i] = 0.1 * mesh.node[i][0] + 0.03 * mesh.node[i][0] * mesh.node[i][0];

  // dense K_alpha by direct quadrature of zeta y0 l_p^2 grad(N) . grad(N)
  Eigen::MatrixXd Ka = Eigen::MatrixXd::Zero(n, n);
  const double coef = phys.matrix.zeta * hardening_y0(phys.theta_init, phys.plastic) * phys.plastic.l_p *
                      phys.plastic.l_p;
  for (std::size_t e = 0; e < solver.element_caches().size(); ++e) {
    const auto& ec = solver.element_caches()[e];
    for (const auto& qb : ec.qp)
      for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
          Ka(ec.cnodes[i], ec.cnodes[j]) += qb.wdetJ * coef * qb.dNc[i].dot(qb.dNc[j]);
  }

  // the gradient term is the only alpha-linear piece that survives the
  // difference below (the local hardening part is removed explicitly)
  Eigen::VectorXd r1 = solver.plastic_pair_residual(a_prof, zero, a_prof, 1.0).head(n);
  Eigen::VectorXd r0 = solver.plastic_pair_residual(zero, zero, zero, 1.0).head(n);
  Eigen::VectorXd local = Eigen::VectorXd::Zero(n);
  for (std::size_t e = 0; e < solver.element_caches().size(); ++e) {
    const auto& ec = solver.element_caches()[e];
    for (const auto& qb : ec.qp) {
      double a_q = 0.0;
      for (int i = 0; i < 8; ++i) a_q += qb.Nc[i] * a_prof[ec.cnodes[i]];
      const double dy = phys.matrix.zeta * (hardening(a_q, phys.theta_init, phys.plastic) -
                                            hardening(0.0, phys.theta_init, phys.plastic));
      for (int i = 0; i < 8; ++i) local[ec.cnodes[i]] += qb.wdetJ * qb.Nc[i] * dy;
    }
  }
  Eigen::VectorXd gradient_part = r1 - r0 - local;
  Eigen::VectorXd oracle = Ka * a_prof;
  CHECK((gradient_part - oracle).lpNorm<Eigen::Infinity>() < 1e-10 * std::max(1.0, oracle.lpNorm<Eigen::Infinity>()));
}

TEST_CASE("phase field: no driving force means no evolution; pinned nodes persist") {
  auto patch = make_box_patch(Vec3(2, 1, 1), {2, 1, 1});
  auto phys = table1_full();
  phys.plasticity_on = false;
  DofLayout layout;
  for (int c = 0; c < 3; ++c) fix_face(patch, layout.disp, 0, 0, c);
  MultifieldSolver solver(patch, phys, layout, SolverOptions{});
  solver.mutable_phase_fields().broken_s[0] = 1;
  solver.mutable_phase_fields().s[0] = 1.0;
  auto rec = solver.step(0.5);
  CHECK(solver.phase_fields().s[0] == 1.0);
  // the pinned node forces a local band via the stiffness term; away from it
  // nothing evolves and no fiber field moves
  CHECK(rec.max_sL <= 1e-14);
  CHECK(rec.max_sM <= 1e-14);
}

TEST_CASE("phase field: uniform tension reaches the 0D stationary value") {
  auto patch = make_box_patch(Vec3(1, 1, 1), {1, 1, 1});
  auto phys = table1_full();
  phys.plasticity_on = false;
  phys.fiber.wL = phys.fiber.wM = 0.0;  // matrix field only
  DofLayout layout;
  // prescribe the full deformation: uniform stretch on every control point
  const double lam = 1.10;
  for (int cp = 0; cp < patch.cp_count(); ++cp)
    for (int c = 0; c < 3; ++c)
      layout.disp.bcs.push_back({cp, c, c == 0 ? (lam - 1.0) * patch.control[cp][0] : 0.0, 0.0});
  MultifieldSolver solver(patch, phys, layout, SolverOptions{});
  StaggeredStep rec;
  for (int i = 0; i < 6; ++i) rec = solver.step(1.0);

  // 0D stationary value s* = H lf / (zeta gc) with H at the converged state
  const auto& qr = solver.records()[0][0];
  const double s_star = qr.H * phys.fracture.lf / (phys.matrix.zeta * gc_matrix(0.0, phys.fracture));
  CHECK(rec.max_s == Catch::Approx(s_star).epsilon(1e-3));
  // irreversibility: unload and check the field does not decrease
  const double s_before = solver.phase_fields().s[0];
  DofLayout layout2 = layout;  // same constraints, but now hold (rate reached)
  auto rec2 = solver.step(1e-3);
  CHECK(solver.phase_fields().s[0] >= s_before - 1e-14);
}

TEST_CASE("thermal: steady 1D conduction gives the linear profile") {
  auto patch = make_box_patch(Vec3(10, 1, 1), {5, 1, 1});
  auto phys = elastic_matrix_only();
  phys.thermal_coupled = true;
  DofLayout layout;
  for (int cp = 0; cp < patch.cp_count(); ++cp)
    for (int c = 0; c < 3; ++c) layout.disp.bcs.push_back({cp, c, 0.0, 0.0});  // mechanics frozen
  fix_face(patch, layout.theta, 0, 0, 0, 300.0, 0.0);
  fix_face(patch, layout.theta, 0, 1, 0, 293.0, 0.0);
  MultifieldSolver solver(patch, phys, layout, SolverOptions{});
  for (int i = 0; i < 3; ++i) solver.step(1e8);
  // evaluate the temperature along the bar against the linear ramp
  for (double x : {1.0, 3.0, 5.0, 7.0, 9.0}) {
    auto ev = nurbs_shape(patch, Vec3(x, 0.5, 0.5));
    double th = 0.0;
    for (std::size_t a = 0; a < ev.cps.size(); ++a) th += ev.R[a] * solver.temperature()[ev.cps[a]];
    CHECK(th == Catch::Approx(300.0 - 0.7 * x).epsilon(1e-6));
  }
}

TEST_CASE("thermal: a fully cracked plane insulates the bar") {
  auto patch = make_box_patch(Vec3(10, 1, 1), {5, 1, 1});
  auto phys = elastic_matrix_only();
  phys.thermal_coupled = true;
  phys.thermal.K_conv = 0.0;
  DofLayout layout;
  for (int cp = 0; cp < patch.cp_count(); ++cp)
    for (int c = 0; c < 3; ++c) layout.disp.bcs.push_back({cp, c, 0.0, 0.0});
  fix_face(patch, layout.theta, 0, 0, 0, 300.0, 0.0);
  fix_face(patch, layout.theta, 0, 1, 0, 293.0, 0.0);
  MultifieldSolver solver(patch, phys, layout, SolverOptions{});
  // crack the middle element: all control points supporting it carry s = 1
  auto& pf = solver.mutable_phase_fields();
  for (int k = 0; k < patch.n_basis[2]; ++k)
    for (int j = 0; j < patch.n_basis[1]; ++j)
      for (int i = 1; i <= 5; ++i) pf.s[patch.cp_index(i, j, k)] = 1.0;
  for (int i = 0; i < 3; ++i) solver.step(1e8);
  // the left side floats to 300, the right side to 293
  auto ev_l = nurbs_shape(patch, Vec3(1.0, 0.5, 0.5));
  auto ev_r = nurbs_shape(patch, Vec3(9.0, 0.5, 0.5));
  double th_l = 0.0, th_r = 0.0;
  for (std::size_t a = 0; a < ev_l.cps.size(); ++a) th_l += ev_l.R[a] * solver.temperature()[ev_l.cps[a]];
  for (std::size_t a = 0; a < ev_r.cps.size(); ++a) th_r += ev_r.R[a] * solver.temperature()[ev_r.cps[a]];
  CHECK(th_l == Catch::Approx(300.0).margin(1e-5));
  CHECK(th_r == Catch::Approx(293.0).margin(1e-5));
}

TEST_CASE("staggered step: cutting recovers from an overlarge increment") {
  auto patch = make_box_patch(Vec3(4, 1, 1), {2, 1, 1});
  DofLayout layout;
  for (int c = 0; c < 3; ++c) fix_face(patch, layout.disp, 0, 0, c);
  fix_face(patch, layout.disp, 0, 1, 0, 0.0, -4.8);  // would invert the bar within one unit of time
  MultifieldSolver solver(patch, elastic_matrix_only(), layout, SolverOptions{});
  auto rec = solver.step(1.0);
  CHECK(rec.cuts >= 1);
  CHECK(rec.dt < 1.0);
  CHECK(solver.time() == Catch::Approx(rec.dt));
}

TEST_CASE("staggered step: disabled physics equals huge thresholds on an elastic ramp") {
  auto patch = make_box_patch(Vec3(4, 1, 1), {2, 1, 1});
  DofLayout base;
  for (int c = 0; c < 3; ++c) fix_face(patch, base.disp, 0, 0, c);
  fix_face(patch, base.disp, 0, 1, 0, 0.0, 0.04);
  const int last = patch.n_basis[0] - 1;
  for (int k = 0; k < patch.n_basis[2]; ++k)
    for (int j = 0; j < patch.n_basis[1]; ++j) base.reaction_dofs.push_back({patch.cp_index(last, j, k), 0});

  auto phys_off = table1_full();
  phys_off.plasticity_on = false;
  phys_off.fracture_on = false;

  auto phys_hi = table1_full();
  phys_hi.plastic.y0_ref = 1e4;
  phys_hi.fracture.gce = phys_hi.fracture.gcL = phys_hi.fracture.gcM = 1e6;
  phys_hi.fracture.gcp = 1e6;

  MultifieldSolver s_off(patch, phys_off, base, SolverOptions{});
  MultifieldSolver s_hi(patch, phys_hi, base, SolverOptions{});
  for (int i = 0; i < 3; ++i) {
    auto r_off = s_off.step(1.0);
    auto r_hi = s_hi.step(1.0);
    CHECK(r_hi.reaction[0] == Catch::Approx(r_off.reaction[0]).epsilon(1e-6));
  }
  CHECK((s_off.displacement() - s_hi.displacement()).lpNorm<Eigen::Infinity>() < 1e-6);
}

TEST_CASE("staggered step: plastic tension run keeps the discrete invariants") {
  auto patch = make_box_patch(Vec3(4, 1, 1), {2, 1, 1});
  auto phys = table1_full();
  phys.fiber.wL = phys.fiber.wM = 0.0;
  DofLayout layout;
  for (int c = 0; c < 3; ++c) fix_face(patch, layout.disp, 0, 0, c);
  fix_face(patch, layout.disp, 0, 1, 0, 0.0, 0.10);  // past yield within a few steps
  SolverOptions opts;
  opts.passes = 2;  // exercises the pass-monotonicity guard as well
  MultifieldSolver solver(patch, phys, layout, opts);

  double max_alpha_prev = 0.0, max_s_prev = 0.0;
  bool yielded = false;
  for (int step = 0; step < 8; ++step) {
    auto rec = solver.step(1.0);
    CHECK(rec.passes_run >= 1);
    CHECK(rec.passes_run <= 2);
    for (const auto& erec : solver.records())
      for (const auto& qr : erec) {
        if (qr.lambda_p > 0.0) {
          yielded = true;
          CHECK(std::abs(std::pow(std::max(0.0, qr.Phi), phys.plastic.n_p) -
                         phys.plastic.eta_p * qr.lambda_p) <= 1e-8);
        }
        CHECK(qr.f >= phys.plastic.f0 - 1e-14);
        CHECK(qr.lambda_p * qr.Phi >= -1e-14);
        CHECK(qr.plastic_power >= -1e-10);
      }
    CHECK(rec.max_alpha >= max_alpha_prev - 1e-14);
    CHECK(rec.max_s >= max_s_prev - 1e-14);
    max_alpha_prev = rec.max_alpha;
    max_s_prev = rec.max_s;
    CHECK(rec.residual_sum.norm() <= 1e-8 * std::max(1.0, rec.load_scale));
    CHECK(rec.diss_plastic >= -1e-10);
    CHECK(rec.diss_fracture >= -1e-10);
  }
  CHECK(yielded);
  CHECK(solver.plastic_strain_field().maxCoeff() > 0.0);
}

TEST_CASE("thermal: insulated plastic loading converts work into heat") {
  auto patch = make_box_patch(Vec3(4, 1, 1), {2, 1, 1});
  auto phys = table1_full();
  phys.fiber.wL = phys.fiber.wM = 0.0;
  phys.fracture_on = false;
  phys.thermal_coupled = true;  // no theta Dirichlet: adiabatic
  // the practical dissipation form assumes a small viscous overstress and a
  // hardening increment per step below it; thermal softening would couple the
  // yield stress to the thermoelastic cooling and cloud the comparison
  phys.plastic.om_t0 = phys.plastic.om_t1 = phys.plastic.om_t2 = 0.0;
  phys.plastic.y2_ref = 0.0;
  // near-isochoric prescribed stretch: the discrete resistance equation
  // carries a 1/J factor, so volume change would bias the identity itself
  DofLayout layout;
  const double strain_rate = 2.5e-5;
  for (int cp = 0; cp < patch.cp_count(); ++cp)
    for (int c = 0; c < 3; ++c) {
      const double r = (c == 0) ? strain_rate * patch.control[cp][0]
                                : -0.5 * strain_rate * patch.control[cp][c];
      layout.disp.bcs.push_back({cp, c, 0.0, r});
    }
  MultifieldSolver solver(patch, phys, layout, SolverOptions{});

  double plastic_work = 0.0, practical_dissipation = 0.0;
  for (int step = 0; step < 320; ++step) {
    auto rec = solver.step(4.0);
    practical_dissipation += rec.diss_plastic * rec.dt;
    for (std::size_t e = 0; e < solver.records().size(); ++e)
      for (std::size_t g = 0; g < solver.records()[e].size(); ++g)
        plastic_work += solver.element_caches()[e].qp[g].wdetJ * solver.records()[e][g].plastic_power * rec.dt;
  }
  REQUIRE(plastic_work > 0.0);
  CHECK(practical_dissipation == Catch::Approx(0.9 * plastic_work).epsilon(0.05));
  // the temperature field responded (thermoelastic cooling competes with the
  // dissipative heating at this slow rate, so only the change is asserted)
  CHECK(std::abs(solver.temperature().maxCoeff() - phys.theta_init) > 1e-6);
}
