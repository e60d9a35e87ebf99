#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "frpfrac/scenario.hpp"
#include "frpfrac/simulation.hpp"

namespace frpfrac {

struct PropertyResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

namespace verification {

inline Mat3 random_F(Rng& rng, double spread = 0.25) {
  for (;;) {
    Mat3 F;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) F(i, j) = (i == j ? 1.0 : 0.0) + rng.uniform(-spread, spread);
    if (F.determinant() > 0.25) return F;
  }
}

inline Tensor3 random_gradF(Rng& rng, double spread = 0.05) {
  Tensor3 g;
  for (int i = 0; i < 27; ++i) g.a[i] = rng.uniform(-spread, spread);
  return g;
}

inline Mat3 random_rotation(Rng& rng) {
  Vec3 axis(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
  axis.normalize();
  return Eigen::AngleAxisd(rng.uniform(0.0, 3.0), axis).toRotationMatrix();
}

/// stress and higher-order stress against central differences of the energies
inline PropertyResult fd_consistency(Rng& rng) {
  MatrixParams pm;
  FiberParams pf;
  pf.b = 9.0;
  const double h = 1e-6;
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const Mat3 F = random_F(rng);
    const double s = rng.uniform(0.0, 0.8), theta = rng.uniform(270.0, 320.0);
    auto energy_m = [&](const Mat3& Fx) {
      auto es = elastic_split(make_deformation_state(Fx), Mat3::Identity(), s, 0.001);
      return pm.zeta * matrix_energy(es, theta, pm);
    };
    Mat3 dF;
    for (int i = 0; i < 9; ++i) dF(i / 3, i % 3) = rng.uniform(-1, 1);
    dF /= dF.norm();
    {
      auto es = elastic_split(make_deformation_state(F), Mat3::Identity(), s, 0.001);
      auto [dev, vol] = matrix_kirchhoff_stress(es, theta, pm);
      const Mat3 P = (dev + vol) * F.inverse().transpose();
      const double dnum = (energy_m(F + h * dF) - energy_m(F - h * dF)) / (2 * h);
      const double dana = (P.array() * dF.array()).sum();
      worst = std::max(worst, std::abs(dana - dnum) / std::max(1.0, std::abs(dnum)));
    }
    {
      const Tensor3 gF = random_gradF(rng);
      const double sL = rng.uniform(0, 0.8), sM = rng.uniform(0, 0.8);
      auto resp = evaluate_fiber(F, gF, sL, sM, theta, pf);
      const double dnum = (evaluate_fiber(F + h * dF, gF, sL, sM, theta, pf).energy -
                           evaluate_fiber(F - h * dF, gF, sL, sM, theta, pf).energy) /
                          (2 * h);
      const double dana = (resp.P.array() * dF.array()).sum();
      worst = std::max(worst, std::abs(dana - dnum) / std::max(1.0, std::abs(dnum)));
      Tensor3 dG;
      double n2 = 0;
      for (int i = 0; i < 27; ++i) {
        dG.a[i] = rng.uniform(-1, 1);
        n2 += dG.a[i] * dG.a[i];
      }
      for (int i = 0; i < 27; ++i) dG.a[i] /= std::sqrt(n2);
      Tensor3 gp = gF, gm = gF;
      for (int i = 0; i < 27; ++i) {
        gp.a[i] += h * dG.a[i];
        gm.a[i] -= h * dG.a[i];
      }
      const double dnum2 = (evaluate_fiber(F, gp, sL, sM, theta, pf).energy -
                            evaluate_fiber(F, gm, sL, sM, theta, pf).energy) /
                           (2 * h);
      const double dana2 = resp.dvL.dot(dG.contract(pf.L, pf.L)) + resp.dvM.dot(dG.contract(pf.M, pf.M));
      worst = std::max(worst, std::abs(dana2 - dnum2) / std::max(1.0, std::abs(dnum2)));
    }
  }
  char d[96];
  std::snprintf(d, sizeof(d), "max relative deviation %.3e (tolerance 1e-5)", worst);
  return {"stress finite-difference consistency", worst < 1e-5, d};
}

inline PropertyResult partition_of_unity(Rng& rng) {
  auto patch = make_box_patch(Vec3(10, 1, 0.5), {8, 2, 1});
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    Vec3 xi(rng.uniform(0, 10), rng.uniform(0, 1), rng.uniform(0, 0.5));
    auto ev = nurbs_shape(patch, xi);
    double S = 0;
    Vec3 S1 = Vec3::Zero();
    Mat3 S2 = Mat3::Zero();
    for (std::size_t a = 0; a < ev.R.size(); ++a) {
      S += ev.R[a];
      S1 += ev.dR[a];
      S2 += ev.d2R[a];
    }
    worst = std::max({worst, std::abs(S - 1.0), S1.lpNorm<Eigen::Infinity>(),
                      S2.lpNorm<Eigen::Infinity>()});
  }
  char d[96];
  std::snprintf(d, sizeof(d), "max deviation of the value and derivative sums %.3e (tolerance 1e-12)", worst);
  return {"partition of unity", worst < 1e-12, d};
}

inline PropertyResult c1_continuity(Rng& rng) {
  auto patch = make_box_patch(Vec3(10, 1, 0.5), {8, 2, 1});
  const double eps = 1e-12;
  double worst = 0.0;
  auto field = [&](const ShapeEval& ev, double& val, Vec3& grad) {
    val = 0;
    grad = Vec3::Zero();
    for (std::size_t a = 0; a < ev.cps.size(); ++a) {
      const Vec3 P = patch.control[ev.cps[a]];
      const double v = std::sin(0.35 * P[0]) + 0.4 * P[1] * P[2] + 0.1 * P[2] * P[2];
      val += ev.R[a] * v;
      grad += ev.dR[a] * v;
    }
  };
  for (int dir = 0; dir < 3; ++dir)
    for (std::size_t b = 1; b + 1 < patch.span_breaks[dir].size(); ++b)
      for (int trial = 0; trial < 4; ++trial) {
        Vec3 xi(rng.uniform(0.2, 9.8), rng.uniform(0.05, 0.95), rng.uniform(0.05, 0.45));
        Vec3 xm = xi, xp = xi;
        xm[dir] = patch.span_breaks[dir][b] - eps;
        xp[dir] = patch.span_breaks[dir][b] + eps;
        double vm, vp;
        Vec3 gm, gp;
        field(nurbs_shape(patch, xm), vm, gm);
        field(nurbs_shape(patch, xp), vp, gp);
        worst = std::max({worst, std::abs(vm - vp), (gm - gp).norm()});
      }
  char d[96];
  std::snprintf(d, sizeof(d), "max jump %.3e (tolerance 1e-10)", worst);
  return {"C1 continuity across knot planes", worst < 1e-10, d};
}

inline PropertyResult frame_indifference(Rng& rng) {
  MatrixParams pm;
  FiberParams pf;
  pf.b = 5.0;
  double worst = 0.0;
  for (int k = 0; k < 60; ++k) {
    const Mat3 F = random_F(rng);
    const Tensor3 gF = random_gradF(rng);
    const Mat3 Q = random_rotation(rng);
    Tensor3 QgF;
    for (int i = 0; i < 3; ++i)
      for (int J = 0; J < 3; ++J)
        for (int K = 0; K < 3; ++K) {
          double v = 0;
          for (int m = 0; m < 3; ++m) v += Q(i, m) * gF(m, J, K);
          QgF(i, J, K) = v;
        }
    const double s = rng.uniform(0, 0.9), sL = rng.uniform(0, 0.9), sM = rng.uniform(0, 0.9);
    auto e_mat = [&](const Mat3& Fx) {
      return matrix_energy(elastic_split(make_deformation_state(Fx), Mat3::Identity(), s, 0.001), 300.0, pm);
    };
    const double em = e_mat(F), emq = e_mat(Q * F);
    worst = std::max(worst, std::abs(em - emq) / std::max(1.0, std::abs(em)));
    const double ef = evaluate_fiber(F, gF, sL, sM, 300.0, pf).energy;
    const double efq = evaluate_fiber(Q * F, QgF, sL, sM, 300.0, pf).energy;
    worst = std::max(worst, std::abs(ef - efq) / std::max(1.0, std::abs(ef)));
  }
  char d[96];
  std::snprintf(d, sizeof(d), "max relative deviation %.3e (tolerance 1e-10)", worst);
  return {"frame indifference", worst < 1e-10, d};
}

/// load-unload tension run: irreversibility of the committed phase fields,
/// equilibrium resultants, non-negative dissipation, Newton rate bound
inline std::vector<PropertyResult> coupled_run_properties(int threads) {
  auto patch = make_box_patch(Vec3(8, 2, 1), {4, 2, 1});
  PhysicsParams phys;
  phys.matrix.mu = {1630.0};
  phys.fiber.wL = phys.fiber.wM = (1.0 - phys.matrix.zeta) / 2.0;
  phys.fiber.L = Vec3(std::cos(0.5), std::sin(0.5), 0);
  phys.fiber.M = Vec3(-std::sin(0.5), std::cos(0.5), 0);
  phys.plasticity_on = true;
  phys.fracture_on = true;
  DofLayout layout;
  for (int k = 0; k < patch.n_basis[2]; ++k)
    for (int j = 0; j < patch.n_basis[1]; ++j) {
      for (int c = 0; c < 3; ++c) layout.disp.bcs.push_back({patch.cp_index(0, j, k), c, 0.0, 0.0});
      ScalarBC ramp{patch.cp_index(patch.n_basis[0] - 1, j, k), 0, 0.0, 0.12, 8.0};  // reverses at t = 8
      layout.disp.bcs.push_back(ramp);
      layout.disp.bcs.push_back({patch.cp_index(patch.n_basis[0] - 1, j, k), 1, 0.0, 0.0});
      layout.disp.bcs.push_back({patch.cp_index(patch.n_basis[0] - 1, j, k), 2, 0.0, 0.0});
      layout.reaction_dofs.push_back({patch.cp_index(patch.n_basis[0] - 1, j, k), 0});
    }
  SolverOptions opts;
  opts.threads = threads;
  MultifieldSolver solver(patch, phys, layout, opts);

  bool irreversible = true, equilibrium = true, dint_ok = true, newton_ok = true;
  double worst_eq = 0.0, worst_d = 0.0, worst_ratio = 0.0;
  Eigen::VectorXd s_prev = solver.phase_fields().s, sL_prev = solver.phase_fields().sL;
  for (int step = 0; step < 12; ++step) {
    auto rec = solver.step(1.0);
    for (int i = 0; i < s_prev.size(); ++i) {
      if (solver.phase_fields().s[i] < s_prev[i]) irreversible = false;
      if (solver.phase_fields().sL[i] < sL_prev[i]) irreversible = false;
    }
    s_prev = solver.phase_fields().s;
    sL_prev = solver.phase_fields().sL;
    const double eq = rec.residual_sum.norm() / std::max(1.0, rec.load_scale);
    worst_eq = std::max(worst_eq, eq);
    if (eq > 1e-8) equilibrium = false;
    if (rec.diss_plastic < -1e-10 || rec.diss_fracture < -1e-10) dint_ok = false;
    worst_d = std::min({worst_d, rec.diss_plastic, rec.diss_fracture});
    if (rec.mech_iters >= 2) {
      worst_ratio = std::max(worst_ratio, rec.newton_ratio);
      if (rec.newton_ratio > 1e3) newton_ok = false;
    }
  }
  std::vector<PropertyResult> out;
  char d1[96], d2[96], d3[96], d4[96];
  std::snprintf(d1, sizeof(d1), "no committed nodal value decreased over a load-unload cycle");
  std::snprintf(d2, sizeof(d2), "worst |sum R| / load = %.3e (tolerance 1e-8)", worst_eq);
  std::snprintf(d3, sizeof(d3), "most negative dissipation %.3e (tolerance -1e-10)", worst_d);
  std::snprintf(d4, sizeof(d4), "worst normalized r_{k+1}/r_k^2 = %.3g (bound 1e3)", worst_ratio);
  out.push_back({"phase-field irreversibility", irreversible, d1});
  out.push_back({"equilibrium resultants", equilibrium, d2});
  out.push_back({"non-negative internal dissipation", dint_ok, d3});
  out.push_back({"Newton convergence rate bound", newton_ok, d4});
  return out;
}

/// crack band width scales with l_f, not the element size
inline PropertyResult crack_band_scaling(int threads) {
  auto width_for = [&](int nelem) {
    auto patch = make_box_patch(Vec3(24, 1, 1), {nelem, 1, 1});
    PhysicsParams phys;
    phys.plasticity_on = false;
    phys.fracture_on = true;
    phys.fracture.healing = true;  // chi == 1: pure profile relaxation
    phys.fiber.wL = phys.fiber.wM = 0.0;
    DofLayout layout;
    for (int cp = 0; cp < patch.cp_count(); ++cp)
      for (int c = 0; c < 3; ++c) layout.disp.bcs.push_back({cp, c, 0.0, 0.0});
    SolverOptions opts;
    opts.threads = threads;
    MultifieldSolver solver(patch, phys, layout, opts);
    // pin the crack plane at the mid column
    auto& pf = solver.mutable_phase_fields();
    for (int k = 0; k < patch.n_basis[2]; ++k)
      for (int j = 0; j < patch.n_basis[1]; ++j) {
        double best = 1e30;
        int best_i = 0;
        for (int i = 0; i < patch.n_basis[0]; ++i)
          if (std::abs(patch.control[patch.cp_index(i, j, k)][0] - 12.0) < best) {
            best = std::abs(patch.control[patch.cp_index(i, j, k)][0] - 12.0);
            best_i = i;
          }
        pf.broken_s[patch.cp_index(best_i, j, k)] = 1;
        pf.s[patch.cp_index(best_i, j, k)] = 1.0;
      }
    solver.step(1e12);
    // sample the relaxed profile and measure where it exceeds one half
    double lo = 24.0, hi = 0.0;
    for (int i = 0; i <= 4000; ++i) {
      const double x = 24.0 * i / 4000.0;
      auto ev = nurbs_shape(patch, Vec3(x, 0.5, 0.5));
      double s = 0;
      for (std::size_t a = 0; a < ev.cps.size(); ++a) s += ev.R[a] * solver.phase_fields().s[ev.cps[a]];
      if (s > 0.5) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
      }
    }
    return hi - lo;
  };
  const double w_coarse = width_for(12), w_fine = width_for(24);
  const double dev = std::abs(w_coarse - w_fine) / w_fine;
  char d[128];
  std::snprintf(d, sizeof(d), "band width %.3f mm vs %.3f mm across a 2x refinement (within %.0f%%)",
                w_coarse, w_fine, 100.0 * dev);
  return {"crack band width is set by the length scale, not the mesh", dev < 0.2, d};
}

inline std::vector<PropertyResult> run_property_suite(std::uint64_t seed, int threads) {
  Rng rng(seed);
  std::vector<PropertyResult> out;
  out.push_back(fd_consistency(rng));
  out.push_back(partition_of_unity(rng));
  out.push_back(c1_continuity(rng));
  out.push_back(frame_indifference(rng));
  for (auto& r : coupled_run_properties(threads)) out.push_back(std::move(r));
  out.push_back(crack_band_scaling(threads));
  return out;
}

}  // namespace verification
}  // namespace frpfrac
