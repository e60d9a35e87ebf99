#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "frpfrac/config.hpp"
#include "frpfrac/solver.hpp"

namespace frpfrac {

/// Everything needed to instantiate a solver for one benchmark: the patch,
/// boundary machinery and the load program.
struct Scenario {
  NurbsPatch patch;
  DofLayout layout;
  PhysicsParams physics;
  SolverOptions options;
  double dt = 0.2;
  double t_end = 20.0;
  double rate = 0.5;       // speed of the ramped boundary set [mm/s]
  int reaction_comp = 0;   // component reported as the load F
  std::string name;
};

namespace detail {

/// control points whose Greville position satisfies a predicate
template <class Pred>
std::vector<int> select_cps(const NurbsPatch& p, Pred&& pred) {
  std::vector<int> out;
  for (int k = 0; k < p.n_basis[2]; ++k)
    for (int j = 0; j < p.n_basis[1]; ++j)
      for (int i = 0; i < p.n_basis[0]; ++i) {
        const int cp = p.cp_index(i, j, k);
        if (pred(p.control[cp])) out.push_back(cp);
      }
  return out;
}

/// Greville x-column closest to a target coordinate
inline double nearest_column(const NurbsPatch& p, int dir, double target) {
  double best = p.control[0][dir];
  for (const auto& c : p.control)
    if (std::abs(c[dir] - target) < std::abs(best - target)) best = c[dir];
  return best;
}

inline bool was_defaulted(const std::vector<std::string>& defaulted, const std::string& key) {
  return std::find(defaulted.begin(), defaulted.end(), key) != defaulted.end();
}

}  // namespace detail

/// Construct the geometry, boundary sets and load program of the selected
/// benchmark.  Geometry keys left at their defaults are replaced by the
/// scenario's canonical dimensions.
inline Scenario build_scenario(SimulationConfig cfg, const std::vector<std::string>& defaulted = {}) {
  using detail::was_defaulted;
  Scenario sc;
  sc.name = cfg.type;

  auto default_geometry = [&](double L, double W, double H, int e0, int e1, int e2) {
    if (was_defaulted(defaulted, "geometry.length")) cfg.length = L;
    if (was_defaulted(defaulted, "geometry.width")) cfg.width = W;
    if (was_defaulted(defaulted, "geometry.height")) cfg.height = H;
    if (was_defaulted(defaulted, "geometry.elements")) cfg.elements = {e0, e1, e2};
  };

  if (cfg.type == "in_plane_bending") {
    default_geometry(10.0, 1.0, 0.5, 8, 2, 1);
    if (was_defaulted(defaulted, "scenario.rate")) cfg.rate = 0.05;
    if (was_defaulted(defaulted, "scenario.total_displacement")) cfg.total_displacement = 0.5;
    // purely elastic verification benchmark
    cfg.plastic_enabled = false;
    cfg.fracture_enabled = false;
    cfg.zeta = 0.0;
  } else if (cfg.type == "four_point_bending") {
    default_geometry(125.0, 25.0, 0.5, 25, 5, 2);
    if (was_defaulted(defaulted, "scenario.rate")) cfg.rate = 0.5;
    if (was_defaulted(defaulted, "scenario.total_displacement")) cfg.total_displacement = 2.0;
    cfg.plastic_enabled = false;
    cfg.fracture_enabled = false;
  } else {
    default_geometry(125.0, 25.0, 2.0, 16, 4, 1);
  }

  sc.patch = make_box_patch(Vec3(cfg.length, cfg.width, cfg.height), cfg.elements, cfg.degree);
  sc.physics = cfg.to_physics();
  sc.options = cfg.to_solver_options();
  sc.dt = cfg.step_size();
  sc.rate = cfg.rate;
  sc.t_end = cfg.end_time();

  const double tol = 1e-9;
  if (cfg.type == "tension_uni" || cfg.type == "tension_bi" || cfg.type == "custom") {
    // grip volumes of 20 mm at both ends; one fixed, one ramped along x
    const double grip = 20.0 + tol;
    for (int cp : detail::select_cps(sc.patch, [&](const Vec3& X) { return X[0] <= grip; }))
      for (int c = 0; c < 3; ++c) sc.layout.disp.bcs.push_back({cp, c, 0.0, 0.0});
    for (int cp : detail::select_cps(sc.patch, [&](const Vec3& X) { return X[0] >= cfg.length - grip; })) {
      sc.layout.disp.bcs.push_back({cp, 0, 0.0, cfg.rate});
      sc.layout.disp.bcs.push_back({cp, 1, 0.0, 0.0});
      sc.layout.disp.bcs.push_back({cp, 2, 0.0, 0.0});
      sc.layout.reaction_dofs.push_back({cp, 0});
    }
    sc.reaction_comp = 0;
  } else if (cfg.type == "in_plane_bending") {
    // clamped left edge (position and cross-section rotation), transversal
    // ramp on the right edge
    for (int cp : detail::select_cps(sc.patch, [&](const Vec3& X) { return X[0] <= tol; }))
      for (int c = 0; c < 3; ++c) sc.layout.disp.bcs.push_back({cp, c, 0.0, 0.0});
    sc.layout.grad_bcs.push_back({0, 0, Mat3::Identity()});
    for (int cp : detail::select_cps(sc.patch, [&](const Vec3& X) { return X[0] >= cfg.length - tol; })) {
      sc.layout.disp.bcs.push_back({cp, 1, 0.0, cfg.rate});
      sc.layout.reaction_dofs.push_back({cp, 1});
    }
    sc.reaction_comp = 1;
  } else if (cfg.type == "four_point_bending") {
    // support lines on the bottom face, ramped load lines on the top face
    const double xs0 = detail::nearest_column(sc.patch, 0, 0.1 * cfg.length);
    const double xs1 = detail::nearest_column(sc.patch, 0, 0.9 * cfg.length);
    const double xl0 = detail::nearest_column(sc.patch, 0, 0.38 * cfg.length);
    const double xl1 = detail::nearest_column(sc.patch, 0, 0.62 * cfg.length);
    auto on_line = [&](const Vec3& X, double x, double z) {
      return std::abs(X[0] - x) <= tol && std::abs(X[2] - z) <= tol;
    };
    for (int cp : detail::select_cps(sc.patch, [&](const Vec3& X) { return on_line(X, xs0, 0.0); })) {
      sc.layout.disp.bcs.push_back({cp, 2, 0.0, 0.0});
      sc.layout.disp.bcs.push_back({cp, 0, 0.0, 0.0});  // horizontally fixed support
      sc.layout.disp.bcs.push_back({cp, 1, 0.0, 0.0});
    }
    for (int cp : detail::select_cps(sc.patch, [&](const Vec3& X) { return on_line(X, xs1, 0.0); }))
      sc.layout.disp.bcs.push_back({cp, 2, 0.0, 0.0});
    for (double xl : {xl0, xl1})
      for (int cp : detail::select_cps(sc.patch,
                                       [&](const Vec3& X) { return on_line(X, xl, cfg.height); })) {
        sc.layout.disp.bcs.push_back({cp, 2, 0.0, -cfg.rate});
        sc.layout.reaction_dofs.push_back({cp, 2});
      }
    sc.reaction_comp = 2;
  }
  return sc;
}

}  // namespace frpfrac
