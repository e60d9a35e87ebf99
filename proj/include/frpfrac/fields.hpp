#pragma once

#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "frpfrac/common.hpp"
#include "frpfrac/patch.hpp"

namespace frpfrac {

/// One constrained scalar dof with a linear-in-time ramp
/// value(t) = base + rate t, reflected at t_reverse into a triangle ramp.
struct ScalarBC {
  int entity = 0;  // control point or companion node
  int comp = 0;
  double base = 0.0;
  double rate = 0.0;
  double t_reverse = std::numeric_limits<double>::infinity();

  double value(double t) const {
    const double te = (t <= t_reverse) ? t : 2.0 * t_reverse - t;
    return base + rate * te;
  }
};

/// Equation numbering of one field: entities x components, with Dirichlet
/// dofs excluded from the solve.
struct FieldDofs {
  int n_entities = 0;
  int comps = 1;
  std::vector<ScalarBC> bcs;
  std::vector<int> eq;  // entity*comps+comp -> equation index, -1 constrained
  int n_eq = 0;

  void build(int entities, int components) {
    n_entities = entities;
    comps = components;
    eq.assign(n_entities * comps, 0);
    for (const auto& bc : bcs) eq[bc.entity * comps + bc.comp] = -1;
    n_eq = 0;
    for (auto& e : eq)
      if (e == 0)
        e = n_eq++;
      else
        e = -1;
  }

  bool constrained(int entity, int comp = 0) const { return eq[entity * comps + comp] < 0; }

  /// write prescribed values at time t into the field vector
  void apply(Eigen::VectorXd& v, double t) const {
    for (const auto& bc : bcs) v[bc.entity * comps + bc.comp] = bc.value(t);
  }
};

/// Prescribed deformation-gradient data on a patch face, enforced weakly by
/// a penalty on (grad(phi) N - grad(phi_bar) N).
struct GradientBC {
  int dir = 0, side = 0;
  Mat3 target = Mat3::Identity();  // grad(phi_bar)
};

/// Per-field equation maps of the coupled problem.
struct DofLayout {
  FieldDofs disp;    // 3 comps on control points
  FieldDofs theta;   // control points
  FieldDofs s;       // control points (includes pinned crack set)
  FieldDofs sL;
  FieldDofs sM;
  FieldDofs alpha;   // companion nodes
  FieldDofs rp;      // companion nodes
  std::vector<GradientBC> grad_bcs;

  /// dofs whose reaction sum is reported as the load F
  std::vector<std::pair<int, int>> reaction_dofs;  // (control point, comp)
};

}  // namespace frpfrac
