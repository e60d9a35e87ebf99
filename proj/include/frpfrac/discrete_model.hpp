#pragma once

#include <vector>

#include "frpfrac/fields.hpp"
#include "frpfrac/fiber_material.hpp"
#include "frpfrac/gtn.hpp"
#include "frpfrac/matrix_material.hpp"
#include "frpfrac/patch.hpp"
#include "frpfrac/phase_field.hpp"
#include "frpfrac/thermal.hpp"

namespace frpfrac {

struct SolverOptions {
  double newton_rtol = 1e-9;
  double newton_atol = 1e-10;
  int newton_max = 60;
  int passes = 1;
  double beta_pen = 0.0;  // gradient-Dirichlet penalty [MPa/mm-ish scale]
  int max_cuts = 8;
  int threads = 1;
  bool log_cuts = false;  // report block failures that trigger step cuts
};

/// All material and coupling switches of one simulation.
struct PhysicsParams {
  MatrixParams matrix;
  FiberParams fiber;
  PlasticParams plastic;
  FractureParams fracture;
  ThermalParams thermal;
  bool plasticity_on = true;
  bool fracture_on = true;
  bool thermal_coupled = false;
  double theta_init = 293.0;

  void validate() const {
    matrix.validate();
    fiber.validate();
    plastic.validate();
    fracture.validate();
    thermal.validate();
    if (fracture_on && plasticity_on && plastic.l_p < fracture.lf - 1e-12)
      throw ConfigError("the plastic length scale must not be smaller than the fracture length scale");
  }
};

/// Basis data cached once per quadrature point; the geometry is fixed, only
/// field coefficients change during the solve.
struct QuadBasis {
  double wdetJ = 0.0;
  Vec3 x;
  std::vector<double> R;
  std::vector<Vec3> dR;
  std::vector<Mat3> d2R;
  std::vector<double> lapR;    // trace of d2R
  std::vector<double> betaL;   // L^T d2R L, contraction for the higher-order term
  std::vector<double> betaM;
  std::array<double, 8> Nc;    // companion shape values
  std::array<Vec3, 8> dNc;
};

struct ElementCache {
  std::vector<int> cps;           // active control points, (p+1)^3
  std::array<int, 8> cnodes;      // companion nodes
  std::vector<QuadBasis> qp;
};

/// Boundary-element face data for the gradient-Dirichlet penalty.
struct FaceUnit {
  std::vector<int> cps;
  struct Pt {
    double dA;
    Vec3 normal;
    std::vector<double> R;
    std::vector<Vec3> dR;
  };
  std::vector<Pt> pts;
  Mat3 target = Mat3::Identity();
};

/// Per-quadrature-point record of the converged mechanical state within a
/// step; consumed by the plastic pair, phase-field and thermal blocks and by
/// the history commit.
struct QuadRecord {
  PlasticHistory hist_next;
  double lambda_p = 0.0;
  double Phi = 0.0;
  double sigma_bar = 0.0;
  double plastic_power = 0.0;  // tau : d^p at the corrected state
  double J = 1.0;
  double f = 0.0;
  double H = 0.0, HL = 0.0, HM = 0.0;
  double energy = 0.0;           // stored elastic energy density (weighted)
  double eta_A = 0.0, eta_B = 0.0;  // eta(theta) = eta_A + eta_B ln(theta/theta0)
  Mat3 cond_geo = Mat3::Identity();  // F^{-1} F^{-T}
};

inline ElementCache build_element_cache(const NurbsPatch& patch, const LinearCompanionMesh& mesh, int e,
                                        const Vec3& L, const Vec3& M) {
  ElementCache ec;
  ec.cnodes = mesh.conn[e];
  auto pts = element_quadrature(patch, e);
  ec.qp.reserve(pts.size());
  for (const auto& q : pts) {
    ShapeEval ev = nurbs_shape(patch, q.xi);
    if (ec.cps.empty()) ec.cps = ev.cps;
    QuadBasis b;
    b.wdetJ = q.w * ev.detJ;
    b.x = ev.x;
    b.R = ev.R;
    b.dR = ev.dR;
    b.d2R = ev.d2R;
    const std::size_t nA = ev.R.size();
    b.lapR.resize(nA);
    b.betaL.resize(nA);
    b.betaM.resize(nA);
    for (std::size_t a = 0; a < nA; ++a) {
      b.lapR[a] = ev.d2R[a].trace();
      b.betaL[a] = L.dot(ev.d2R[a] * L);
      b.betaM[a] = M.dot(ev.d2R[a] * M);
    }
    auto ce = companion_shape(patch, mesh, e, q.xi, ev.Jgeo);
    b.Nc = ce.N;
    b.dNc = ce.dN;
    ec.qp.push_back(std::move(b));
  }
  return ec;
}

}  // namespace frpfrac
