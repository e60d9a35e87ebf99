#pragma once

#include <cmath>

#include "frpfrac/common.hpp"
#include "frpfrac/dual.hpp"
#include "frpfrac/kinematics.hpp"

namespace frpfrac {

/// Woven fiber reinforcement: stretch/shear stiffness plus a curvature
/// stiffness tensor c = c_par (l(x)l + m(x)m) + c_perp n(x)n built from the
/// current fiber directions.  Family weights carry the volume-fraction
/// convention: (1-zeta)/2 per family for a bidirectional weave, (1-zeta) and 0
/// for a unidirectional layup.  This is the single place the weighting enters;
/// stress, higher-order stress, driving forces and entropy are returned
/// pre-weighted, the energy of fiber_energy() is not.
struct FiberParams {
  double a = 79000.0;    // tensile stiffness [MPa]
  double b = 0.0;        // shear stiffness [MPa]
  double c_par = 16.46;  // in-plane bending stiffness [N]
  double c_perp = 16.46; // out-of-plane bending stiffness [N]
  double upsilon = 5e-6; // thermal expansion [1/K]
  double c_fib = 2.08;   // volumetric heat capacity [MPa/K]
  double theta0 = 293.0; // reference temperature [K]
  Vec3 L = Vec3::UnitX();
  Vec3 M = Vec3::UnitY();
  double wL = 0.235;     // family weight, default (1-0.53)/2
  double wM = 0.235;
  double a_gL = 0.001;   // degradation parameters of the two families
  double a_gM = 0.001;

  void validate() const {
    if (a < 0.0 || b < 0.0 || c_par < 0.0 || c_perp < 0.0)
      throw ConfigError("fiber: stiffness parameters must be non-negative");
    if (std::abs(L.norm() - 1.0) > 1e-10 || std::abs(M.norm() - 1.0) > 1e-10 || std::abs(L.dot(M)) > 1e-10)
      throw ConfigError("fiber: L and M must be orthonormal unit vectors");
  }
};

/// Third-order higher-order stress work-conjugate to the second deformation
/// gradient.  Zero whenever both bending stiffnesses vanish.
struct HigherOrderStress {
  Tensor3 P;
};

namespace detail {

/// Elastic fiber energy density from degraded measures; family weights
/// (wL, wM, shear (wL+wM)/2) applied inside.  Templated for duals.
template <class T>
T fiber_elastic_energy(const FiberMeasuresT<T>& fk, const T& theta, const FiberParams& p) {
  T eL = fk.lambdaLTilde - 1.0;
  T eM = fk.lambdaMTilde - 1.0;
  T psiL = 0.5 * p.a * eL * eL + p.a * p.upsilon * (theta - p.theta0) * eL;
  T psiM = 0.5 * p.a * eM * eM + p.a * p.upsilon * (theta - p.theta0) * eM;
  auto kappa_quad = [&](const V3<T>& k) {
    T kl = dot3(k, fk.lTilde);
    T km = dot3(k, fk.mTilde);
    T kn = dot3(k, fk.nTilde);
    return 0.5 * (p.c_par * (kl * kl + km * km) + p.c_perp * kn * kn);
  };
  psiL += kappa_quad(fk.kappaLTilde);
  psiM += kappa_quad(fk.kappaMTilde);
  T psiShear = p.b * fk.phiTilde * fk.phiTilde;
  return p.wL * psiL + p.wM * psiM + 0.5 * (p.wL + p.wM) * psiShear;
}

}  // namespace detail

/// Unweighted elastic + thermal fiber energy of the symmetric weave, as the
/// constitutive definition states it.
inline double fiber_energy(const FiberKinematics& fk, double theta, const FiberParams& p) {
  if (!(theta > 0.0)) throw InvalidState("fiber_energy: non-positive temperature");
  FiberParams q = p;
  q.wL = q.wM = 1.0;
  const double psi_e = detail::fiber_elastic_energy<double>(fk, theta, q);
  const double psi_th = 2.0 * p.c_fib * (theta - p.theta0 - theta * std::log(theta / p.theta0));
  return psi_e + psi_th;
}

/// Full fiber response at a quadrature point: weighted elastic energy, first
/// Piola stress P = dPsi/dF, the two vectors dPsi/dvL, dPsi/dvM generating the
/// higher-order stress, and the crack driving forces.
struct FiberResponse {
  double energy = 0.0;  // weighted elastic energy density
  Mat3 P = Mat3::Zero();
  Vec3 dvL = Vec3::Zero();  // P_iJK = dvL_i L_J L_K + dvM_i M_J M_K
  Vec3 dvM = Vec3::Zero();
  double HL = 0.0;
  double HM = 0.0;
};

namespace detail {

/// Dual-slot layout: F always, the direction-gradient vectors only when a
/// bending stiffness is active, the phase-field slots only when driving
/// forces are requested.
template <bool WithGrad, bool WithS>
FiberResponse evaluate_fiber_impl(const Mat3& F, const Vec3& vLv, const Vec3& vMv, double sL, double sM,
                                  double theta, const FiberParams& p) {
  constexpr int NV = 9 + (WithGrad ? 6 : 0) + (WithS ? 2 : 0);
  using D = Dual<NV>;
  std::array<D, 9> Fd;
  for (int i = 0; i < 9; ++i) Fd[i] = D::seed(F(i / 3, i % 3), i);
  V3<D> vL, vM;
  for (int i = 0; i < 3; ++i) {
    vL[i] = WithGrad ? D::seed(vLv[i], 9 + i) : D(vLv[i]);
    vM[i] = WithGrad ? D::seed(vMv[i], 12 + i) : D(vMv[i]);
  }
  constexpr int s_base = 9 + (WithGrad ? 6 : 0);
  const D sLd = WithS ? D::seed(sL, s_base) : D(sL);
  const D sMd = WithS ? D::seed(sM, s_base + 1) : D(sM);
  const auto fk = fiber_measures<D>(Fd, vL, vM, p.L, p.M, sLd, sMd, p.a_gL, p.a_gM);
  const D psi = fiber_elastic_energy<D>(fk, D(theta), p);

  FiberResponse r;
  r.energy = psi.v;
  for (int i = 0; i < 3; ++i)
    for (int J = 0; J < 3; ++J) r.P(i, J) = psi.d[i * 3 + J];
  if constexpr (WithGrad) {
    for (int i = 0; i < 3; ++i) {
      r.dvL[i] = psi.d[9 + i];
      r.dvM[i] = psi.d[12 + i];
    }
  }
  if constexpr (WithS) {
    r.HL = std::max(0.0, -psi.d[s_base]);
    r.HM = std::max(0.0, -psi.d[s_base + 1]);
  }
  return r;
}

}  // namespace detail

/// Response from the pre-contracted direction-gradient vectors
/// vL_i = gradF_iJK L_J L_K and vM_i = gradF_iJK M_J M_K.
inline FiberResponse evaluate_fiber(const Mat3& F, const Vec3& vL, const Vec3& vM, double sL, double sM,
                                    double theta, const FiberParams& p, bool with_driving = true) {
  FiberResponse r;
  if (p.wL == 0.0 && p.wM == 0.0) return r;
  const bool with_grad = p.c_par != 0.0 || p.c_perp != 0.0;
  if (with_grad) {
    return with_driving ? detail::evaluate_fiber_impl<true, true>(F, vL, vM, sL, sM, theta, p)
                        : detail::evaluate_fiber_impl<true, false>(F, vL, vM, sL, sM, theta, p);
  }
  return with_driving ? detail::evaluate_fiber_impl<false, true>(F, vL, vM, sL, sM, theta, p)
                      : detail::evaluate_fiber_impl<false, false>(F, vL, vM, sL, sM, theta, p);
}

inline FiberResponse evaluate_fiber(const Mat3& F, const Tensor3& gradF, double sL, double sM, double theta,
                                    const FiberParams& p, bool with_driving = true) {
  return evaluate_fiber(F, gradF.contract(p.L, p.L), gradF.contract(p.M, p.M), sL, sM, theta, p,
                        with_driving);
}

/// Kirchhoff stress of the fiber families, tau = (dPsi/dF) F^T, weighted.
inline Mat3 fiber_stress(const FiberKinematics& /*fk*/, const DeformationState& state, double theta,
                         const FiberParams& p, double sL, double sM) {
  FiberResponse r = evaluate_fiber(state.F, state.gradF, sL, sM, theta, p);
  return r.P * state.F.transpose();
}

inline HigherOrderStress fiber_higher_order_stress(const FiberKinematics& /*fk*/, const DeformationState& state,
                                                   const FiberParams& p, double sL, double sM, double theta) {
  FiberResponse r = evaluate_fiber(state.F, state.gradF, sL, sM, theta, p);
  HigherOrderStress hs;
  for (int i = 0; i < 3; ++i)
    for (int J = 0; J < 3; ++J)
      for (int K = 0; K < 3; ++K)
        hs.P(i, J, K) = r.dvL[i] * p.L[J] * p.L[K] + r.dvM[i] * p.M[J] * p.M[K];
  return hs;
}

/// (H_L, H_M) >= 0, weighted analogues of -w d(Psi_fib)/ds.
inline std::pair<double, double> fiber_driving_forces(const DeformationState& state, double theta,
                                                      const FiberParams& p, double sL, double sM) {
  FiberResponse r = evaluate_fiber(state.F, state.gradF, sL, sM, theta, p);
  return {r.HL, r.HM};
}

/// eta_fib = -d(weighted Psi_e + Psi_theta)/dtheta, analytic.
inline double fiber_entropy(const FiberKinematics& fk, double theta, const FiberParams& p) {
  const double dpsi_e =
      p.a * p.upsilon * (p.wL * (fk.lambdaLTilde - 1.0) + p.wM * (fk.lambdaMTilde - 1.0));
  return -dpsi_e + (p.wL + p.wM) * p.c_fib * std::log(theta / p.theta0);
}

}  // namespace frpfrac
