#pragma once

#include <cmath>

#include "frpfrac/common.hpp"
#include "frpfrac/phase_field.hpp"

namespace frpfrac {

/// Conductivities stored in the working unit system N/(s K); the config
/// loader converts from W/(m K), which maps one-to-one in N-mm-s-K units.
struct ThermalParams {
  double K_mat = 0.25;   // [N/(s K)]
  double K_fib = 0.25;
  double K_conv = 0.0;   // crack convection parameter
  double theta_ref = 293.0;

  void validate() const {
    if (K_mat < 0.0 || K_fib < 0.0 || K_conv < 0.0)
      throw ConfigError("thermal: conductivities must be non-negative");
  }
};

/// Duhamel heat flux Q = -K(F,s) grad(theta) with the crack-degraded
/// pulled-back conductivity tensor.
inline Vec3 heat_flux(const Mat3& F, const Vec3& grad_theta, double s, const ThermalParams& tp, double zeta) {
  if (!(F.determinant() > 0.0)) throw InvertedElement("heat_flux: det(F) <= 0");
  const double K = zeta * tp.K_mat + (1.0 - zeta) * tp.K_fib;
  const double k = K * (1.0 - s) + tp.K_conv * s;
  const Mat3 Finv = F.inverse();
  return -k * (Finv * Finv.transpose()) * grad_theta;
}

/// Discrete internal dissipation per unit reference volume, in the practical
/// form where the plastic work is expressed through the resistance force:
/// nu_p J (1-f) r^p alpha_dot + nu_fmat H s_dot + nu_ffib (H_L sL_dot + H_M sM_dot).
inline double internal_dissipation(double J, double f, double rp, double alpha_dot, double H, double s_dot,
                                   double HL, double sL_dot, double HM, double sM_dot,
                                   const FractureParams& fp) {
  return fp.nu_pmat * J * (1.0 - f) * rp * alpha_dot + fp.nu_fmat * H * s_dot +
         fp.nu_ffib * (HL * sL_dot + HM * sM_dot);
}

}  // namespace frpfrac
