#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "frpfrac/common.hpp"

namespace frpfrac {

/// Fracture parameters of the three crack phase-fields (matrix, fiber L,
/// fiber M).  Critical energies in N/mm, viscosities in MPa s, lengths in mm.
struct FractureParams {
  double gce = 500.0, gcp = 50.0;  // elastic / plastic matrix critical energies
  double om_f = 3.0;               // saturation exponent of g_c(alpha)
  double gcL = 500.0, gcM = 500.0;
  double lf = 3.1, lfL = 3.1, lfM = 3.1;
  double eta_f = 1e-7, eta_fL = 1e-7, eta_fM = 1e-7;
  double a_g = 0.001, a_gL = 0.001, a_gM = 0.001;
  double nu_pmat = 0.9, nu_fmat = 0.9, nu_ffib = 0.9;
  bool healing = false;        // chi == 1 everywhere (KKT gate disabled)
  double pin_threshold = 0.99; // nodes beyond this are pinned at 1

  void validate() const {
    if (!(lf > 0.0) || !(lfL > 0.0) || !(lfM > 0.0))
      throw ConfigError("fracture: length scales must be positive");
    if (!(eta_f > 0.0) || !(eta_fL > 0.0) || !(eta_fM > 0.0))
      throw ConfigError("fracture: viscosities must be positive");
  }
};

/// Nodal phase-field coefficients with per-node irreversibility flags.
struct PhaseFieldState {
  Eigen::VectorXd s, sL, sM;
  std::vector<std::uint8_t> broken_s, broken_sL, broken_sM;

  void resize(int n) {
    s = Eigen::VectorXd::Zero(n);
    sL = Eigen::VectorXd::Zero(n);
    sM = Eigen::VectorXd::Zero(n);
    broken_s.assign(n, 0);
    broken_sL.assign(n, 0);
    broken_sM.assign(n, 0);
  }
};

/// Regularized crack surface density (s^2 + lf^2 |grad s|^2) / (2 lf).
inline double crack_density(double s, const Vec3& grad_s, double lf) {
  return (s * s + lf * lf * grad_s.squaredNorm()) / (2.0 * lf);
}

/// g_c(alpha) = g_cp + g_ce exp(-om_f alpha)
inline double gc_matrix(double alpha, const FractureParams& fp) {
  return fp.gcp + fp.gce * std::exp(-fp.om_f * alpha);
}

inline double gc_matrix_dalpha(double alpha, const FractureParams& fp) {
  return -fp.om_f * fp.gce * std::exp(-fp.om_f * alpha);
}

/// KKT switch: the phase-field evolves only where the driving force exceeds
/// the crack resistance.
inline bool threshold_switch(double H, double r_f) { return H - r_f > 0.0; }

}  // namespace frpfrac
