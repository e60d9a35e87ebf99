#pragma once

#include <cmath>
#include <vector>

#include "frpfrac/common.hpp"
#include "frpfrac/kinematics.hpp"

namespace frpfrac {

/// Ogden-type thermoelastic polymer matrix.  Units: N-mm-s-K, stresses and
/// energy densities in MPa.
struct MatrixParams {
  std::vector<double> mu{1630.0};     // shear pairs [MPa]
  std::vector<double> alpha_exp{2.0};  // shear exponents [-]
  double kappa = 6250.0;               // bulk modulus [MPa]
  double beta = -2.0;                  // bulk exponent [-]
  double eps = 106e-6;                 // thermal expansion [1/K]
  double gamma = 1.0;                  // expansion exponent [-]
  double theta0 = 293.0;               // reference temperature [K]
  double c_mat = 1.86;                 // volumetric heat capacity [MPa/K]
  double zeta = 0.53;                  // matrix volume fraction [-]

  void validate() const {
    if (!(kappa > 0.0)) throw ConfigError("matrix: bulk modulus must be positive");
    if (zeta < 0.0 || zeta > 1.0) throw ConfigError("matrix: volume fraction outside [0,1]");
    if (mu.empty() || mu.size() != alpha_exp.size())
      throw ConfigError("matrix: need at least one (mu, alpha) Ogden pair");
  }
};

namespace detail {

inline double psi_vol(double Jt, double theta, const MatrixParams& p) {
  return p.kappa / (p.beta * p.beta) * (p.beta * std::log(Jt) + std::pow(Jt, -p.beta) - 1.0) -
         3.0 * p.eps * p.kappa / p.gamma * (theta - p.theta0) * (std::pow(Jt, p.gamma) - 1.0);
}

inline double psi_vol_d(double Jt, double theta, const MatrixParams& p) {
  return p.kappa / p.beta * (1.0 - std::pow(Jt, -p.beta)) / Jt -
         3.0 * p.eps * p.kappa * (theta - p.theta0) * std::pow(Jt, p.gamma - 1.0);
}

}  // namespace detail

/// Isochoric + volumetric + purely thermal stored energy, evaluated on the
/// degraded stretch measures.  The zeta volume-fraction weighting is applied
/// by the caller.
inline double matrix_energy(const ElasticSplit& sp, double theta, const MatrixParams& p) {
  if (!(sp.JeTilde > 0.0)) throw InvertedElement("matrix_energy: non-positive degraded Jacobian");
  if (!(theta > 0.0)) throw InvalidState("matrix_energy: non-positive temperature");
  double iso = 0.0;
  for (std::size_t b = 0; b < p.mu.size(); ++b)
    for (int a = 0; a < 3; ++a)
      iso += p.mu[b] / p.alpha_exp[b] * (std::pow(sp.lambdaEIsoTilde[a], p.alpha_exp[b]) - 1.0);
  const double vol = detail::psi_vol(sp.JeTilde, theta, p);
  const double th = p.c_mat * (theta - p.theta0 - theta * std::log(theta / p.theta0));
  return iso + vol + th;
}

/// Principal Kirchhoff stress components (deviatoric, volumetric), already
/// weighted by zeta.  tau_a = zeta lambda_a dPsi/dlambda_a.
inline void matrix_stress_principal(const ElasticSplit& sp, double theta, const MatrixParams& p, Vec3& tau_dev,
                                    Vec3& tau_vol) {
  if (!(sp.JeTilde > 0.0)) throw InvertedElement("matrix_stress: non-positive degraded Jacobian");
  Vec3 t;
  for (int a = 0; a < 3; ++a) {
    double s = 0.0;
    for (std::size_t b = 0; b < p.mu.size(); ++b) s += p.mu[b] * std::pow(sp.lambdaEIsoTilde[a], p.alpha_exp[b]);
    t[a] = sp.g * s;
  }
  const double tmean = (t[0] + t[1] + t[2]) / 3.0;
  const double dvol = detail::psi_vol_d(sp.JeTilde, theta, p);
  const double tv = sp.tension ? sp.g * sp.JeTilde * dvol : sp.Je * dvol;
  for (int a = 0; a < 3; ++a) {
    tau_dev[a] = p.zeta * (t[a] - tmean);
    tau_vol[a] = p.zeta * tv;
  }
}

/// Kirchhoff stress tensors tau = sum_a tau_a n_a (x) n_a.
inline std::pair<Mat3, Mat3> matrix_kirchhoff_stress(const ElasticSplit& sp, double theta,
                                                     const MatrixParams& p) {
  Vec3 td, tv;
  matrix_stress_principal(sp, theta, p, td, tv);
  Mat3 dev = Mat3::Zero(), vol = Mat3::Zero();
  for (int a = 0; a < 3; ++a) {
    const Mat3 nn = sp.n[a] * sp.n[a].transpose();
    dev += td[a] * nn;
    vol += tv[a] * nn;
  }
  return {dev, vol};
}

/// eta_mat = -zeta d(Psi_e + Psi_theta)/dtheta, analytic.
inline double matrix_entropy(const ElasticSplit& sp, double theta, const MatrixParams& p) {
  return p.zeta * (3.0 * p.eps * p.kappa / p.gamma * (std::pow(sp.JeTilde, p.gamma) - 1.0) +
                   p.c_mat * std::log(theta / p.theta0));
}

/// Crack driving force H = -zeta dPsi_e/ds >= 0, through the degradation
/// exponent: d(lambda^g)/ds = lambda^g ln(lambda) g'(s).
inline double matrix_driving_force(const ElasticSplit& sp, double theta, const MatrixParams& p, double a_g) {
  const double gp = degradation_derivative(sp.s, a_g);
  double diso = 0.0;
  for (int a = 0; a < 3; ++a) {
    double s = 0.0;
    for (std::size_t b = 0; b < p.mu.size(); ++b) s += p.mu[b] * std::pow(sp.lambdaEIsoTilde[a], p.alpha_exp[b]);
    diso += s * std::log(sp.lambdaEIso[a]);
  }
  diso *= gp;
  double dvol = 0.0;
  if (sp.tension)
    dvol = detail::psi_vol_d(sp.JeTilde, theta, p) * sp.JeTilde * std::log(sp.Je) * gp;
  return std::max(0.0, -p.zeta * (diso + dvol));
}

}  // namespace frpfrac
