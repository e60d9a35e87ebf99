#pragma once

#include <atomic>
#include <cmath>
#include <cstdio>

#include "frpfrac/common.hpp"
#include "frpfrac/kinematics.hpp"
#include "frpfrac/matrix_material.hpp"

namespace frpfrac {

/// GTN porous plasticity with temperature-scaled saturation hardening and
/// viscous (penalty) regularization of the plastic multiplier.
struct PlasticParams {
  double y0_ref = 22.0, y1_ref = 56.8, y2_ref = 30.0;  // yield stresses at theta_ref [MPa]
  double om_p1 = 1.0, om_p2 = 115.0;                   // saturation exponents [-]
  double om_t0 = 0.4, om_t1 = 0.4, om_t2 = 0.4;        // thermal softening [1/K]
  double eta_p = 5000.0;                               // viscosity [MPa s]
  double n_p = 1.0;                                    // viscous exponent [-]
  double l_p = 3.1;                                    // plastic length scale [mm]
  double f0 = 0.01;                                    // initial porosity [-]
  double q1 = 3.0, q2 = 0.8;                           // GTN fit parameters [-]
  double theta_ref = 293.0;                            // [K]

  void validate() const {
    if (!(eta_p > 0.0)) throw ConfigError("plastic: viscosity must be positive");
    if (f0 < 0.0 || f0 >= 1.0) throw ConfigError("plastic: initial porosity outside [0,1)");
  }
};

/// Quadrature-point plastic state carried between committed time steps.
struct PlasticHistory {
  Mat3 Fp = Mat3::Identity();
  double Jp = 1.0;
  double alpha = 0.0;  // local bookkeeping copy of the equivalent plastic strain
  double f = 0.0;      // void volume fraction
  double rp = 0.0;     // dissipative resistance interpolated at the point [MPa]
};

namespace detail {
inline std::atomic<bool> hardening_clamp_warned{false};
}

/// Temperature-scaled yield stress components, clamped at zero.  The Table-1
/// softening slope drives them negative a few kelvin above theta_ref.
inline double yield_component(double y_ref, double om_t, double theta, const PlasticParams& p) {
  double y = y_ref * (1.0 - om_t * (theta - p.theta_ref));
  if (y < 0.0) {
    if (!detail::hardening_clamp_warned.exchange(true))
      std::fprintf(stderr, "warning: thermal scaling drove a yield stress negative; clamping at zero\n");
    y = 0.0;
  }
  return y;
}

inline double hardening_y0(double theta, const PlasticParams& p) {
  return yield_component(p.y0_ref, p.om_t0, theta, p);
}

/// Saturation-type hardening y(alpha,theta).
inline double hardening(double alpha, double theta, const PlasticParams& p) {
  const double y0 = yield_component(p.y0_ref, p.om_t0, theta, p);
  const double y1 = yield_component(p.y1_ref, p.om_t1, theta, p);
  const double y2 = yield_component(p.y2_ref, p.om_t2, theta, p);
  return y0 + y1 * std::exp(p.om_p1 * alpha) + y2 * (1.0 - std::exp(-p.om_p2 * alpha));
}

// ---------------------------------------------------------------------------
// Effective stress
// ---------------------------------------------------------------------------

namespace detail {

inline double gtn_function(double sbar, double sigma_eq, double pressure, double f, const PlasticParams& p) {
  const double q1f = p.q1 * f;
  const double arg = 1.5 * p.q2 * pressure / sbar;
  return sigma_eq * sigma_eq / (sbar * sbar) + 2.0 * q1f * std::cosh(arg) - (1.0 + q1f * q1f);
}

inline double gtn_function_dsbar(double sbar, double sigma_eq, double pressure, double f,
                                 const PlasticParams& p) {
  const double q1f = p.q1 * f;
  const double c = 1.5 * p.q2;
  return -2.0 * sigma_eq * sigma_eq / (sbar * sbar * sbar) -
         2.0 * q1f * std::sinh(c * pressure / sbar) * c * pressure / (sbar * sbar);
}

}  // namespace detail

/// Positive root of the GTN function, by bracketing plus safeguarded Newton.
/// The function is even in the pressure and monotone decreasing in sbar on
/// the physical branch.
inline double effective_stress_scalar(double sigma_eq, double pressure, double f, const PlasticParams& p) {
  const double scale = std::max(sigma_eq, std::abs(pressure));
  if (p.q1 * f <= 0.0) return sigma_eq;
  if (scale < 1e-12) return 0.0;

  double lo = std::max(sigma_eq, 1e-12 * scale);
  double glo = detail::gtn_function(lo, sigma_eq, pressure, f, p);
  while (glo < 0.0) {  // root below sigma_eq happens for large q1 f
    lo *= 0.5;
    if (lo < 1e-14 * scale) throw YieldSurfaceDegenerate("effective_stress: no bracket below sigma_eq");
    glo = detail::gtn_function(lo, sigma_eq, pressure, f, p);
  }
  double hi = std::max(2.0 * lo, scale);
  double ghi = detail::gtn_function(hi, sigma_eq, pressure, f, p);
  int guard = 0;
  while (ghi >= 0.0) {
    hi *= 2.0;
    if (++guard > 200) throw YieldSurfaceDegenerate("effective_stress: yield function has no positive root");
    ghi = detail::gtn_function(hi, sigma_eq, pressure, f, p);
  }

  double x = 0.5 * (lo + hi);
  double best_x = x, best_g = std::abs(detail::gtn_function(x, sigma_eq, pressure, f, p));
  for (int it = 0; it < 200; ++it) {
    const double g = detail::gtn_function(x, sigma_eq, pressure, f, p);
    if (std::abs(g) < best_g) {
      best_g = std::abs(g);
      best_x = x;
    }
    if (std::abs(g) < 1e-13) return x;
    if (g > 0.0)
      lo = x;
    else
      hi = x;
    const double dg = detail::gtn_function_dsbar(x, sigma_eq, pressure, f, p);
    double xn = x - g / dg;
    if (!(xn > lo) || !(xn < hi)) xn = 0.5 * (lo + hi);
    if (xn == x) break;  // interval collapsed to the roundoff floor
    x = xn;
  }
  if (best_g < 1e-10) return best_x;
  throw YieldSurfaceDegenerate("effective_stress: root solve stalled");
}

inline double von_mises_pressure(const Mat3& tau, double J, double& sigma_eq, double& pressure) {
  const Mat3 sigma = tau / J;
  pressure = sigma.trace() / 3.0;
  const Mat3 dev = sigma - pressure * Mat3::Identity();
  sigma_eq = std::sqrt(1.5) * dev.norm();
  return sigma_eq;
}

inline double effective_stress(const Mat3& tau_mat, double J, double f, const PlasticParams& p) {
  if (f < p.f0 - 1e-12 || f >= 1.0) throw InvalidState("effective_stress: void fraction out of range");
  double sigma_eq, pressure;
  von_mises_pressure(tau_mat, J, sigma_eq, pressure);
  return effective_stress_scalar(sigma_eq, pressure, f, p);
}

inline double yield(double sigma_bar, double rp) { return sigma_bar - rp; }

/// Flow direction in principal stress space, n_a = dPhi/dsigma_a, via the
/// implicit-function derivative of the GTN root.
inline Vec3 gtn_flow_direction(const Vec3& sigma, double sbar, double f, const PlasticParams& p) {
  if (sbar < 1e-12) return Vec3::Zero();
  const double pressure = (sigma[0] + sigma[1] + sigma[2]) / 3.0;
  const double sigma_eq =
      std::sqrt(1.5 * ((sigma[0] - pressure) * (sigma[0] - pressure) + (sigma[1] - pressure) * (sigma[1] - pressure) +
                       (sigma[2] - pressure) * (sigma[2] - pressure)));
  const double q1f = p.q1 * f;
  const double c = 1.5 * p.q2;
  const double dUps_dsbar = detail::gtn_function_dsbar(sbar, sigma_eq, pressure, f, p);
  Vec3 n;
  for (int a = 0; a < 3; ++a) {
    const double dUps_dsig = 3.0 * (sigma[a] - pressure) / (sbar * sbar) +
                             2.0 * q1f * std::sinh(c * pressure / sbar) * c / (3.0 * sbar);
    n[a] = -dUps_dsig / dUps_dsbar;
  }
  return n;
}

/// d^p = lambda_p dPhi/dsigma (spatial principal frame) and
/// alpha_dot = lambda_p / (1-f).
inline std::pair<Mat3, double> plastic_rate_terms(double lambda_p, const Vec3& nflow,
                                                  const std::array<Vec3, 3>& n_spatial, double f) {
  Mat3 dp = Mat3::Zero();
  for (int a = 0; a < 3; ++a) dp += lambda_p * nflow[a] * n_spatial[a] * n_spatial[a].transpose();
  return {dp, lambda_p / (1.0 - f)};
}

// ---------------------------------------------------------------------------
// Return map
// ---------------------------------------------------------------------------

struct ReturnMapResult {
  PlasticHistory next;
  ElasticSplit split;
  double lambda_p = 0.0;
  Vec3 nflow = Vec3::Zero();
  double sigma_bar = 0.0;
  double Phi = 0.0;  // yield value at the corrected state
  Vec3 tau_dev = Vec3::Zero(), tau_vol = Vec3::Zero();  // principal components
};

namespace detail {

struct CorrectorState {
  Vec3 lambdaE;
  double Je, Jp, f, sigma_bar, Phi;
  Vec3 sigma, tau_dev, tau_vol, mflow;
};

}  // namespace detail

/// Exponential-map plastic corrector.  The trial principal frame is kept; the
/// flow components n_a and the multiplier are the unknowns of the internal
/// Newton solve, with the flow re-derived from the current stress at every
/// iteration.
inline ReturnMapResult return_map(const Mat3& F_next, const PlasticHistory& hist_n, double rp_next, double theta,
                                  double dt, const PlasticParams& pp, const MatrixParams& pm, double s,
                                  double a_g) {
  if (!(dt > 0.0)) throw InvalidState("return_map: non-positive time step");
  const double J = F_next.determinant();
  if (!(J > 0.0)) throw InvertedElement("return_map: det(F) <= 0");
  if (!(hist_n.Fp.determinant() > 0.0)) throw PlasticStateCorrupt("return_map: singular plastic map");

  const Mat3 Fe_tr = F_next * hist_n.Fp.inverse();
  SpectralStretches tr = spectral_stretches(Fe_tr);

  auto eval = [&](const Vec3& lambdaE) {
    detail::CorrectorState c;
    c.lambdaE = lambdaE;
    ElasticSplit sp = elastic_split_from_stretches(lambdaE, tr.n, tr.N, s, a_g);
    c.Je = sp.Je;
    c.Jp = J / c.Je;
    c.f = std::max(pp.f0, 1.0 - (1.0 - pp.f0) / c.Jp);
    matrix_stress_principal(sp, theta, pm, c.tau_dev, c.tau_vol);
    c.sigma = (c.tau_dev + c.tau_vol) / J;
    double sigma_eq, pressure;
    {
      const double pr = (c.sigma[0] + c.sigma[1] + c.sigma[2]) / 3.0;
      pressure = pr;
      sigma_eq = std::sqrt(1.5 * ((c.sigma[0] - pr) * (c.sigma[0] - pr) + (c.sigma[1] - pr) * (c.sigma[1] - pr) +
                                  (c.sigma[2] - pr) * (c.sigma[2] - pr)));
    }
    c.sigma_bar = effective_stress_scalar(sigma_eq, pressure, c.f, pp);
    c.Phi = yield(c.sigma_bar, rp_next);
    c.mflow = gtn_flow_direction(c.sigma, c.sigma_bar, c.f, pp);
    return c;
  };

  ReturnMapResult res;
  detail::CorrectorState ctr = eval(tr.lambda);

  if (ctr.Phi <= 0.0) {
    res.next = hist_n;
    res.next.Jp = hist_n.Fp.determinant();
    res.next.f = std::max(pp.f0, 1.0 - (1.0 - pp.f0) / res.next.Jp);
    res.next.rp = rp_next;
    res.split = elastic_split_from_stretches(tr.lambda, tr.n, tr.N, s, a_g);
    res.sigma_bar = ctr.sigma_bar;
    res.Phi = ctr.Phi;
    res.tau_dev = ctr.tau_dev;
    res.tau_vol = ctr.tau_vol;
    return res;
  }

  // separate near-coincident trial stretches before the corrector
  Vec3 ltr = tr.lambda;
  for (int k = 1; k < 3; ++k)
    if (ltr[k] > ltr[k - 1] * (1.0 - 1e-9)) ltr[k] = ltr[k - 1] * (1.0 - 1e-9);

  const double sscale = std::max(1.0, ctr.sigma_bar);
  Eigen::Vector4d x;
  x << 0.0, ctr.mflow[0], ctr.mflow[1], ctr.mflow[2];

  auto residual = [&](const Eigen::Vector4d& xv, detail::CorrectorState& cs) {
    const double lp = std::max(0.0, xv[0]);
    Vec3 lam;
    for (int a = 0; a < 3; ++a) lam[a] = ltr[a] * std::exp(-dt * lp * xv[1 + a]);
    cs = eval(lam);
    Eigen::Vector4d r;
    const double phi_pos = std::max(0.0, cs.Phi);
    r[0] = (std::pow(phi_pos, pp.n_p) - pp.eta_p * lp) / sscale;
    for (int a = 0; a < 3; ++a) r[1 + a] = xv[1 + a] - cs.mflow[a];
    return r;
  };

  detail::CorrectorState cs;
  Eigen::Vector4d r = residual(x, cs);
  double rn = r.lpNorm<Eigen::Infinity>();
  const double tol = 1e-13;  // sscale-relative; keeps |Phi - eta lambda| well below 1e-8
  int it = 0;
  for (; it < 50 && rn > tol; ++it) {
    Eigen::Matrix4d Jac;
    for (int j = 0; j < 4; ++j) {
      Eigen::Vector4d xp = x;
      const double h = 1e-7 * (1.0 + std::abs(x[j]));
      xp[j] += h;
      detail::CorrectorState dummy;
      Jac.col(j) = (residual(xp, dummy) - r) / h;
    }
    Eigen::Vector4d dx = Jac.fullPivLu().solve(-r);
    double step = 1.0;
    for (int cut = 0; cut < 12; ++cut) {
      Eigen::Vector4d xn = x + step * dx;
      xn[0] = std::max(0.0, xn[0]);
      detail::CorrectorState cn;
      Eigen::Vector4d rn_vec = residual(xn, cn);
      const double rnn = rn_vec.lpNorm<Eigen::Infinity>();
      if (rnn < rn || cut == 11) {
        x = xn;
        r = rn_vec;
        cs = cn;
        rn = rnn;
        break;
      }
      step *= 0.5;
    }
  }
  if (rn > 50.0 * tol) throw ReturnMapDiverged("return_map: internal Newton did not converge");

  const double lambda_p = std::max(0.0, x[0]);
  Vec3 lamE;
  for (int a = 0; a < 3; ++a) lamE[a] = ltr[a] * std::exp(-dt * lambda_p * x[1 + a]);

  res.split = elastic_split_from_stretches(lamE, tr.n, tr.N, s, a_g);
  Mat3 Fe = res.split.Fe;
  res.next.Fp = Fe.inverse() * F_next;
  res.next.Jp = res.next.Fp.determinant();
  res.next.f = std::max(pp.f0, 1.0 - (1.0 - pp.f0) / res.next.Jp);
  res.next.alpha = hist_n.alpha + dt * lambda_p / (1.0 - res.next.f);
  res.next.rp = rp_next;
  res.lambda_p = lambda_p;
  res.nflow = Vec3(x[1], x[2], x[3]);
  res.sigma_bar = cs.sigma_bar;
  res.Phi = cs.Phi;
  res.tau_dev = cs.tau_dev;
  res.tau_vol = cs.tau_vol;
  return res;
}

}  // namespace frpfrac
