#pragma once

#include <algorithm>
#include <cmath>

#include "frpfrac/common.hpp"
#include "frpfrac/dual.hpp"

namespace frpfrac {

// ---------------------------------------------------------------------------
// Deformation state at a quadrature point
// ---------------------------------------------------------------------------

/// Deformation gradient, its material gradient and the spectral data of F.
/// Principal stretches are sorted descending; ties keep the original
/// eigen-solver order so that history pairing across steps is deterministic.
struct DeformationState {
  Mat3 F = Mat3::Identity();
  Tensor3 gradF;  // [i][J][K] = dF_iJ/dX_K
  double J = 1.0;
  Vec3 lambda = Vec3::Ones();
  std::array<Vec3, 3> n;  // spatial principal directions
  std::array<Vec3, 3> N;  // material principal directions
};

struct SpectralStretches {
  Vec3 lambda;
  std::array<Vec3, 3> n;
  std::array<Vec3, 3> N;
};

/// Spectral form F = sum_a lambda_a n_a (x) N_a via the symmetric
/// eigenproblem of F^T F.
inline SpectralStretches spectral_stretches(const Mat3& F) {
  if (!F.allFinite()) throw InvalidState("spectral_stretches: non-finite deformation gradient");
  if (F.determinant() <= 0.0) throw InvertedElement("spectral_stretches: det(F) <= 0");

  Eigen::SelfAdjointEigenSolver<Mat3> es(F.transpose() * F);
  const Vec3 ev = es.eigenvalues();
  const Mat3 V = es.eigenvectors();

  std::array<int, 3> order = {0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return ev[a] > ev[b]; });

  SpectralStretches s;
  for (int a = 0; a < 3; ++a) {
    s.lambda[a] = std::sqrt(std::max(ev[order[a]], 0.0));
    Vec3 Na = V.col(order[a]);
    // deterministic sign: largest-magnitude component positive
    int imax = 0;
    for (int i = 1; i < 3; ++i)
      if (std::abs(Na[i]) > std::abs(Na[imax])) imax = i;
    if (Na[imax] < 0.0) Na = -Na;
    s.N[a] = Na;
    s.n[a] = F * Na / s.lambda[a];
  }
  return s;
}

inline DeformationState make_deformation_state(const Mat3& F, const Tensor3& gradF = Tensor3::Zero()) {
  DeformationState st;
  st.F = F;
  st.gradF = gradF;
  st.J = F.determinant();
  SpectralStretches s = spectral_stretches(F);
  st.lambda = s.lambda;
  st.n = s.n;
  st.N = s.N;
  return st;
}

// ---------------------------------------------------------------------------
// Degradation function
// ---------------------------------------------------------------------------

/// g(s) = a_g((1-s)^3-(1-s)^2) - 2(1-s)^3 + 3(1-s)^2, with g(0)=1, g(1)=0.
/// Applied as an exponent on stretches.
template <class T>
T degradation(const T& s, double a_g) {
  T u = T(1.0) - s;
  T u2 = u * u;
  T u3 = u2 * u;
  return a_g * (u3 - u2) - 2.0 * u3 + 3.0 * u2;
}

inline double degradation_derivative(double s, double a_g) {
  double u = 1.0 - s;
  // dg/ds = -dg/du
  return -(a_g * (3.0 * u * u - 2.0 * u) - 6.0 * u * u + 6.0 * u);
}

/// lambda^{g(s)}
inline double degrade_stretch(double lambda, double s, double a_g) {
  if (!(lambda > 0.0)) throw InvalidState("degrade_stretch: stretch must be positive");
  if (s < 0.0 || s > 1.0) throw InvalidState("degrade_stretch: phase-field value outside [0,1]");
  return std::pow(lambda, degradation(s, a_g));
}

// ---------------------------------------------------------------------------
// Elastic split
// ---------------------------------------------------------------------------

/// Elastic part of the multiplicative split F = F^e F^p together with the
/// fracture-insensitive (degraded) stretch measures.  The degraded Jacobian
/// J^e-tilde switches to the undegraded value in net compression.
struct ElasticSplit {
  Mat3 Fe = Mat3::Identity();
  double Je = 1.0;
  Vec3 lambdaE = Vec3::Ones();
  Vec3 lambdaEIso = Vec3::Ones();
  Vec3 lambdaETilde = Vec3::Ones();
  Vec3 lambdaEIsoTilde = Vec3::Ones();
  double JeTilde = 1.0;
  bool tension = false;  // prod(lambdaE) > 1
  double s = 0.0;        // matrix phase-field value the split was built with
  double g = 1.0;        // degradation exponent used
  std::array<Vec3, 3> n;
  std::array<Vec3, 3> N;
};

/// Split from known elastic principal stretches and triads.  Used directly by
/// the plastic corrector, which works in the fixed trial principal frame.
inline ElasticSplit elastic_split_from_stretches(const Vec3& lambdaE, const std::array<Vec3, 3>& n,
                                                 const std::array<Vec3, 3>& N, double s, double a_g) {
  ElasticSplit es;
  es.lambdaE = lambdaE;
  es.n = n;
  es.N = N;
  es.Je = lambdaE[0] * lambdaE[1] * lambdaE[2];
  if (!(es.Je > 0.0)) throw InvertedElement("elastic_split: non-positive elastic Jacobian");
  const double Jm13 = std::pow(es.Je, -1.0 / 3.0);
  es.s = s;
  es.g = degradation(s, a_g);
  es.tension = es.Je > 1.0;
  es.Fe.setZero();
  for (int a = 0; a < 3; ++a) {
    es.lambdaEIso[a] = Jm13 * lambdaE[a];
    es.lambdaETilde[a] = std::pow(lambdaE[a], es.g);
    es.lambdaEIsoTilde[a] = std::pow(es.lambdaEIso[a], es.g);
    es.Fe += lambdaE[a] * n[a] * N[a].transpose();
  }
  es.JeTilde = es.tension ? es.lambdaETilde[0] * es.lambdaETilde[1] * es.lambdaETilde[2] : es.Je;
  return es;
}

inline ElasticSplit elastic_split(const DeformationState& state, const Mat3& Fp, double s, double a_g) {
  const double Jp = Fp.determinant();
  if (!(Jp > 0.0) || !Fp.allFinite())
    throw PlasticStateCorrupt("elastic_split: singular plastic deformation map");
  if (Jp < 1.0 - 1e-9) throw PlasticStateCorrupt("elastic_split: det(Fp) < 1");
  const Mat3 Fe = state.F * Fp.inverse();
  SpectralStretches sp = spectral_stretches(Fe);
  return elastic_split_from_stretches(sp.lambda, sp.n, sp.N, s, a_g);
}

// ---------------------------------------------------------------------------
// Fiber kinematics
// ---------------------------------------------------------------------------

namespace detail {

template <class T>
using V3 = std::array<T, 3>;

template <class T>
T dot3(const V3<T>& a, const V3<T>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
template <class T>
V3<T> cross3(const V3<T>& a, const V3<T>& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
template <class T>
V3<T> scale3(const V3<T>& a, const T& c) {
  return {a[0] * c, a[1] * c, a[2] * c};
}

/// x^y for positive x with derivatives through base and exponent
inline double pow_general(double x, double y) { return std::pow(x, y); }
template <int N>
Dual<N> pow_general(const Dual<N>& x, const Dual<N>& y) {
  return exp(y * log(x));
}

}  // namespace detail

/// All fiber deformation measures, templated on the scalar type so that the
/// same code path yields values (double) and exact derivatives (Dual).
/// The material gradient of F enters only through the projected vectors
/// vL_i = gradF_iJK L_J L_K and vM_i = gradF_iJK M_J M_K.
template <class T>
struct FiberMeasuresT {
  T lambdaL, lambdaM;
  T phi;
  detail::V3<T> kappaL, kappaM;
  detail::V3<T> lTilde, mTilde, nTilde;  // nTilde re-normalized after the cross product
  T gL, gM;
  T lambdaLTilde, lambdaMTilde;
  T phiTilde;
  detail::V3<T> kappaLTilde, kappaMTilde;
};

template <class T>
FiberMeasuresT<T> fiber_measures(const std::array<T, 9>& F, const detail::V3<T>& vL, const detail::V3<T>& vM,
                                 const Vec3& L, const Vec3& M, const T& sL, const T& sM, double a_gL,
                                 double a_gM) {
  using detail::V3;
  using std::acos;
  using std::sqrt;
  using std::tan;
  FiberMeasuresT<T> fk;

  V3<T> l{}, m{};
  for (int i = 0; i < 3; ++i)
    for (int J = 0; J < 3; ++J) {
      l[i] += F[i * 3 + J] * L[J];
      m[i] += F[i * 3 + J] * M[J];
    }
  fk.lambdaL = sqrt(detail::dot3(l, l));
  fk.lambdaM = sqrt(detail::dot3(m, m));
  if (value_of(fk.lambdaL) < 1e-12 || value_of(fk.lambdaM) < 1e-12)
    throw DegenerateFiber("fiber_measures: fiber stretch collapsed to zero");
  fk.lTilde = detail::scale3(l, T(1.0) / fk.lambdaL);
  fk.mTilde = detail::scale3(m, T(1.0) / fk.lambdaM);

  T d = detail::dot3(fk.lTilde, fk.mTilde);
  if (value_of(d) > 1.0) d = T(1.0);
  if (value_of(d) < -1.0) d = T(-1.0);
  fk.phi = acos(d) - 0.5 * M_PI;
  if (std::abs(value_of(fk.phi)) >= 0.5 * M_PI - 1e-6)
    throw DegenerateFiber("fiber_measures: fiber shear angle at +-pi/2");

  // kappa = (v - (ltil.v) ltil) / lambda^2
  {
    T c = detail::dot3(fk.lTilde, vL);
    T inv2 = T(1.0) / (fk.lambdaL * fk.lambdaL);
    for (int i = 0; i < 3; ++i) fk.kappaL[i] = (vL[i] - c * fk.lTilde[i]) * inv2;
    c = detail::dot3(fk.mTilde, vM);
    inv2 = T(1.0) / (fk.lambdaM * fk.lambdaM);
    for (int i = 0; i < 3; ++i) fk.kappaM[i] = (vM[i] - c * fk.mTilde[i]) * inv2;
  }

  V3<T> nraw = detail::cross3(fk.lTilde, fk.mTilde);
  T nn = sqrt(detail::dot3(nraw, nraw));
  fk.nTilde = detail::scale3(nraw, T(1.0) / nn);

  fk.gL = degradation(sL, a_gL);
  fk.gM = degradation(sM, a_gM);
  fk.lambdaLTilde = (value_of(fk.lambdaL) > 1.0) ? detail::pow_general(fk.lambdaL, fk.gL) : fk.lambdaL;
  fk.lambdaMTilde = (value_of(fk.lambdaM) > 1.0) ? detail::pow_general(fk.lambdaM, fk.gM) : fk.lambdaM;
  fk.phiTilde = fk.gL * fk.gM * tan(fk.phi);
  fk.kappaLTilde = detail::scale3(fk.kappaL, fk.gL);
  fk.kappaMTilde = detail::scale3(fk.kappaM, fk.gM);
  return fk;
}

/// Double-valued fiber kinematics record (values only).
using FiberKinematics = FiberMeasuresT<double>;

inline FiberKinematics fiber_kinematics(const DeformationState& state, const Vec3& L, const Vec3& M, double sL,
                                        double sM, double a_gL, double a_gM) {
  std::array<double, 9> F;
  for (int i = 0; i < 3; ++i)
    for (int J = 0; J < 3; ++J) F[i * 3 + J] = state.F(i, J);
  detail::V3<double> vL{}, vM{};
  {
    Vec3 a = state.gradF.contract(L, L), b = state.gradF.contract(M, M);
    for (int i = 0; i < 3; ++i) {
      vL[i] = a[i];
      vM[i] = b[i];
    }
  }
  return fiber_measures<double>(F, vL, vM, L, M, sL, sM, a_gL, a_gM);
}

}  // namespace frpfrac
