#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace frpfrac {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Third-order tensor A_{iJK}, e.g. the material gradient of the
/// deformation gradient.  Stored dense, index order (i,J,K).
struct Tensor3 {
  std::array<double, 27> a{};

  double& operator()(int i, int J, int K) { return a[(i * 3 + J) * 3 + K]; }
  double operator()(int i, int J, int K) const { return a[(i * 3 + J) * 3 + K]; }

  static Tensor3 Zero() { return Tensor3{}; }

  Tensor3& operator+=(const Tensor3& o) {
    for (int k = 0; k < 27; ++k) a[k] += o.a[k];
    return *this;
  }
  Tensor3 operator*(double c) const {
    Tensor3 r;
    for (int k = 0; k < 27; ++k) r.a[k] = a[k] * c;
    return r;
  }

  /// v_i = A_{iJK} b_J c_K
  Vec3 contract(const Vec3& b, const Vec3& c) const {
    Vec3 v = Vec3::Zero();
    for (int i = 0; i < 3; ++i)
      for (int J = 0; J < 3; ++J)
        for (int K = 0; K < 3; ++K) v[i] += (*this)(i, J, K) * b[J] * c[K];
    return v;
  }

  /// v_i = A_{iJK} B_{JK}
  Vec3 contract(const Mat3& B) const {
    Vec3 v = Vec3::Zero();
    for (int i = 0; i < 3; ++i)
      for (int J = 0; J < 3; ++J)
        for (int K = 0; K < 3; ++K) v[i] += (*this)(i, J, K) * B(J, K);
    return v;
  }

  double norm() const {
    double s = 0;
    for (double x : a) s += x * x;
    return std::sqrt(s);
  }
};

// ---------------------------------------------------------------------------
// Error types
// ---------------------------------------------------------------------------

struct SimulationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidState : SimulationError {
  using SimulationError::SimulationError;
};
struct InvertedElement : SimulationError {
  using SimulationError::SimulationError;
};
struct PlasticStateCorrupt : SimulationError {
  using SimulationError::SimulationError;
};
struct DegenerateFiber : SimulationError {
  using SimulationError::SimulationError;
};
struct YieldSurfaceDegenerate : SimulationError {
  using SimulationError::SimulationError;
};
struct ReturnMapDiverged : SimulationError {
  using SimulationError::SimulationError;
};
struct DegenerateGeometry : SimulationError {
  using SimulationError::SimulationError;
};
struct ConfigError : SimulationError {
  using SimulationError::SimulationError;
};
struct StepFailed : SimulationError {
  using SimulationError::SimulationError;
};

// ---------------------------------------------------------------------------
// Small utilities
// ---------------------------------------------------------------------------

/// Chunked parallel loop over [0,n).  Results must not depend on the
/// partitioning; callers merge per-index data in index order.
template <class F>
void parallel_for(std::size_t n, int threads, F&& f) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  std::size_t chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &f] {
      for (std::size_t i = lo; i < hi; ++i) f(i);
    });
  }
  for (auto& th : pool) th.join();
}

/// xorshift-based generator for reproducible property tests; independent of
/// the C++ library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0x9e3779b97f4a7c15ull) : state_(seed ? seed : 1) {}

  std::uint64_t next() {
    std::uint64_t x = state_;
    x ^= x << 13;
    x ^= x >> 7;
    x ^= x << 17;
    return state_ = x;
  }

  /// uniform in [0,1)
  double uniform() { return double(next() >> 11) * 0x1.0p-53; }

  /// uniform in [a,b)
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

 private:
  std::uint64_t state_;
};

}  // namespace frpfrac
