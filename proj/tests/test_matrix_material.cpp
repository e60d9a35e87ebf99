#include <catch2/catch_amalgamated.hpp>

#include "frpfrac/matrix_material.hpp"

using namespace frpfrac;

namespace {

MatrixParams table_params() {
  MatrixParams p;
  p.mu = {1630.4};
  p.alpha_exp = {2.0};
  p.kappa = 6250.0;
  p.beta = -2.0;
  p.eps = 106e-6;
  p.gamma = 1.0;
  p.theta0 = 293.0;
  p.c_mat = 1.86;
  p.zeta = 0.53;
  return p;
}

Mat3 random_F(Rng& rng, double spread = 0.3) {
  for (;;) {
    Mat3 F;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) F(i, j) = (i == j ? 1.0 : 0.0) + rng.uniform(-spread, spread);
    if (F.determinant() > 0.2) return F;
  }
}

double energy_of_F(const Mat3& F, double theta, double s, const MatrixParams& p, double a_g = 0.001) {
  auto st = make_deformation_state(F);
  auto es = elastic_split(st, Mat3::Identity(), s, a_g);
  return p.zeta * matrix_energy(es, theta, p);
}

Mat3 piola_of_F(const Mat3& F, double theta, double s, const MatrixParams& p, double a_g = 0.001) {
  auto st = make_deformation_state(F);
  auto es = elastic_split(st, Mat3::Identity(), s, a_g);
  auto [dev, vol] = matrix_kirchhoff_stress(es, theta, p);
  return (dev + vol) * F.inverse().transpose();
}

}  // namespace

TEST_CASE("matrix energy: stress-free reference and hand-evaluated Ogden") {
  auto p = table_params();
  auto es = elastic_split(make_deformation_state(Mat3::Identity()), Mat3::Identity(), 0.0, 0.001);
  CHECK(matrix_energy(es, p.theta0, p) == Catch::Approx(0.0).margin(1e-12));

  // direct substitution with isochoric stretches at F = diag(1.1, 1, 1)
  const double J = 1.1;
  const double lb1 = 1.1 * std::pow(J, -1.0 / 3.0), lb2 = std::pow(J, -1.0 / 3.0);
  const double iso = p.mu[0] / 2.0 * ((lb1 * lb1 - 1.0) + 2.0 * (lb2 * lb2 - 1.0));
  const double vol = p.kappa / (p.beta * p.beta) * (p.beta * std::log(J) + std::pow(J, -p.beta) - 1.0);
  es = elastic_split(make_deformation_state(Vec3(1.1, 1.0, 1.0).asDiagonal()), Mat3::Identity(), 0.0, 0.001);
  CHECK(matrix_energy(es, p.theta0, p) == Catch::Approx(iso + vol).epsilon(1e-12));
}

TEST_CASE("matrix energy: full degradation removes the elastic part in tension") {
  auto p = table_params();
  const double theta = 311.0;
  auto es = elastic_split(make_deformation_state(Vec3(1.2, 1.05, 0.99).asDiagonal()), Mat3::Identity(), 1.0, 0.001);
  REQUIRE(es.tension);
  const double thermal_only = p.c_mat * (theta - p.theta0 - theta * std::log(theta / p.theta0));
  CHECK(matrix_energy(es, theta, p) == Catch::Approx(thermal_only).margin(1e-10));
}

TEST_CASE("matrix stress: zero at reference, deviatoric-free under dilatation") {
  auto p = table_params();
  auto es = elastic_split(make_deformation_state(Mat3::Identity()), Mat3::Identity(), 0.0, 0.001);
  auto [dev, vol] = matrix_kirchhoff_stress(es, p.theta0, p);
  CHECK(dev.norm() < 1e-12);
  CHECK(vol.norm() < 1e-12);

  es = elastic_split(make_deformation_state(1.07 * Mat3::Identity()), Mat3::Identity(), 0.0, 0.001);
  std::tie(dev, vol) = matrix_kirchhoff_stress(es, p.theta0, p);
  CHECK(dev.norm() < 1e-10);
  CHECK(vol(0, 0) > 0.0);
}

TEST_CASE("matrix stress: central-difference consistency on random states") {
  auto p = table_params();
  Rng rng(99);
  const double h = 1e-6;
  for (int k = 0; k < 100; ++k) {
    Mat3 F = random_F(rng);
    const double s = rng.uniform(0.0, 0.8);
    const double theta = rng.uniform(260.0, 320.0);
    Mat3 dF;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) dF(i, j) = rng.uniform(-1, 1);
    dF /= dF.norm();
    const double dnum = (energy_of_F(F + h * dF, theta, s, p) - energy_of_F(F - h * dF, theta, s, p)) / (2 * h);
    const double dana = (piola_of_F(F, theta, s, p).array() * dF.array()).sum();
    CHECK(dana == Catch::Approx(dnum).epsilon(1e-6).margin(1e-8));
  }
}

TEST_CASE("matrix entropy: analytic values and finite differences") {
  auto p = table_params();
  auto es = elastic_split(make_deformation_state(Mat3::Identity()), Mat3::Identity(), 0.0, 0.001);
  CHECK(matrix_entropy(es, p.theta0, p) == Catch::Approx(0.0).margin(1e-14));
  CHECK(matrix_entropy(es, 2.0 * p.theta0, p) == Catch::Approx(p.zeta * p.c_mat * std::log(2.0)).epsilon(1e-13));

  Rng rng(5);
  for (int k = 0; k < 50; ++k) {
    Mat3 F = random_F(rng);
    const double s = rng.uniform(0.0, 0.9), theta = rng.uniform(260.0, 330.0), h = 1e-4;
    auto st = make_deformation_state(F);
    auto sp = elastic_split(st, Mat3::Identity(), s, 0.001);
    const double dnum =
        -p.zeta * (matrix_energy(sp, theta + h, p) - matrix_energy(sp, theta - h, p)) / (2 * h);
    CHECK(matrix_entropy(sp, theta, p) == Catch::Approx(dnum).epsilon(1e-7).margin(1e-10));
  }
}

TEST_CASE("matrix driving force: zero cases and finite differences over s") {
  auto p = table_params();
  const double a_g = 0.001;
  auto es = elastic_split(make_deformation_state(Mat3::Identity()), Mat3::Identity(), 0.3, a_g);
  CHECK(matrix_driving_force(es, p.theta0, p, a_g) == 0.0);

  Rng rng(17);
  for (int k = 0; k < 60; ++k) {
    Mat3 F = random_F(rng);
    const double s = rng.uniform(0.05, 0.9), theta = rng.uniform(270.0, 310.0), h = 1e-6;
    auto st = make_deformation_state(F);
    const double dnum = -(energy_of_F(F, theta, s + h, p, a_g) - energy_of_F(F, theta, s - h, p, a_g)) / (2 * h);
    auto sp = elastic_split(st, Mat3::Identity(), s, a_g);
    const double H = matrix_driving_force(sp, theta, p, a_g);
    CHECK(H == Catch::Approx(std::max(0.0, dnum)).epsilon(1e-6).margin(1e-7));
    CHECK(H >= 0.0);
  }
}

TEST_CASE("matrix driving force: pure compression drives only through the isochoric part") {
  auto p = table_params();
  const double a_g = 0.001, s = 0.4;
  // pure hydrostatic compression: isochoric stretches are 1, no driving force
  auto es = elastic_split(make_deformation_state(0.9 * Mat3::Identity()), Mat3::Identity(), s, a_g);
  CHECK(matrix_driving_force(es, p.theta0, p, a_g) == Catch::Approx(0.0).margin(1e-12));
  // compare against the finite difference in a sheared compressive state
  Mat3 F = 0.95 * Mat3::Identity();
  F(0, 1) = 0.2;
  const double h = 1e-6;
  const double dnum =
      -(energy_of_F(F, p.theta0, s + h, p, a_g) - energy_of_F(F, p.theta0, s - h, p, a_g)) / (2 * h);
  auto sp = elastic_split(make_deformation_state(F), Mat3::Identity(), s, a_g);
  CHECK(matrix_driving_force(sp, p.theta0, p, a_g) == Catch::Approx(std::max(0.0, dnum)).epsilon(1e-6));
}

TEST_CASE("matrix energy: frame indifference and degradation monotonicity") {
  auto p = table_params();
  Rng rng(23);
  for (int k = 0; k < 50; ++k) {
    Mat3 F = random_F(rng);
    Vec3 axis(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
    axis.normalize();
    Mat3 Q = Eigen::AngleAxisd(rng.uniform(0, 3.0), axis).toRotationMatrix();
    const double s = rng.uniform(0, 1), theta = rng.uniform(260, 330);
    CHECK(energy_of_F(Q * F, theta, s, p) ==
          Catch::Approx(energy_of_F(F, theta, s, p)).epsilon(1e-10).margin(1e-12));
  }
  // non-increasing in s for a tensile state
  Mat3 F = Vec3(1.25, 1.1, 0.98).asDiagonal();
  double prev = energy_of_F(F, table_params().theta0, 0.0, p);
  for (int i = 1; i <= 100; ++i) {
    const double e = energy_of_F(F, table_params().theta0, i / 100.0, p);
    CHECK(e <= prev + 1e-12);
    prev = e;
  }
}
