#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "eh/discrete_geometry.hpp"
#include "eh/errors.hpp"
#include "eh/sampled_curve.hpp"

using namespace eh;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("make_circle is arc-length exact") {
  const SampledCurve c = make_circle(2.0, 128);
  CHECK(c.closed);
  CHECK(c.sample_count() == 129);
  CHECK(c.cycle_count() == 128);
  CHECK(c.length() == doctest::Approx(4 * kPi).epsilon(1e-14));
  CHECK(c.closure_gap() < 1e-14);
  c.validate();

  for (int i = 0; i < c.sample_count(); ++i) {
    CHECK(c.points.col(i).head<2>().norm() == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(c.kappa(i) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(c.tau(i) == doctest::Approx(0.0));
  }

  Eigen::VectorXd ones = Eigen::VectorXd::Ones(c.sample_count());
  CHECK(integrate_curve(c, ones) == doctest::Approx(c.length()).epsilon(1e-14));
}

TEST_CASE("frenet_integrate closes a circle and converges at 4th order") {
  auto kappa = [](double) { return 1.0; };
  auto tau = [](double) { return 0.0; };
  const Eigen::Vector3d x0(1, 0, 0);
  Eigen::Matrix3d tnb0;
  tnb0.col(0) = Eigen::Vector3d(0, 1, 0);
  tnb0.col(1) = Eigen::Vector3d(-1, 0, 0);
  tnb0.col(2) = Eigen::Vector3d(0, 0, 1);

  auto gap = [&](int n, int sub) {
    SampledCurve c = frenet_integrate(kappa, tau, 2 * kPi, n, true, x0, tnb0, sub);
    return (c.points.col(n) - c.points.col(0)).norm();
  };
  const double g1 = gap(16, 1);
  const double g2 = gap(32, 1);
  CHECK(g2 < g1);
  CHECK(g1 / g2 > 8.0);  // 4th-order step halving gains ~16x
  CHECK(gap(64, 16) < 1e-11);
}

TEST_CASE("frenet_integrate with torsion traces a known helix") {
  // kappa = tau = 1/2 is the unit-pitch helix r = 1/2 of slope 1/sqrt(2).
  const double k = 0.5, t = 0.5;
  const double r = k / (k * k + t * t);
  auto kf = [&](double) { return k; };
  auto tf = [&](double) { return t; };
  Eigen::Matrix3d tnb0;
  const double w = std::sqrt(k * k + t * t);
  tnb0.col(0) = Eigen::Vector3d(0, r * w, t / w);
  tnb0.col(1) = Eigen::Vector3d(-1, 0, 0);
  tnb0.col(2) = tnb0.col(0).cross(tnb0.col(1));
  SampledCurve c = frenet_integrate(kf, tf, 12.0, 240, false, {r, 0, 0}, tnb0, 8);
  for (int i = 0; i < c.sample_count(); ++i) {
    const double s = i * c.ds;
    CHECK(c.points.col(i).head<2>().norm() == doctest::Approx(r).epsilon(1e-9));
    CHECK(c.points(2, i) == doctest::Approx(s * t / w).epsilon(1e-9));
  }
}

TEST_CASE("curve CSV roundtrip preserves samples") {
  const SampledCurve c = make_circle(1.3, 48);
  const std::string path = (std::filesystem::temp_directory_path() / "eh_curve_rt.csv").string();
  write_curve_csv(c, path);
  const SampledCurve back = read_curve_csv(path);
  REQUIRE(back.sample_count() == c.sample_count());
  CHECK(back.closed == c.closed);
  CHECK((back.points - c.points).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((back.tangent - c.tangent).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((back.kappa - c.kappa).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(back.ds == doctest::Approx(c.ds).epsilon(1e-14));
  back.validate();
  std::filesystem::remove(path);
}

TEST_CASE("wirtinger inequality is tight exactly on circles") {
  for (double r : {0.4, 1.0, 2.7}) {
    const WirtingerSides w = wirtinger_check(make_circle(r, 256));
    CHECK(w.rhs >= w.lhs - 1e-12);
    CHECK(std::abs(w.rhs - w.lhs) < 1e-9 * w.rhs);
  }
}
