#pragma once

// Shared test fixtures: random smooth closed curves with analytic Frenet
// data, resampled to uniform arclength so they satisfy the SampledCurve
// contract exactly like the library generators do.

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include "eh/sampled_curve.hpp"

namespace ehtest {

inline constexpr double kTestPi = 3.14159265358979323846;

// Closed loop from a low-order Fourier series with a dominant ellipse mode,
// amplitudes decaying ~ 1/k^2. Draws with near-cusps are rejected so the
// Frenet frame stays well conditioned.
inline eh::SampledCurve make_fourier_loop(unsigned seed, int n = 256, int modes = 4) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  Eigen::Matrix3Xd ac(3, modes), bc(3, modes);
  auto draw = [&] {
    for (int k = 0; k < modes; ++k) {
      const double scale = 0.35 / ((k + 1) * (k + 1));
      for (int d = 0; d < 3; ++d) {
        ac(d, k) = scale * gauss(rng);
        bc(d, k) = scale * gauss(rng);
      }
    }
    // dominant round component keeps the speed bounded away from zero
    ac(0, 0) += 1.0;
    bc(1, 0) += 1.0;
  };

  auto eval = [&](double t, int deriv) {
    Eigen::Vector3d x = Eigen::Vector3d::Zero();
    for (int k = 0; k < modes; ++k) {
      const double w = k + 1;
      const double pw = std::pow(w, deriv);
      double cc, ss;
      switch (deriv % 4) {
        case 0: cc = std::cos(w * t); ss = std::sin(w * t); break;
        case 1: cc = -std::sin(w * t); ss = std::cos(w * t); break;
        case 2: cc = -std::cos(w * t); ss = -std::sin(w * t); break;
        default: cc = std::sin(w * t); ss = -std::cos(w * t); break;
      }
      x += pw * (ac.col(k) * cc + bc.col(k) * ss);
    }
    return x;
  };

  const int fine = 16 * n;
  std::vector<double> speed(fine + 1), cum(fine + 1, 0.0);
  while (true) {
    draw();
    double vmin = 1e300, vsum = 0;
    for (int i = 0; i <= fine; ++i) {
      const double t = 2 * kTestPi * i / fine;
      speed[i] = eval(t, 1).norm();
      vmin = std::min(vmin, speed[i]);
      vsum += speed[i];
    }
    if (vmin > 0.25 * (vsum / (fine + 1))) break;
  }
  for (int i = 1; i <= fine; ++i)
    cum[i] = cum[i - 1] + 0.5 * (speed[i - 1] + speed[i]) * (2 * kTestPi / fine);
  const double length = cum[fine];

  eh::SampledCurve c;
  c.closed = true;
  c.ds = length / n;
  c.points.resize(3, n + 1);
  c.tangent.resize(3, n + 1);
  c.normal.resize(3, n + 1);
  c.binormal.resize(3, n + 1);
  c.kappa.resize(n + 1);
  c.tau.resize(n + 1);

  int j = 0;
  for (int i = 0; i <= n; ++i) {
    const double target = std::min(length, i * c.ds);
    while (j < fine && cum[j + 1] < target) ++j;
    const double seg = cum[j + 1] - cum[j];
    const double frac = seg > 0 ? (target - cum[j]) / seg : 0.0;
    const double t = 2 * kTestPi * (j + frac) / fine;

    const Eigen::Vector3d x1 = eval(t, 1), x2 = eval(t, 2), x3 = eval(t, 3);
    const Eigen::Vector3d cr = x1.cross(x2);
    const double v = x1.norm();
    c.points.col(i) = eval(t, 0);
    c.tangent.col(i) = x1 / v;
    c.kappa(i) = cr.norm() / (v * v * v);
    c.binormal.col(i) = cr.norm() > 1e-12 ? (cr / cr.norm()).eval() : Eigen::Vector3d(0, 0, 1);
    c.normal.col(i) = c.binormal.col(i).cross(c.tangent.col(i));
    // torsion with the B' . N sign convention
    c.tau(i) = cr.squaredNorm() > 1e-12 ? -cr.dot(x3) / cr.squaredNorm() : 0.0;
  }
  // exact wrap
  c.points.col(n) = c.points.col(0);
  c.tangent.col(n) = c.tangent.col(0);
  c.normal.col(n) = c.normal.col(0);
  c.binormal.col(n) = c.binormal.col(0);
  c.kappa(n) = c.kappa(0);
  c.tau(n) = c.tau(0);
  return c;
}

}  // namespace ehtest
