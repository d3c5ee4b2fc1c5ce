#include <chrono>
#include <cmath>

#include "doctest.h"
#include "eh/elastica.hpp"
#include "eh/errors.hpp"

using namespace eh;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("circle branch carries kappa^2 = lambda + mu^2") {
  for (auto [mu, lambda] : {std::pair{0.0, 1.0}, {0.5, 2.0}, {-0.3, 0.25}}) {
    const CurveParams prm(mu, lambda);
    const CircleSolution c = circle_solution(prm);
    CHECK(c.kappa * c.kappa == doctest::Approx(lambda + mu * mu).epsilon(1e-14));
    CHECK(c.radius == doctest::Approx(1.0 / c.kappa).epsilon(1e-14));
  }
}

TEST_CASE("curvature profile oscillates between radicand roots") {
  const CurveParams prm(0.0, 1.0);
  const FirstIntegrals fi(1.9, 0.6);
  const CurvatureProfile prof = curvature_profile(prm, fi, 256);

  CHECK(prof.kappa.front() == doctest::Approx(prof.kappa_max).epsilon(1e-12));
  CHECK(prof.s.front() == 0.0);
  CHECK(prof.s.back() == doctest::Approx(prof.period).epsilon(1e-12));
  CHECK(std::abs(radicand(prof.kappa_min, prm, fi)) < 1e-9);
  CHECK(std::abs(radicand(prof.kappa_max, prm, fi)) < 1e-9);

  double lo = 1e300, hi = -1e300;
  for (double k : prof.kappa) {
    lo = std::min(lo, k);
    hi = std::max(hi, k);
  }
  CHECK(lo == doctest::Approx(prof.kappa_min).epsilon(1e-10));
  CHECK(hi == doctest::Approx(prof.kappa_max).epsilon(1e-10));

  // 4 kappa'^2 = Q(kappa) pointwise
  for (size_t i = 0; i < prof.kappa.size(); i += 16) {
    const double q = radicand(prof.kappa[i], prm, fi);
    CHECK(4 * prof.kappa_prime[i] * prof.kappa_prime[i] == doctest::Approx(q).epsilon(1e-8));
  }
}

TEST_CASE("profile refinement converges") {
  const CurveParams prm(0.0, 1.0);
  const FirstIntegrals fi(1.5, 0.8);
  const CurvatureProfile a = curvature_profile(prm, fi, 128);
  const CurvatureProfile b = curvature_profile(prm, fi, 256);
  CHECK(a.period == doctest::Approx(b.period).epsilon(1e-10));
  // shared samples: a[i] and b[2i] sit at the same arclength
  for (size_t i = 0; i < a.kappa.size(); i += 8)
    CHECK(a.kappa[i] == doctest::Approx(b.kappa[2 * i]).epsilon(1e-8));
}

TEST_CASE("torsion vanishes with e and follows the first integral") {
  const CurveParams prm(0.0, 1.0);
  CHECK(torsion_from_curvature(1.3, prm, FirstIntegrals(1.9, 0.0)) == 0.0);
  const double e = 0.73, k = 1.21;
  CHECK(torsion_from_curvature(k, prm, FirstIntegrals(1.9, e)) ==
        doctest::Approx(e / (4 * k * k)).epsilon(1e-14));
}

TEST_CASE("closure defects mirror under e -> -e") {
  const CurveParams prm(0.0, 1.0);
  const ClosureDefects plus = closure_defects(curvature_profile(prm, FirstIntegrals(1.9, 0.6), 256));
  const ClosureDefects minus =
      closure_defects(curvature_profile(prm, FirstIntegrals(1.9, -0.6), 256));
  CHECK(minus.delta_z == doctest::Approx(-plus.delta_z).epsilon(1e-10));
  CHECK(minus.delta_theta == doctest::Approx(-plus.delta_theta).epsilon(1e-10));
}

TEST_CASE("find_closed_curve pins the (3,1) solution") {
  const CurveParams prm(0.0, 1.0);
  const FirstIntegrals fi = find_closed_curve(prm, 3, 1, SearchBox{});
  CHECK(fi.d == doctest::Approx(1.907628).epsilon(1e-4));
  CHECK(fi.e == doctest::Approx(0.613703).epsilon(1e-4));

  const CurvatureProfile prof = curvature_profile(prm, fi, 256);
  const ClosureDefects def = closure_defects(prof);
  CHECK(std::abs(def.delta_z) < 1e-8 * prof.period);
  CHECK(std::abs(def.delta_theta - 2 * kPi / 3) < 1e-8);
}

TEST_CASE("find_closed_curve reaches targets past the gridded family end") {
  // The (5,2) winding angle 4pi/5 lies beyond the last grid point of the
  // default box; the terminus hunt has to bracket it.
  const CurveParams prm(0.0, 1.0);
  const auto t0 = std::chrono::steady_clock::now();
  const FirstIntegrals fi = find_closed_curve(prm, 5, 2, SearchBox{});
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(secs < 60.0);
  const ClosureDefects def = closure_defects(curvature_profile(prm, fi, 256));
  CHECK(std::abs(def.delta_theta - 4 * kPi / 5) < 1e-8);
}

TEST_CASE("find_closed_curve rejects bad input and unreachable targets") {
  const CurveParams prm(0.0, 1.0);
  CHECK_THROWS_AS((void)find_closed_curve(prm, 4, 2, SearchBox{}), validation_error);
  CHECK_THROWS_AS((void)find_closed_curve(prm, 0, 1, SearchBox{}), validation_error);
  SearchBox bad;
  bad.grid = 2;
  CHECK_THROWS_AS((void)find_closed_curve(prm, 3, 1, bad), validation_error);
  // 2*pi*2/3 > pi can never close on this family
  CHECK_THROWS_AS((void)find_closed_curve(prm, 3, 2, SearchBox{}), numerical_error);
}

TEST_CASE("reconstruction closes and matches the independent Frenet integration") {
  const CurveParams prm(0.0, 1.0);
  const FirstIntegrals fi = find_closed_curve(prm, 3, 1, SearchBox{});
  const CurvatureProfile prof = curvature_profile(prm, fi, 80);
  const SampledCurve curve = reconstruct_curve(prof, 3);
  curve.validate(1e-7);
  CHECK(curve.closed);
  CHECK(curve.closure_gap() < 1e-5 * curve.length());
  CHECK(reconstruction_gap(prof, 3) < 1e-6 * curve.length());
  CHECK(el_residual_curve(curve, prm) < 1e-2);
}

TEST_CASE("el_residual_curve rejects non-critical loops") {
  // A circle of the wrong radius is far from critical for lambda = 1.
  const CurveParams prm(0.0, 1.0);
  CHECK(el_residual_curve(make_circle(3.0, 256), prm) > 0.1);
  CHECK(el_residual_curve(make_circle(1.0, 256), prm) < 1e-6);
}

TEST_CASE("genus bound of torus knots") {
  CHECK(genus_bound(3, 1) == 0);
  CHECK(genus_bound(5, 2) == 2);
  CHECK(genus_bound(7, 2) == 3);
  CHECK_THROWS_AS((void)genus_bound(4, 2), validation_error);
  CHECK_THROWS_AS((void)genus_bound(0, 1), validation_error);
}
