#pragma once

#include <vector>

#include "eh/sampled_curve.hpp"

namespace eh {

// Parameters of the boundary bending energy ∫((κ+μ)² + λ) ds; the stationary
// circle branch needs λ + μ² > 0.
struct CurveParams {
  double mu = 0.0;
  double lambda = 1.0;
  CurveParams() = default;
  CurveParams(double mu_, double lambda_);
  double circle_kappa_sq() const { return lambda + mu * mu; }
};

// Conserved quantities of the curve Euler-Lagrange system: d is the squared
// norm of the conserved field along the curve, e its axial-rotation pairing.
struct FirstIntegrals {
  double d = 0.0;
  double e = 0.0;
  FirstIntegrals() = default;
  FirstIntegrals(double d_, double e_);
};

// Q(κ) with 4κ'² = Q(κ) along solutions.
double radicand(double kappa, const CurveParams& params, const FirstIntegrals& fi);

// τ = e / (4(κ+μ)²); identically zero when e = 0.
double torsion_from_curvature(double kappa, const CurveParams& params,
                              const FirstIntegrals& fi);

// One full period of the oscillating curvature, sampled uniformly in
// arclength (n+1 samples, endpoints included, κ(0) = kappa_max).
struct CurvatureProfile {
  CurveParams params;
  FirstIntegrals integrals;
  double kappa_min = 0.0;
  double kappa_max = 0.0;
  double period = 0.0;
  std::vector<double> s;
  std::vector<double> kappa;
  std::vector<double> kappa_prime;
  std::vector<double> tau;
};

CurvatureProfile curvature_profile(const CurveParams& params, const FirstIntegrals& fi,
                                   int n_samples = 2048);

// Constant-curvature branch (d = 0): κ² = λ + μ².
struct CircleSolution {
  double kappa = 0.0;
  double radius = 0.0;
};
CircleSolution circle_solution(const CurveParams& params);

// Per-period closure defects of the cylindrical-coordinate reconstruction:
// delta_z is the axial offset, delta_theta the azimuthal advance.
struct ClosureDefects {
  double delta_z = 0.0;
  double delta_theta = 0.0;
};
ClosureDefects closure_defects(const CurvatureProfile& profile);

// Search region for find_closed_curve; d is scanned on grid points
// (log-spaced up to d_max) and the vertical-closure zero in e is solved per d
// inside [e_min, e_max]. Scanning along d keeps the sweep single-valued: the
// closure family folds back in e, and a fixed-e scan goes blind exactly where
// the winding angle passes through its fold value.
struct SearchBox {
  double e_min = 0.02;
  double e_max = 1.5;
  double d_max = 30.0;
  int grid = 48;
};

// Shoots for a closed curve with delta_z = 0 and delta_theta = 2πp/q.
FirstIntegrals find_closed_curve(const CurveParams& params, int q, int p,
                                 const SearchBox& box);

// Cylindrical-coordinate reconstruction over the given number of curvature
// periods, sampled at the profile's resolution, with analytic Frenet data.
SampledCurve reconstruct_curve(const CurvatureProfile& profile, int periods);

// Max pointwise distance between reconstruct_curve and an independent direct
// integration of the Frenet system, after optimal rigid alignment.
double reconstruction_gap(const CurvatureProfile& profile, int periods);

// Max-norm arclength derivative of the conserved field recomputed from the
// sampled curve, normalized; near zero exactly on critical curves.
double el_residual_curve(const SampledCurve& curve, const CurveParams& params);

// Minimal Seifert genus of the (q,p) torus knot: (p-1)(q-1)/2.
int genus_bound(int q, int p);

}  // namespace eh
