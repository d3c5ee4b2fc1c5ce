#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "eh/params.hpp"
#include "eh/trimesh.hpp"

namespace eh {

// Constant-mean-curvature surfaces of revolution, indexed by the mean
// curvature H <= 0 and the flux constant of the profile first integral
//   u r + H r^2 = flux,      u = sin(gamma), w = cos(gamma),
// where (u e^{i theta}, w) is the outward unit normal and gamma the polar
// angle of the Gauss map along the meridian.
enum class DelaunayKind { Plane, Catenoid, Sphere, Cylinder, Unduloid, Nodoid };

const char* to_string(DelaunayKind kind);

// u_constant discriminates the degenerate H<0, flux=0 case, where the first
// integral factors as r (u + H r) = 0: a varying u traces the round sphere of
// radius -1/H, a constant u the vertical cylinder branch.
DelaunayKind classify_delaunay(double H, double flux, bool u_constant = false);

// Root of H r^2 + u r - flux = 0. branch=+1 picks (u + sqrt(disc)) / (-2H),
// the branch nodoids live on; branch=-1 the other root. H=0 reduces to
// r = flux / u. Throws on negative discriminant or nonpositive radius.
double radius_from_u(double u, double H, double flux, int branch = +1);

// dr/du along the chosen root, from implicit differentiation.
double radius_slope_from_u(double u, double H, double flux, int branch = +1);

// One monotone arc of the Gauss-map angle. Profiles are quadrature-exact in
// gamma: dz = r_u dw with w = cos(gamma), so z never needs elliptic integrals.
struct GaussArc {
  double gamma0 = 0.0;
  double gamma1 = 0.0;
  int branch = +1;
};

struct UPath {
  std::vector<GaussArc> arcs;
  std::string description;

  double gamma_span() const;
};

struct DelaunayProfile {
  double H = 0.0;
  double flux = 0.0;
  DelaunayKind kind = DelaunayKind::Nodoid;
  // Parallel per-sample arrays along the path.
  Eigen::ArrayXd gamma, u, r, z, w;

  int sample_count() const { return static_cast<int>(u.size()); }
  // max |u r + H r^2 - flux| over the samples.
  double flux_residual() const;
};

// Samples the profile along the path and integrates z by Gauss-Legendre
// quadrature of -u(gamma) r_u(gamma); z is continuous across arc junctions.
DelaunayProfile profile_from_flux(double H, double flux, const UPath& path, int n_samples);

// Labels for the four domains of the distinguished nodoid that are bounded by
// u=0 parallels: inner half-loop, outer (convex) half-loop, full loop, and
// one-and-a-half loops. Their spherical-image areas are -4pi, +4pi, 0, -4pi.
enum class DomainLabel { N1, N2, N3, N4 };

const char* to_string(DomainLabel label);

struct NodoidDomain {
  DelaunayProfile profile;
  UPath u_path;
  DomainLabel label = DomainLabel::N2;
  double epsilon = 0.0;     // deformation parameter; 0 for the critical domains
  double rim_radius = 0.0;  // both boundary parallels
  double rim_u = 0.0;       // u on the boundary parallels, epsilon / rim_radius
};

// The one nodoid with H = -c0 whose u=0 parallels sit at radius
// sqrt(alpha/beta): flux = -c0 alpha / beta. Full profile loop.
DelaunayProfile critical_nodoid(const EnergyParams& params, int n_samples = 512);

// The four critical domains N1..N4 carved out of that nodoid.
std::vector<NodoidDomain> enumerate_domains(const EnergyParams& params, int n_samples = 512);

// Deformed convex domain with flux shifted by epsilon; both rims stay at
// radius sqrt(alpha/beta) and carry u = epsilon / rim_radius. epsilon = 0
// reproduces the N2 domain exactly.
NodoidDomain sigma_epsilon(const EnergyParams& params, double epsilon, int n_samples = 512);

// Signed spherical-image area 2 pi int u sign(r_u) dgamma, in closed form.
double analytic_total_curvature(const NodoidDomain& domain);

// Closed-form energy: the CMC term vanishes on H = -c0, leaving
// b * (total curvature) plus 2 pi (alpha / r + beta r) per rim.
double analytic_energy(const NodoidDomain& domain, const EnergyParams& params);

struct SecondVariation {
  double analytic = 0.0;
  double finite_difference = 0.0;
};

// d^2/d epsilon^2 of the deformed-domain energy at epsilon = 0, which is
// -4 pi b / rim_radius^2, together with a one-sided second difference of the
// closed form at {0, h, 2h} as a cross-check (the odd term vanishes, so the
// difference is O(h^2) accurate).
SecondVariation instability_second_derivative(const EnergyParams& params, double h = 1e-4);

// Surface of revolution of the domain. Profile rows follow a two-sided tanh
// grading of strength `grading` (0 = uniform) clustering rows at the rims,
// which keeps the discrete spherical-image area honest there.
TriMesh revolve_domain(const NodoidDomain& domain, int profile_rows, int azimuth_steps,
                       double grading = 6.0);

// CSV with header u,r,z,w, one row per profile sample.
void write_profile_csv(const std::string& path, const DelaunayProfile& profile);

}  // namespace eh
