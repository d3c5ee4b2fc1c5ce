#pragma once

#include <optional>
#include <string>
#include <vector>

#include "eh/params.hpp"
#include "eh/trimesh.hpp"

namespace eh {

// Parameter-independent integrals of a mesh, cached so parameter sweeps do not
// re-run the geometry pipeline. The energy is an affine function of these.
struct SurfaceMoments {
  double area = 0;
  double int_h = 0;        // int H dA, boundary row handled by extrapolation
  double int_h2 = 0;       // int H^2 dA
  double int_k = 0;        // interior angle defects
  double boundary_bending = 0;  // oint kappa^2 ds over all loops
  double boundary_length = 0;
  struct Loop {
    double bending = 0;  // oint kappa^2 ds
    double length = 0;
  };
  std::vector<Loop> loops;
};

SurfaceMoments compute_surface_moments(const TriMesh& mesh);

double energy_from_moments(const SurfaceMoments& m, const EnergyParams& p);

enum class Topology { Disc, Annulus };
const char* to_string(Topology t);

// How the reported bound relates to the infimum of the energy in its class.
//   Minimum       - bound equals the infimum and a surface attains it
//   InfimumOnly   - bound equals the infimum, approached but never attained
//   LowerBoundOnly- sound lower bound; the infimum itself is not pinned down
//   Unbounded     - no lower bound exists
enum class Attainment { Minimum, InfimumOnly, LowerBoundOnly, Unbounded };
const char* to_string(Attainment a);

struct BoundClassification {
  Topology topology = Topology::Disc;
  double e_underline = 0;  // 2 sqrt(alpha beta) - |b|
  std::optional<double> bound;
  bool bounded_below = false;
  std::string case_label;
  Attainment attained = Attainment::Unbounded;
};

// Full case analysis of the energy infimum over discs or annuli for c0 >= 0.
// Throws validation_error for c0 < 0 (outward-normal convention makes the
// ground state H = -c0 unreachable there).
BoundClassification lower_bound(const EnergyParams& params, Topology topology);

struct EnergyReport {
  double helfrich_term = 0;        // a int (H+c0)^2
  double gauss_term = 0;           // b int K
  double boundary_bending = 0;     // alpha oint kappa^2
  double boundary_length_term = 0; // beta L
  double total = 0;
  std::vector<SurfaceMoments::Loop> loops;
  // total minus the applicable lower bound, when the mesh topology is a disc
  // or annulus and the parameters admit one.
  std::optional<double> bound_gap;
};

EnergyReport evaluate_energy(const TriMesh& mesh, const EnergyParams& params);

// Same evaluation restricted to the scale-invariant case a = -b, c0 = 0,
// where the surface term is a int (H^2 - K).
EnergyReport willmore_case_check(const TriMesh& mesh, const EnergyParams& params);

// Residual of the criticality identity
//   2 a c0 int (H + c0) dA + beta L = alpha oint kappa^2 ds,
// normalized by |LHS| + |RHS|. Surfaces known to be exactly CMC can pass
// known_mean_curvature to spare the identity the discrete-H bias.
double rescaling_identity_residual(const TriMesh& mesh, const EnergyParams& params,
                                   std::optional<double> known_mean_curvature = std::nullopt);

// Max-norm residuals of the three boundary equilibrium conditions,
//   r2:  a (H + c0) + b kappa_n = 0
//   r3:  J' . nu - a dH/dn + b tau_g' = 0
//   r4:  J' . n + a (H + c0)^2 + b K = 0,
// where J = (alpha kappa^2 - beta) T + 2 alpha kappa' N - 2 alpha kappa tau B
// is differentiated spectrally along each closed loop. Each residual is
// normalized by the largest constituent term plus a parameter-scale floor, so
// identically-zero configurations report 0 rather than 0/0.
struct ElBoundaryResiduals {
  double r2 = 0;
  double r3 = 0;
  double r4 = 0;
};

ElBoundaryResiduals el_boundary_residuals(const TriMesh& mesh, const EnergyParams& params);

// Closed-form energies of the witness families used by the attainment checks.
// All require c0 = 0 and rims of radius sqrt(alpha/beta) except where noted.
double spherical_cap_energy(const EnergyParams& params, double sphere_radius, bool major = false);
double spherical_annulus_energy(const EnergyParams& params, double sphere_radius);
double catenoid_slice_energy(const EnergyParams& params, double aspect);
// Planar annulus with explicit rim radii; H = K = 0 so this one is exact for
// any c0 and radii.
double planar_annulus_energy(const EnergyParams& params, double r_inner, double r_outer);

}  // namespace eh
