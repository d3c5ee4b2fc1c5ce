#pragma once

#include "eh/sampled_curve.hpp"
#include "eh/trimesh.hpp"

namespace eh {

// Angle-weighted unit vertex normals; outward for consistently wound convex meshes.
Eigen::Matrix3Xd vertex_normals(const TriMesh& mesh);

// Mixed Voronoi vertex areas (obtuse triangles contribute area/2 at the obtuse
// corner and area/4 at the others). Sums to the total face area.
Eigen::VectorXd mixed_areas(const TriMesh& mesh);

// Cotangent mean curvature, signed so a convex mesh with outward normals has
// H < 0 everywhere (unit sphere: H = -1). Boundary vertices get NaN; use
// boundary_h_extrapolation for one-sided values there.
Eigen::VectorXd vertex_mean_curvature(const TriMesh& mesh);

// Integrated Gaussian curvature: 2*pi - angle sum at interior vertices,
// pi - angle sum on the boundary (the boundary share belongs to the geodesic
// turning, not to the K integral).
Eigen::VectorXd vertex_angle_defect(const TriMesh& mesh);

// Darboux frame samples along one boundary loop. The conormal n points out of
// the surface and {n, T, nu} is right-handed with n = T x nu. kappa_g carries
// the sign fixed by the flat-disc calibration kappa_g = -1, and tau is the
// curve torsion stored with the B' . N sign convention used across the library.
struct BoundaryFrame {
  std::vector<int> vertices;
  Eigen::Matrix3Xd T, n, nu;
  Eigen::VectorXd kappa, kappa_g, kappa_n, tau_g, theta, tau, ds;
  double length = 0.0;

  int size() const { return static_cast<int>(vertices.size()); }
};

BoundaryFrame boundary_darboux(const TriMesh& mesh, const std::vector<int>& loop);

// One-sided mean curvature at boundary vertices and its outward-conormal
// derivative, from a linear fit through the first two interior vertex rings.
struct BoundaryH {
  Eigen::VectorXd h;      // extrapolated H at each loop vertex
  Eigen::VectorXd dh_dn;  // derivative along the outward conormal
};

BoundaryH boundary_h_extrapolation(const TriMesh& mesh, const std::vector<int>& loop,
                                   const Eigen::VectorXd& h_field);

struct SurfaceIntegrals {
  double area = 0.0;
  double total_h_plus_c0_sq = 0.0;  // integral of (H+c0)^2
  double total_k = 0.0;             // integral of K (interior angle defects)
  double total_h_offset = 0.0;      // integral of (H+c0)
};

// Mixed-area weighted integrals; H on boundary vertices comes from the ring
// extrapolation so their area is not dropped from the H integrals.
SurfaceIntegrals integrate_surface(const TriMesh& mesh, double c0);

// |sum of angle defects + boundary turning - 2*pi*chi|; exact to rounding for
// any mesh since both sides are assembled from the same corner angles.
double gauss_bonnet_residual(const TriMesh& mesh);

struct WirtingerSides {
  double lhs;  // 4*pi^2 / length
  double rhs;  // integral of kappa^2 ds
};

// Both sides of the closed-curve inequality 4*pi^2/L <= integral kappa^2 ds
// (equality exactly on circles).
WirtingerSides wirtinger_check(const SampledCurve& curve);

// CSV rows: vertex_index,H,K_defect (H empty on boundary vertices).
void write_vertex_scalars_csv(const TriMesh& mesh, const std::string& path);

}  // namespace eh
