#pragma once

#include "eh/sampled_curve.hpp"
#include "eh/trimesh.hpp"

namespace eh {

// Surface of revolution from an (r,z) profile polyline with azimuth_steps
// segments around the axis. Faces are wound so the outward normal matches the
// rotated profile normal (z', -r'). pole_start/pole_end collapse an endpoint
// with r ~ 0 into a single apex vertex.
TriMesh revolve_profile(const Eigen::ArrayXd& r, const Eigen::ArrayXd& z, int azimuth_steps,
                        bool pole_start = false, bool pole_end = false);

TriMesh make_icosphere(double radius, int subdivisions);

// Disc over an arbitrary closed boundary curve: concentric rings interpolated
// toward the centroid plus a center fan. Boundary vertices coincide with the
// curve samples and are marked fixed.
TriMesh make_disc_from_curve(const SampledCurve& boundary, int rings);

// Ruled strip between two closed curves with equal sample counts; both rims
// are marked fixed. Loop orientation follows curve a.
TriMesh make_annulus_between(const SampledCurve& a, const SampledCurve& b, int rows);

TriMesh make_flat_disc(double radius, int boundary_samples, int rings);
TriMesh make_planar_annulus(double r_inner, double r_outer, int azimuth_steps, int rows);
TriMesh make_cylinder(double radius, double half_height, int azimuth_steps, int rows);
TriMesh make_hemisphere(double radius, int azimuth_steps, int rows);

// Band of a sphere of radius R between the two symmetric parallels of the
// given boundary radius (requires boundary_radius < R).
TriMesh make_spherical_annulus(double sphere_radius, double boundary_radius, int azimuth_steps,
                               int rows);

// Spherical cap of radius R spanning the circle of the given boundary radius;
// major=true takes the larger complementary cap.
TriMesh make_spherical_cap(double sphere_radius, double boundary_radius, int azimuth_steps,
                           int rows, bool major = false);

// Symmetric catenoid slice r = c cosh(z/c) with c chosen so both boundary
// circles have exactly boundary_radius; aspect = half-height / c.
TriMesh make_catenoid_slice(double aspect, double boundary_radius, int azimuth_steps, int rows);

// Sphere of radius R with 1 or 2 polar holes whose rims have the given radius.
TriMesh make_sphere_with_holes(double sphere_radius, double hole_radius, int holes,
                               int azimuth_steps, int rows);

}  // namespace eh
