#include "eh/energy.hpp"

#include <algorithm>
#include <cmath>

#include "eh/discrete_geometry.hpp"
#include "eh/errors.hpp"
#include "eh/numerics.hpp"

namespace eh {

namespace {

double rim_line_energy(const EnergyParams& p, double r) {
  return 2 * kPi * (p.alpha / r + p.beta * r);
}

double critical_rim_radius(const EnergyParams& p) {
  p.validate(true);
  return std::sqrt(p.alpha / p.beta);
}

void require_scaleless(const EnergyParams& p, const char* who) {
  if (p.c0 != 0) throw validation_error(std::string(who) + " requires c0 = 0");
}

BoundClassification finite_case(Topology t, double eu, double value, Attainment att,
                                std::string label) {
  BoundClassification c;
  c.topology = t;
  c.e_underline = eu;
  c.bound = value;
  c.bounded_below = true;
  c.attained = att;
  c.case_label = std::move(label);
  return c;
}

BoundClassification unbounded_case(Topology t, double eu, std::string label) {
  BoundClassification c;
  c.topology = t;
  c.e_underline = eu;
  c.bounded_below = false;
  c.attained = Attainment::Unbounded;
  c.case_label = std::move(label);
  return c;
}

}  // namespace

const char* to_string(Topology t) { return t == Topology::Disc ? "disc" : "annulus"; }

const char* to_string(Attainment a) {
  switch (a) {
    case Attainment::Minimum: return "minimum";
    case Attainment::InfimumOnly: return "infimum-only";
    case Attainment::LowerBoundOnly: return "lower-bound-only";
    case Attainment::Unbounded: return "unbounded";
  }
  return "?";
}

SurfaceMoments compute_surface_moments(const TriMesh& mesh) {
  const SurfaceIntegrals si = integrate_surface(mesh, 0.0);
  SurfaceMoments m;
  m.area = si.area;
  m.int_h = si.total_h_offset;
  m.int_h2 = si.total_h_plus_c0_sq;
  m.int_k = si.total_k;
  for (const auto& loop : mesh.boundary_loops()) {
    const BoundaryFrame bf = boundary_darboux(mesh, loop);
    SurfaceMoments::Loop l;
    l.bending = (bf.kappa.array().square() * bf.ds.array()).sum();
    l.length = bf.length;
    m.loops.push_back(l);
    m.boundary_bending += l.bending;
    m.boundary_length += l.length;
  }
  return m;
}

double energy_from_moments(const SurfaceMoments& m, const EnergyParams& p) {
  return p.a * (m.int_h2 + 2 * p.c0 * m.int_h + p.c0 * p.c0 * m.area) + p.b * m.int_k +
         p.alpha * m.boundary_bending + p.beta * m.boundary_length;
}

BoundClassification lower_bound(const EnergyParams& p, Topology t) {
  p.validate(true);
  if (p.c0 < 0)
    throw validation_error("lower_bound: c0 < 0 is out of scope (outward-normal convention)");
  const double root = 2 * std::sqrt(p.alpha * p.beta);
  const double eu = root - std::abs(p.b);
  const double ab = p.a + p.b;

  if (t == Topology::Annulus) {
    if (p.c0 > 0) {
      if (p.b == 0)
        return finite_case(t, eu, 4 * kPi * root, Attainment::Minimum,
                           "annulus (ii): c0>0, b=0 - CMC surfaces attain");
      if (eu < 0)
        return unbounded_case(t, eu, "annulus: c0>0, |b| > 2 sqrt(alpha beta) - unbounded");
      if (p.b > 0)
        return finite_case(t, eu, 4 * kPi * (root - p.b), Attainment::Minimum,
                           "annulus (i): c0>0, b>0 - nodoid domains attain");
      return finite_case(t, eu, 4 * kPi * (root + p.b), Attainment::Minimum,
                         "annulus (iii): c0>0, b<0 - convex nodoid domain attains");
    }
    // c0 = 0
    if (p.b > 0) {
      if (eu < 0)
        return unbounded_case(t, eu, "annulus: c0=0, b > 2 sqrt(alpha beta) - unbounded");
      return finite_case(t, eu, 4 * kPi * (root - p.b), Attainment::InfimumOnly,
                         "annulus (iv): c0=0, b>0 - catenoid slice limit");
    }
    if (p.b == 0)
      return finite_case(t, eu, 4 * kPi * root, Attainment::Minimum,
                         "annulus (v): c0=0, b=0 - minimal annuli attain");
    if (ab < 0) {
      if (eu < -p.a)
        return unbounded_case(t, eu,
                              "annulus: c0=0, 2 sqrt(alpha beta) < -(a+b) - unbounded");
      return finite_case(t, eu, 4 * kPi * (root + ab), Attainment::InfimumOnly,
                         "annulus (vi): c0=0, a+b<0 - spherical annulus limit");
    }
    if (ab == 0)
      return finite_case(t, eu, 4 * kPi * root, Attainment::Minimum,
                         "annulus (vii): c0=0, a+b=0 - spherical annuli attain");
    return finite_case(t, eu, 4 * kPi * root, Attainment::InfimumOnly,
                       "annulus (viii): c0=0, b<0, a+b>0 - planar annulus limit");
  }

  // Disc
  if (p.c0 > 0) {
    if (eu < 0)
      return unbounded_case(t, eu, "disc: c0>0, |b| > 2 sqrt(alpha beta) - unbounded");
    const double ed = 2 * kPi * (eu + p.b);
    if (p.b == 0) {
      if (p.c0 * p.c0 <= p.beta / p.alpha)
        return finite_case(t, eu, ed, Attainment::Minimum,
                           "disc: c0>0, b=0 - spherical cap attains");
      return finite_case(t, eu, ed, Attainment::LowerBoundOnly,
                         "disc: c0>0, b=0, c0^2 > beta/alpha - bound only (no CMC cap fits)");
    }
    return finite_case(t, eu, ed, Attainment::LowerBoundOnly,
                       "disc: c0>0, b!=0 - bound only (no CMC disc is critical)");
  }
  // Disc, c0 = 0
  if (ab < 0) {
    if (eu < -p.a)
      return unbounded_case(t, eu, "disc: c0=0, 2 sqrt(alpha beta) < -(a+b) - unbounded");
    return finite_case(t, eu, 2 * kPi * (root + ab), Attainment::InfimumOnly,
                       "disc (i): c0=0, a+b<0 - spherical cap limit");
  }
  if (ab == 0)
    return finite_case(t, eu, 2 * kPi * root, Attainment::Minimum,
                       "disc (ii): c0=0, a+b=0 - spherical cap attains");
  if (p.b > 0) {
    if (eu < 0) return unbounded_case(t, eu, "disc: c0=0, b > 2 sqrt(alpha beta) - unbounded");
    return finite_case(t, eu, 2 * kPi * root, Attainment::Minimum,
                       "disc (iii): c0=0, b>0 - planar disc attains");
  }
  return finite_case(t, eu, 2 * kPi * root, Attainment::Minimum,
                     "disc (iv): c0=0, b<=0, a+b>0 - planar disc attains");
}

EnergyReport evaluate_energy(const TriMesh& mesh, const EnergyParams& p) {
  p.validate(false);
  const SurfaceMoments m = compute_surface_moments(mesh);
  if (m.loops.empty()) throw validation_error("evaluate_energy: mesh has no boundary");
  EnergyReport r;
  r.helfrich_term = p.a * (m.int_h2 + 2 * p.c0 * m.int_h + p.c0 * p.c0 * m.area);
  r.gauss_term = p.b * m.int_k;
  r.boundary_bending = p.alpha * m.boundary_bending;
  r.boundary_length_term = p.beta * m.boundary_length;
  r.total = r.helfrich_term + r.gauss_term + r.boundary_bending + r.boundary_length_term;
  r.loops = m.loops;

  const int chi = mesh.euler_characteristic();
  const size_t nloops = m.loops.size();
  if (p.c0 >= 0 && p.beta > 0) {
    std::optional<Topology> topo;
    if (chi == 1 && nloops == 1) topo = Topology::Disc;
    if (chi == 0 && nloops == 2) topo = Topology::Annulus;
    if (topo) {
      const BoundClassification c = lower_bound(p, *topo);
      if (c.bounded_below) r.bound_gap = r.total - *c.bound;
    }
  }
  return r;
}

EnergyReport willmore_case_check(const TriMesh& mesh, const EnergyParams& p) {
  if (std::abs(p.a + p.b) > 1e-12 * (std::abs(p.a) + std::abs(p.b)))
    throw validation_error("willmore_case_check requires a = -b");
  require_scaleless(p, "willmore_case_check");
  return evaluate_energy(mesh, p);
}

double rescaling_identity_residual(const TriMesh& mesh, const EnergyParams& p,
                                   std::optional<double> known_mean_curvature) {
  p.validate(true);
  const SurfaceMoments m = compute_surface_moments(mesh);
  double int_h_offset;
  if (known_mean_curvature)
    int_h_offset = (*known_mean_curvature + p.c0) * m.area;
  else
    int_h_offset = integrate_surface(mesh, p.c0).total_h_offset;
  const double lhs = 2 * p.a * p.c0 * int_h_offset + p.beta * m.boundary_length;
  const double rhs = p.alpha * m.boundary_bending;
  return std::abs(lhs - rhs) / (std::abs(lhs) + std::abs(rhs) + 1e-30);
}

ElBoundaryResiduals el_boundary_residuals(const TriMesh& mesh, const EnergyParams& p) {
  p.validate(true);
  const Eigen::VectorXd h_field = vertex_mean_curvature(mesh);
  const auto loops = mesh.boundary_loops();
  if (loops.empty()) throw validation_error("el_boundary_residuals: mesh has no boundary");

  double worst2 = 0, worst3 = 0, worst4 = 0;
  double scale2 = 0, scale3 = 0, scale4 = 0;
  for (const auto& loop : loops) {
    const BoundaryFrame bf = boundary_darboux(mesh, loop);
    const BoundaryH bh = boundary_h_extrapolation(mesh, loop, h_field);
    const int mres = static_cast<int>(loop.size());

    // Frenet frame and the conserved field J in ambient coordinates.
    std::vector<double> jx(mres), jy(mres), jz(mres), kap(mres), taug(mres);
    for (int i = 0; i < mres; ++i) {
      kap[i] = bf.kappa[i];
      taug[i] = bf.tau_g[i];
    }
    const std::vector<double> kap_prime = spectral_derivative(kap, bf.length);
    const std::vector<double> taug_prime = spectral_derivative(taug, bf.length);
    for (int i = 0; i < mres; ++i) {
      const Eigen::Vector3d T = bf.T.col(i);
      const Eigen::Vector3d N = std::cos(bf.theta[i]) * bf.nu.col(i) +
                                std::sin(bf.theta[i]) * bf.n.col(i);
      const Eigen::Vector3d B = T.cross(N);
      const Eigen::Vector3d J = (p.alpha * kap[i] * kap[i] - p.beta) * T +
                                2 * p.alpha * kap_prime[i] * N -
                                2 * p.alpha * kap[i] * bf.tau[i] * B;
      jx[i] = J.x();
      jy[i] = J.y();
      jz[i] = J.z();
    }
    const std::vector<double> jxp = spectral_derivative(jx, bf.length);
    const std::vector<double> jyp = spectral_derivative(jy, bf.length);
    const std::vector<double> jzp = spectral_derivative(jz, bf.length);

    for (int i = 0; i < mres; ++i) {
      const Eigen::Vector3d jprime(jxp[i], jyp[i], jzp[i]);
      const double h0 = bh.h[i];
      const double t2a = p.a * (h0 + p.c0), t2b = p.b * bf.kappa_n[i];
      const double t3a = jprime.dot(bf.nu.col(i)), t3b = -p.a * bh.dh_dn[i],
                   t3c = p.b * taug_prime[i];
      const double k_rim =
          bf.kappa_n[i] * (2 * h0 - bf.kappa_n[i]) - bf.tau_g[i] * bf.tau_g[i];
      const double t4a = jprime.dot(bf.n.col(i)), t4b = p.a * (h0 + p.c0) * (h0 + p.c0),
                   t4c = p.b * k_rim;
      worst2 = std::max(worst2, std::abs(t2a + t2b));
      worst3 = std::max(worst3, std::abs(t3a + t3b + t3c));
      worst4 = std::max(worst4, std::abs(t4a + t4b + t4c));
      scale2 = std::max({scale2, std::abs(t2a), std::abs(t2b)});
      scale3 = std::max({scale3, std::abs(t3a), std::abs(t3b), std::abs(t3c)});
      scale4 = std::max({scale4, std::abs(t4a), std::abs(t4b), std::abs(t4c)});
    }
  }

  // Parameter-scale floors: kappa_s is the curvature of the critical rim, so
  // the floors are the natural magnitudes of each equation there.
  const double ks = std::sqrt(p.beta / p.alpha);
  const double f2 = (p.a + std::abs(p.b)) * ks;
  const double f34 = (p.a + std::abs(p.b) + std::sqrt(p.alpha * p.beta)) * ks * ks;
  ElBoundaryResiduals out;
  out.r2 = worst2 / (scale2 + f2);
  out.r3 = worst3 / (scale3 + f34);
  out.r4 = worst4 / (scale4 + f34);
  return out;
}

double spherical_cap_energy(const EnergyParams& p, double sphere_radius, bool major) {
  require_scaleless(p, "spherical_cap_energy");
  const double r0 = critical_rim_radius(p);
  if (!(sphere_radius >= r0))
    throw validation_error("spherical_cap_energy: rim circle does not fit on the sphere");
  const double ratio = r0 / sphere_radius;
  const double w0 = std::sqrt(std::max(0.0, 1 - ratio * ratio));
  const double band = major ? 1 + w0 : 1 - w0;
  return (p.a + p.b) * 2 * kPi * band + rim_line_energy(p, r0);
}

double spherical_annulus_energy(const EnergyParams& p, double sphere_radius) {
  require_scaleless(p, "spherical_annulus_energy");
  const double r0 = critical_rim_radius(p);
  if (!(sphere_radius > r0))
    throw validation_error("spherical_annulus_energy: sphere must be larger than the rim");
  const double ratio = r0 / sphere_radius;
  const double w0 = std::sqrt(1 - ratio * ratio);
  return (p.a + p.b) * 4 * kPi * w0 + 2 * rim_line_energy(p, r0);
}

double catenoid_slice_energy(const EnergyParams& p, double aspect) {
  require_scaleless(p, "catenoid_slice_energy");
  if (!(aspect > 0)) throw validation_error("catenoid_slice_energy: aspect must be positive");
  const double r0 = critical_rim_radius(p);
  return -4 * kPi * p.b * std::tanh(aspect) + 2 * rim_line_energy(p, r0);
}

double planar_annulus_energy(const EnergyParams& p, double r_inner, double r_outer) {
  p.validate(true);
  if (!(r_inner > 0) || !(r_outer > r_inner))
    throw validation_error("planar_annulus_energy: need 0 < r_inner < r_outer");
  const double area = kPi * (r_outer * r_outer - r_inner * r_inner);
  return p.a * p.c0 * p.c0 * area + rim_line_energy(p, r_inner) + rim_line_energy(p, r_outer);
}

}  // namespace eh
