#include "eh/delaunay.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "eh/errors.hpp"
#include "eh/meshgen.hpp"
#include "eh/numerics.hpp"

namespace eh {

namespace {

// Integrand of the height quadrature dz = r_u dw = -u r_u dgamma.
double dz_dgamma(double gamma, double H, double flux, int branch) {
  const double u = std::sin(gamma);
  return -u * radius_slope_from_u(u, H, flux, branch);
}

double quad_dz(double g0, double g1, double H, double flux, int branch) {
  return integrate_gl([&](double g) { return dz_dgamma(g, H, flux, branch); }, g0, g1, 10);
}

// Two-sided tanh map of [0,1] onto itself clustering points at both ends.
double tanh_grading(double xi, double delta) {
  if (delta <= 1e-12) return xi;
  return 0.5 * (1.0 + std::tanh(delta * (xi - 0.5)) / std::tanh(0.5 * delta));
}

NodoidDomain make_domain(const EnergyParams& params, DomainLabel label, double gamma0,
                         double gamma1, double epsilon, const std::string& description,
                         int n_samples) {
  params.validate(true);
  if (!(params.c0 > 0)) throw validation_error("nodoid domains require c0 > 0");

  const double r0 = std::sqrt(params.alpha / params.beta);
  const double flux = -params.c0 * params.alpha / params.beta + epsilon;
  if (!(flux < 0)) throw validation_error("deformation leaves the nodoid family (flux >= 0)");

  NodoidDomain d;
  d.u_path.arcs.push_back({gamma0, gamma1, +1});
  d.u_path.description = description;
  d.label = label;
  d.epsilon = epsilon;
  d.rim_radius = r0;
  d.rim_u = epsilon / r0;
  d.profile = profile_from_flux(-params.c0, flux, d.u_path, n_samples);
  return d;
}

}  // namespace

const char* to_string(DelaunayKind kind) {
  switch (kind) {
    case DelaunayKind::Plane: return "plane";
    case DelaunayKind::Catenoid: return "catenoid";
    case DelaunayKind::Sphere: return "sphere";
    case DelaunayKind::Cylinder: return "cylinder";
    case DelaunayKind::Unduloid: return "unduloid";
    case DelaunayKind::Nodoid: return "nodoid";
  }
  return "?";
}

const char* to_string(DomainLabel label) {
  switch (label) {
    case DomainLabel::N1: return "N1";
    case DomainLabel::N2: return "N2";
    case DomainLabel::N3: return "N3";
    case DomainLabel::N4: return "N4";
  }
  return "?";
}

DelaunayKind classify_delaunay(double H, double flux, bool u_constant) {
  if (H > 0) throw validation_error("classify_delaunay: H must be <= 0 (outward normal)");
  if (H == 0) return flux == 0 ? DelaunayKind::Plane : DelaunayKind::Catenoid;
  if (flux < 0) return DelaunayKind::Nodoid;
  if (flux == 0) return u_constant ? DelaunayKind::Cylinder : DelaunayKind::Sphere;
  if (1 + 4 * flux * H < 0)
    throw validation_error("classify_delaunay: no surface for flux > -1/(4H)");
  return DelaunayKind::Unduloid;
}

double radius_from_u(double u, double H, double flux, int branch) {
  if (branch != 1 && branch != -1) throw validation_error("radius_from_u: branch must be +-1");
  double r;
  if (H == 0) {
    if (u == 0) throw validation_error("radius_from_u: u = 0 has no radius when H = 0");
    r = flux / u;
  } else {
    const double disc = u * u + 4 * H * flux;
    if (disc < 0) throw validation_error("radius_from_u: negative discriminant");
    r = (u + branch * std::sqrt(disc)) / (-2 * H);
  }
  if (!(r > 0)) throw validation_error("radius_from_u: nonpositive radius on this branch");
  return r;
}

double radius_slope_from_u(double u, double H, double flux, int branch) {
  const double r = radius_from_u(u, H, flux, branch);
  const double denom = u + 2 * H * r;
  if (denom == 0) throw numerical_error("radius_slope_from_u: branch turning point");
  return -r / denom;
}

double UPath::gamma_span() const {
  double s = 0;
  for (const auto& a : arcs) s += std::abs(a.gamma1 - a.gamma0);
  return s;
}

double DelaunayProfile::flux_residual() const {
  double worst = 0;
  for (int i = 0; i < sample_count(); ++i)
    worst = std::max(worst, std::abs(u[i] * r[i] + H * r[i] * r[i] - flux));
  return worst;
}

DelaunayProfile profile_from_flux(double H, double flux, const UPath& path, int n_samples) {
  if (path.arcs.empty()) throw validation_error("profile_from_flux: empty path");
  if (n_samples < 2) throw validation_error("profile_from_flux: need at least 2 samples");
  const double total = path.gamma_span();
  if (!(total > 0)) throw validation_error("profile_from_flux: degenerate path");

  DelaunayProfile p;
  p.H = H;
  p.flux = flux;
  p.kind = classify_delaunay(H, flux);

  std::vector<double> gamma, u, r, z, w;
  KahanSum height;
  for (const auto& arc : path.arcs) {
    const double span = std::abs(arc.gamma1 - arc.gamma0);
    const int m = std::max(2, static_cast<int>(std::lround(n_samples * span / total)));
    for (int i = 0; i < m; ++i) {
      const double g = arc.gamma0 + (arc.gamma1 - arc.gamma0) * i / (m - 1);
      if (i > 0) height.add(quad_dz(gamma.back(), g, H, flux, arc.branch));
      gamma.push_back(g);
      u.push_back(std::sin(g));
      w.push_back(std::cos(g));
      r.push_back(radius_from_u(u.back(), H, flux, arc.branch));
      z.push_back(height.value());
    }
  }

  const int n = static_cast<int>(gamma.size());
  p.gamma = Eigen::Map<Eigen::ArrayXd>(gamma.data(), n);
  p.u = Eigen::Map<Eigen::ArrayXd>(u.data(), n);
  p.r = Eigen::Map<Eigen::ArrayXd>(r.data(), n);
  p.z = Eigen::Map<Eigen::ArrayXd>(z.data(), n);
  p.w = Eigen::Map<Eigen::ArrayXd>(w.data(), n);
  return p;
}

DelaunayProfile critical_nodoid(const EnergyParams& params, int n_samples) {
  params.validate(true);
  if (!(params.c0 > 0)) throw validation_error("critical_nodoid requires c0 > 0");
  UPath loop;
  loop.arcs.push_back({0.0, 2 * kPi, +1});
  loop.description = "full loop";
  return profile_from_flux(-params.c0, -params.c0 * params.alpha / params.beta, loop, n_samples);
}

std::vector<NodoidDomain> enumerate_domains(const EnergyParams& params, int n_samples) {
  std::vector<NodoidDomain> out;
  out.push_back(make_domain(params, DomainLabel::N1, kPi, 2 * kPi, 0, "inner half-loop", n_samples));
  out.push_back(make_domain(params, DomainLabel::N2, 0, kPi, 0, "outer half-loop (convex)", n_samples));
  out.push_back(make_domain(params, DomainLabel::N3, 0, 2 * kPi, 0, "full loop", n_samples));
  out.push_back(
      make_domain(params, DomainLabel::N4, kPi, 4 * kPi, 0, "one-and-a-half loops", n_samples));
  return out;
}

NodoidDomain sigma_epsilon(const EnergyParams& params, double epsilon, int n_samples) {
  params.validate(true);
  const double r0 = std::sqrt(params.alpha / params.beta);
  if (!(epsilon >= 0) || epsilon >= r0)
    throw validation_error("sigma_epsilon requires 0 <= epsilon < sqrt(alpha/beta)");
  const double gs = std::asin(epsilon / r0);
  return make_domain(params, DomainLabel::N2, gs, kPi - gs, epsilon,
                     epsilon == 0 ? "outer half-loop (convex)" : "deformed convex domain",
                     n_samples);
}

double analytic_total_curvature(const NodoidDomain& domain) {
  double tc = 0;
  for (const auto& arc : domain.u_path.arcs) {
    const double gm = (arc.gamma0 + arc.gamma1) / 2;
    const double slope =
        radius_slope_from_u(std::sin(gm), domain.profile.H, domain.profile.flux, arc.branch);
    const double sign = slope >= 0 ? 1.0 : -1.0;
    tc += sign * 2 * kPi * (std::cos(arc.gamma0) - std::cos(arc.gamma1));
  }
  return tc;
}

double analytic_energy(const NodoidDomain& domain, const EnergyParams& params) {
  const double r = domain.rim_radius;
  const double rims = 2 * (2 * kPi * (params.alpha / r + params.beta * r));
  return params.b * analytic_total_curvature(domain) + rims;
}

SecondVariation instability_second_derivative(const EnergyParams& params, double h) {
  params.validate(true);
  if (params.b == 0) throw validation_error("instability check requires b != 0");
  if (!(h > 0)) throw validation_error("instability check requires h > 0");
  const double r0 = std::sqrt(params.alpha / params.beta);
  SecondVariation sv;
  sv.analytic = -4 * kPi * params.b / (r0 * r0);
  const double e0 = analytic_energy(sigma_epsilon(params, 0, 16), params);
  const double e1 = analytic_energy(sigma_epsilon(params, h, 16), params);
  const double e2 = analytic_energy(sigma_epsilon(params, 2 * h, 16), params);
  sv.finite_difference = (e0 - 2 * e1 + e2) / (h * h);
  return sv;
}

TriMesh revolve_domain(const NodoidDomain& domain, int profile_rows, int azimuth_steps,
                       double grading) {
  if (domain.u_path.arcs.size() != 1)
    throw validation_error("revolve_domain expects a single-arc domain");
  if (profile_rows < 8 || azimuth_steps < 8)
    throw validation_error("revolve_domain: need at least 8 rows and 8 azimuth steps");
  const GaussArc arc = domain.u_path.arcs[0];
  const double H = domain.profile.H, flux = domain.profile.flux;

  Eigen::ArrayXd r(profile_rows + 1), z(profile_rows + 1);
  KahanSum height;
  double prev_g = arc.gamma0;
  for (int i = 0; i <= profile_rows; ++i) {
    const double xi = static_cast<double>(i) / profile_rows;
    const double g = arc.gamma0 + (arc.gamma1 - arc.gamma0) * tanh_grading(xi, grading);
    if (i > 0) height.add(quad_dz(prev_g, g, H, flux, arc.branch));
    r[i] = radius_from_u(std::sin(g), H, flux, arc.branch);
    z[i] = height.value();
    prev_g = g;
  }
  // Reversed so the mesh's outward normal matches the Gauss map (u e^{i t}, w).
  return revolve_profile(r.reverse(), z.reverse(), azimuth_steps);
}

void write_profile_csv(const std::string& path, const DelaunayProfile& profile) {
  std::FILE* out = std::fopen(path.c_str(), "w");
  if (!out) throw validation_error("cannot open for writing: " + path);
  std::fprintf(out, "u,r,z,w\n");
  for (int i = 0; i < profile.sample_count(); ++i)
    std::fprintf(out, "%.17g,%.17g,%.17g,%.17g\n", profile.u[i], profile.r[i], profile.z[i],
                 profile.w[i]);
  std::fclose(out);
}

}  // namespace eh
