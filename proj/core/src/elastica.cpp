#include "eh/elastica.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>

#include "eh/errors.hpp"
#include "eh/numerics.hpp"

namespace eh {

CurveParams::CurveParams(double mu_, double lambda_) : mu(mu_), lambda(lambda_) {
  if (!(lambda + mu * mu > 0.0))
    throw validation_error("CurveParams: lambda + mu^2 must be positive");
}

FirstIntegrals::FirstIntegrals(double d_, double e_) : d(d_), e(e_) {
  if (d < 0.0) throw validation_error("FirstIntegrals: d must be nonnegative");
  if (d == 0.0 && e != 0.0)
    throw validation_error("FirstIntegrals: d = 0 forces e = 0");
}

double radicand(double kappa, const CurveParams& params, const FirstIntegrals& fi) {
  double A = params.circle_kappa_sq();
  double osc = kappa * kappa - A;
  double q = fi.d - osc * osc;
  if (fi.e != 0.0) {
    double w = kappa + params.mu;
    if (w == 0.0)
      throw numerical_error("radicand: kappa = -mu is singular when e != 0");
    q -= fi.e * fi.e / (4.0 * w * w);
  }
  return q;
}

double torsion_from_curvature(double kappa, const CurveParams& params,
                              const FirstIntegrals& fi) {
  if (fi.e == 0.0) return 0.0;
  double w = kappa + params.mu;
  if (w == 0.0)
    throw numerical_error("torsion_from_curvature: kappa = -mu is singular when e != 0");
  return fi.e / (4.0 * w * w);
}

CircleSolution circle_solution(const CurveParams& params) {
  CircleSolution c;
  c.kappa = std::sqrt(params.circle_kappa_sq());
  c.radius = 1.0 / c.kappa;
  return c;
}

namespace {

// One oscillation band [kappa_min, kappa_max] of the radicand, with the
// residual quartic left after dividing out both turning points. With
// κ(φ) = κ_max − (κ_max−κ_min) sin²φ the raw 4κ'² = Q(κ) turns into
// (dφ/ds)² = R/16 where R stays strictly positive through the turning points.
struct Kernel {
  CurveParams prm;
  FirstIntegrals fi;
  double A = 0.0;
  double kmin = 0.0, kmax = 0.0, dk = 0.0;
  std::vector<double> quartic;
  double period = 0.0;

  double kappa_at(double phi) const {
    double sp = std::sin(phi);
    return kmax - dk * sp * sp;
  }
  double kappa_prime_at(double phi) const {
    return -dk * std::sin(2.0 * phi) * std::sqrt(R_at(kappa_at(phi))) / 4.0;
  }
  double R_at(double kappa) const {
    double w = kappa + prm.mu;
    double r = -poly_eval(quartic, kappa) / (4.0 * w * w);
    return r;
  }
  double phi_rate(double phi) const {
    double r = R_at(kappa_at(phi));
    if (!(r > 0.0))
      throw numerical_error("elastica kernel: desingularized radicand not positive");
    return std::sqrt(r) / 4.0;
  }
  double ds_dphi(double phi) const { return 1.0 / phi_rate(phi); }
};

// Degree-6 polynomial S(κ) = 4(κ+μ)²[d − (κ²−A)²] − e², sharing the sign of
// Q away from κ = −μ.
std::vector<double> sextic(const CurveParams& prm, const FirstIntegrals& fi) {
  double A = prm.circle_kappa_sq();
  std::vector<double> wsq = {prm.mu * prm.mu, 2.0 * prm.mu, 1.0};
  std::vector<double> body = {fi.d - A * A, 0.0, 2.0 * A, 0.0, -1.0};
  std::vector<double> s = poly_mul(wsq, body);
  for (double& c : s) c *= 4.0;
  s[0] -= fi.e * fi.e;
  return s;
}

Kernel kernel_from_roots(const CurveParams& prm, const FirstIntegrals& fi, double kmin,
                         double kmax) {
  Kernel k;
  k.prm = prm;
  k.fi = fi;
  k.A = prm.circle_kappa_sq();
  k.kmin = kmin;
  k.kmax = kmax;
  k.dk = kmax - kmin;
  k.quartic = poly_deflate(poly_deflate(sextic(prm, fi), kmax), kmin);
  if (!(k.R_at(0.5 * (kmin + kmax)) > 0.0))
    throw numerical_error("elastica kernel: radicand not positive between turning points");
  k.period = 2.0 * integrate_gl([&](double phi) { return k.ds_dphi(phi); }, 0.0,
                                0.5 * kPi, 96);
  return k;
}

Kernel build_kernel(const CurveParams& prm, const FirstIntegrals& fi) {
  if (!(fi.d > 0.0))
    throw numerical_error(
        "curvature does not oscillate: d = 0 is the constant-curvature branch");
  double A = prm.circle_kappa_sq();
  double hi = std::sqrt(A + std::sqrt(fi.d)) * (1.0 + 1e-9);
  double lo = std::max(0.0, -prm.mu) + 1e-9 * std::max(1.0, hi);
  if (lo >= hi)
    throw numerical_error("curvature does not oscillate: admissible band is empty");

  std::vector<double> S = sextic(prm, fi);
  auto Sval = [&](double kappa) { return poly_eval(S, kappa); };

  const int n_scan = 10000;
  double h = (hi - lo) / n_scan;
  double prev = Sval(lo);
  if (prev > 0.0)
    throw numerical_error(
        "curvature does not oscillate: no lower turning point above max(0, -mu)");
  // Keep the highest positive band found on the scan.
  double a = 0.0, b = 0.0;
  bool have_band = false, inside = false;
  double enter = 0.0;
  for (int i = 1; i <= n_scan; ++i) {
    double x = lo + i * h;
    double v = Sval(x);
    if (!inside && prev <= 0.0 && v > 0.0) {
      inside = true;
      enter = bisect([&](double t) { return Sval(t); }, x - h, x, 1e-14);
    } else if (inside && v <= 0.0) {
      inside = false;
      a = enter;
      b = bisect([&](double t) { return Sval(t); }, x - h, x, 1e-14);
      have_band = true;
    }
    prev = v;
  }
  if (!have_band)
    throw numerical_error("curvature does not oscillate: radicand has no positive band");
  if (b - a < 1e-8)
    throw numerical_error(
        "curvature does not oscillate: turning points coincide (use circle_solution)");
  if (fi.e != 0.0 && a < -prm.mu && -prm.mu < b)
    throw numerical_error("elastica kernel: kappa = -mu lies inside the oscillation band");
  return kernel_from_roots(prm, fi, a, b);
}

// phi(s) on a uniform arclength grid by fixed-step RK4.
std::vector<double> integrate_phi(const Kernel& k, int n, int periods, int substeps) {
  std::vector<double> phi(static_cast<size_t>(n) * periods + 1);
  double ds = k.period / n;
  double h = ds / substeps;
  double y = 0.0;
  phi[0] = 0.0;
  for (size_t j = 1; j < phi.size(); ++j) {
    for (int m = 0; m < substeps; ++m) {
      double k1 = k.phi_rate(y);
      double k2 = k.phi_rate(y + 0.5 * h * k1);
      double k3 = k.phi_rate(y + 0.5 * h * k2);
      double k4 = k.phi_rate(y + h * k3);
      y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    phi[j] = y;
  }
  double drift = std::abs(phi[n] - kPi);
  if (drift > 1e-7)
    throw numerical_error("curvature_profile: period integration drift too large");
  return phi;
}

struct Defects {
  double dz = 0.0;
  double dtheta = 0.0;
};

Defects defects_of(const Kernel& k) {
  const CurveParams& prm = k.prm;
  const FirstIntegrals& fi = k.fi;
  double A = k.A;
  double sqd = std::sqrt(fi.d);
  auto dz_f = [&](double phi) {
    double kap = k.kappa_at(phi);
    return (kap * kap - A) * k.ds_dphi(phi);
  };
  auto dth_f = [&](double phi) {
    double kap = k.kappa_at(phi);
    double w = kap + prm.mu;
    double den = 4.0 * fi.d * w * w - fi.e * fi.e;
    if (!(den > 0.0))
      throw numerical_error("closure_defects: cylindrical radius degenerates on profile");
    return (kap * kap - A) / den * k.ds_dphi(phi);
  };
  Defects out;
  out.dz = 2.0 / sqd * integrate_gl(dz_f, 0.0, 0.5 * kPi, 96);
  out.dtheta = -2.0 * fi.e * sqd * integrate_gl(dth_f, 0.0, 0.5 * kPi, 96);
  return out;
}

}  // namespace

CurvatureProfile curvature_profile(const CurveParams& params, const FirstIntegrals& fi,
                                   int n_samples) {
  if (n_samples < 16) throw validation_error("curvature_profile: too few samples");
  Kernel k = build_kernel(params, fi);
  std::vector<double> phi = integrate_phi(k, n_samples, 1, 32);

  CurvatureProfile p;
  p.params = params;
  p.integrals = fi;
  p.kappa_min = k.kmin;
  p.kappa_max = k.kmax;
  p.period = k.period;
  p.s.resize(phi.size());
  p.kappa.resize(phi.size());
  p.kappa_prime.resize(phi.size());
  p.tau.resize(phi.size());
  for (size_t j = 0; j < phi.size(); ++j) {
    p.s[j] = j * (k.period / n_samples);
    p.kappa[j] = k.kappa_at(phi[j]);
    p.kappa_prime[j] = k.kappa_prime_at(phi[j]);
    p.tau[j] = torsion_from_curvature(p.kappa[j], params, fi);
  }
  return p;
}

ClosureDefects closure_defects(const CurvatureProfile& profile) {
  Kernel k = kernel_from_roots(profile.params, profile.integrals, profile.kappa_min,
                               profile.kappa_max);
  Defects d = defects_of(k);
  return ClosureDefects{d.dz, d.dtheta};
}

namespace {

// Cylindrical quantities of the reconstruction at a given phase.
struct CylState {
  double r, r1, r2;      // radius and its first two arclength derivatives
  double z1, z2;         // axial rate and derivative
  double th1, th2;       // azimuthal rate and derivative
  double kappa, tau;
};

CylState cyl_state(const Kernel& k, double phi) {
  const double mu = k.prm.mu, d = k.fi.d, e = k.fi.e, A = k.A;
  CylState c;
  c.kappa = k.kappa_at(phi);
  double w = c.kappa + mu;
  double den = 4.0 * d * w * w - e * e;
  if (!(den > 0.0))
    throw numerical_error("reconstruct_curve: cylindrical radius degenerates");
  c.r = std::sqrt(den) / d;
  double kp = k.kappa_prime_at(phi);
  double Qp = -4.0 * c.kappa * (c.kappa * c.kappa - A);
  if (e != 0.0) Qp += e * e / (2.0 * w * w * w);
  double kpp = Qp / 8.0;
  double sqd = std::sqrt(d);
  c.r1 = 4.0 * w * kp / (d * c.r);
  c.r2 = (4.0 * kp * kp + 4.0 * w * kpp) / (d * c.r) - c.r1 * c.r1 / c.r;
  c.z1 = (c.kappa * c.kappa - A) / sqd;
  c.z2 = 2.0 * c.kappa * kp / sqd;
  c.th1 = -e * c.z1 / (d * c.r * c.r);
  c.th2 = -e * (c.z2 * c.r - 2.0 * c.z1 * c.r1) / (d * c.r * c.r * c.r);
  c.tau = (e == 0.0) ? 0.0 : e / (4.0 * w * w);
  return c;
}

void cyl_frame(const CylState& c, double theta, Eigen::Vector3d& T, Eigen::Vector3d& N,
               Eigen::Vector3d& B) {
  Eigen::Vector3d er(std::cos(theta), std::sin(theta), 0.0);
  Eigen::Vector3d eth(-std::sin(theta), std::cos(theta), 0.0);
  Eigen::Vector3d ez(0.0, 0.0, 1.0);
  T = c.r1 * er + c.r * c.th1 * eth + c.z1 * ez;
  T.normalize();
  Eigen::Vector3d acc = (c.r2 - c.r * c.th1 * c.th1) * er +
                        (2.0 * c.r1 * c.th1 + c.r * c.th2) * eth + c.z2 * ez;
  N = acc - acc.dot(T) * T;
  N.normalize();
  B = T.cross(N);
}

}  // namespace

SampledCurve reconstruct_curve(const CurvatureProfile& profile, int periods) {
  if (periods < 1) throw validation_error("reconstruct_curve: periods must be >= 1");
  const int n = static_cast<int>(profile.kappa.size()) - 1;
  Kernel k = kernel_from_roots(profile.params, profile.integrals, profile.kappa_min,
                               profile.kappa_max);

  // Joint state [phi, z, theta]; radius and frames are algebraic in phi.
  const int substeps = 16;
  const int total = n * periods;
  double ds = k.period / n;
  double h = ds / substeps;
  Eigen::Vector3d y(0.0, 0.0, 0.0);
  auto rate = [&](const Eigen::Vector3d& u) {
    CylState c = cyl_state(k, u[0]);
    double pr = k.phi_rate(u[0]);
    return Eigen::Vector3d(pr, c.z1, c.th1);
  };

  SampledCurve out;
  out.ds = ds;
  out.points.resize(3, total + 1);
  out.tangent.resize(3, total + 1);
  out.normal.resize(3, total + 1);
  out.binormal.resize(3, total + 1);
  out.kappa.resize(total + 1);
  out.tau.resize(total + 1);

  auto store = [&](int j) {
    CylState c = cyl_state(k, y[0]);
    double z = y[1], th = y[2];
    out.points.col(j) =
        Eigen::Vector3d(c.r * std::cos(th), c.r * std::sin(th), z);
    Eigen::Vector3d T, N, B;
    cyl_frame(c, th, T, N, B);
    out.tangent.col(j) = T;
    out.normal.col(j) = N;
    out.binormal.col(j) = B;
    out.kappa[j] = c.kappa;
    out.tau[j] = c.tau;
  };
  store(0);
  for (int j = 1; j <= total; ++j) {
    for (int m = 0; m < substeps; ++m) {
      Eigen::Vector3d k1 = rate(y);
      Eigen::Vector3d k2 = rate(y + 0.5 * h * k1);
      Eigen::Vector3d k3 = rate(y + 0.5 * h * k2);
      Eigen::Vector3d k4 = rate(y + h * k3);
      y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    store(j);
  }
  double gap = (out.points.col(0) - out.points.col(total)).norm();
  out.closed = gap < 1e-5 * (ds * total);
  return out;
}

double reconstruction_gap(const CurvatureProfile& profile, int periods) {
  SampledCurve cyl = reconstruct_curve(profile, periods);
  Kernel k = kernel_from_roots(profile.params, profile.integrals, profile.kappa_min,
                               profile.kappa_max);

  // Independent route: direct Frenet integration with the same curvature law.
  using State = Eigen::Matrix<double, 13, 1>;
  auto rate = [&](const State& u) {
    double phi = u[0];
    double kap = k.kappa_at(phi);
    double tau = (k.fi.e == 0.0) ? 0.0 : k.fi.e / (4.0 * std::pow(kap + k.prm.mu, 2));
    Eigen::Vector3d T = u.segment<3>(4), N = u.segment<3>(7), B = u.segment<3>(10);
    State du;
    du[0] = k.phi_rate(phi);
    du.segment<3>(1) = T;
    du.segment<3>(4) = kap * N;
    du.segment<3>(7) = -kap * T - tau * B;
    du.segment<3>(10) = tau * N;
    return du;
  };

  State y;
  y[0] = 0.0;
  y.segment<3>(1) = cyl.points.col(0);
  y.segment<3>(4) = cyl.tangent.col(0);
  y.segment<3>(7) = cyl.normal.col(0);
  y.segment<3>(10) = cyl.binormal.col(0);

  const int n = static_cast<int>(profile.kappa.size()) - 1;
  const int total = n * periods;
  const int substeps = 16;
  double h = (k.period / n) / substeps;
  Eigen::Matrix3Xd pts(3, total + 1);
  pts.col(0) = y.segment<3>(1);
  for (int j = 1; j <= total; ++j) {
    for (int m = 0; m < substeps; ++m) {
      State k1 = rate(y);
      State k2 = rate(y + 0.5 * h * k1);
      State k3 = rate(y + 0.5 * h * k2);
      State k4 = rate(y + h * k3);
      y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    pts.col(j) = y.segment<3>(1);
  }
  return rigid_alignment_gap(cyl.points, pts);
}

double el_residual_curve(const SampledCurve& curve, const CurveParams& params) {
  if (!curve.closed)
    throw validation_error("el_residual_curve: requires a closed curve");
  const int n = curve.cycle_count();
  const double A = params.circle_kappa_sq();
  std::vector<double> kap(n);
  for (int i = 0; i < n; ++i) kap[i] = curve.kappa[i];
  std::vector<double> kp = cyclic_derivative4(kap, curve.ds);

  Eigen::Matrix3Xd J(3, n);
  double jmax = 0.0;
  for (int i = 0; i < n; ++i) {
    double k = curve.kappa[i], t = curve.tau[i];
    // Binormal term carries a minus because tau is stored as B'.N here.
    Eigen::Vector3d v = (k * k - A) * curve.tangent.col(i) +
                        2.0 * kp[i] * curve.normal.col(i) -
                        2.0 * t * (k + params.mu) * curve.binormal.col(i);
    J.col(i) = v;
    jmax = std::max(jmax, v.norm());
  }
  double rmax = 0.0;
  std::vector<double> comp(n), dcomp;
  Eigen::Matrix3Xd Jp(3, n);
  for (int c = 0; c < 3; ++c) {
    for (int i = 0; i < n; ++i) comp[i] = J(c, i);
    dcomp = cyclic_derivative4(comp, curve.ds);
    for (int i = 0; i < n; ++i) Jp(c, i) = dcomp[i];
  }
  for (int i = 0; i < n; ++i) rmax = std::max(rmax, Jp.col(i).norm());
  return rmax / (jmax + A);
}

int genus_bound(int q, int p) {
  if (p < 1 || q < 1) throw validation_error("genus_bound: p, q must be >= 1");
  if (std::gcd(p, q) != 1) throw validation_error("genus_bound: gcd(p, q) must be 1");
  return ((p - 1) * (q - 1) + 1) / 2;
}

namespace {

struct FamilyPoint {
  double e = 0.0;
  Defects defects;
  double period = 0.0;
};

// All zeros of delta_z(e) at fixed d, in ascending e. Out-of-domain samples
// (no oscillation window) are skipped, which bounds the admissible e band
// without solving for it. Typically one zero; all are returned so the caller
// can track a branch by index.
std::vector<FamilyPoint> dz_zeros(const CurveParams& prm, double d, double e_lo, double e_hi) {
  std::vector<FamilyPoint> zeros;

  auto eval = [&](double e) -> std::optional<FamilyPoint> {
    try {
      Kernel k = build_kernel(prm, FirstIntegrals(d, e));
      return FamilyPoint{e, defects_of(k), k.period};
    } catch (const numerical_error&) {
      return std::nullopt;
    }
  };

  auto refine = [&](double lo, double hi, double dz_lo) -> std::optional<FamilyPoint> {
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      auto fm = eval(mid);
      if (!fm) return std::nullopt;
      if (std::abs(fm->defects.dz) < 1e-10 * fm->period) return fm;
      if ((fm->defects.dz > 0.0) == (dz_lo > 0.0)) {
        lo = mid;
        dz_lo = fm->defects.dz;
      } else {
        hi = mid;
      }
    }
    return std::nullopt;
  };

  const int n_grid = 160;
  double prev_e = 0.0, prev_dz = 0.0;
  bool have_prev = false;
  for (int i = 0; i <= n_grid; ++i) {
    double e = e_lo + (e_hi - e_lo) * i / n_grid;
    auto cur = eval(e);
    if (!cur) {
      have_prev = false;
      continue;
    }
    if (have_prev && ((prev_dz > 0.0) != (cur->defects.dz > 0.0))) {
      auto z = refine(prev_e, e, prev_dz);
      if (z) zeros.push_back(*z);
    }
    prev_e = e;
    prev_dz = cur->defects.dz;
    have_prev = true;
  }
  return zeros;
}

}  // namespace

FirstIntegrals find_closed_curve(const CurveParams& params, int q, int p,
                                 const SearchBox& box) {
  if (p < 1 || q < 1) throw validation_error("find_closed_curve: p, q must be >= 1");
  if (std::gcd(p, q) != 1)
    throw validation_error("find_closed_curve: gcd(p, q) must be 1");
  if (!(box.e_min > 0.0) || !(box.e_max > box.e_min) || !(box.d_max > 0.0) ||
      box.grid < 4)
    throw validation_error("find_closed_curve: invalid search box");

  const double target = 2.0 * kPi * p / q;

  // Scan d; each delta_z = 0 branch (indexed by its position in the
  // ascending-e zero list) gives a one-parameter delta_theta curve in d. The
  // winding angle grows monotonically with d along the family, from 0 at
  // d -> 0 toward pi at the upper end, so a log grid spanning several decades
  // below d_max brackets any reachable target.
  const double d_lo = box.d_max * 1e-4;
  std::vector<double> ds;
  std::vector<std::vector<FamilyPoint>> rows;
  double th_min = std::numeric_limits<double>::infinity();
  double th_max = -th_min;
  for (int i = 0; i <= box.grid; ++i) {
    double d = d_lo * std::pow(box.d_max / d_lo, static_cast<double>(i) / box.grid);
    auto zs = dz_zeros(params, d, box.e_min, box.e_max);
    if (zs.empty()) continue;
    for (const auto& z : zs) {
      th_min = std::min(th_min, z.defects.dtheta);
      th_max = std::max(th_max, z.defects.dtheta);
    }
    ds.push_back(d);
    rows.push_back(std::move(zs));
  }
  if (ds.size() < 2)
    throw numerical_error("find_closed_curve: no delta_z = 0 family inside search box");

  // The e -> -e mirror negates delta_theta, so hitting -target also works.
  struct Bracket {
    double d_lo, d_hi, f_lo;
    size_t branch;
    double sign;
  };
  auto bracketed = [&](double t, double sign) -> std::optional<Bracket> {
    for (size_t i = 0; i + 1 < ds.size(); ++i) {
      size_t nb = std::min(rows[i].size(), rows[i + 1].size());
      for (size_t b = 0; b < nb; ++b) {
        double f0 = rows[i][b].defects.dtheta - t;
        double f1 = rows[i + 1][b].defects.dtheta - t;
        if (f0 * f1 <= 0.0) return Bracket{ds[i], ds[i + 1], f0, b, sign};
      }
    }
    return std::nullopt;
  };
  // The family terminates at a finite d* where the closure zero meets the
  // period-divergence boundary and delta_theta climbs steeply toward pi, so
  // the last grid interval usually swallows every target beyond the last
  // gridded family point. Hunt inside that interval: d values past d* have
  // no zero at all and bound the interval from above, d values before it
  // carry a zero whose delta_theta keeps growing.
  auto tail_hunt = [&](double t, double sign) -> std::optional<Bracket> {
    if (!(t > 0.0) || t >= kPi) return std::nullopt;
    double d_up = 0.0;
    for (int i = 0; i <= box.grid; ++i) {
      double d = d_lo * std::pow(box.d_max / d_lo, static_cast<double>(i) / box.grid);
      if (d > ds.back() * (1.0 + 1e-12)) {
        d_up = d;
        break;
      }
    }
    if (d_up == 0.0) return std::nullopt;  // family reaches the box edge
    auto top_branch = [](const std::vector<FamilyPoint>& zs) {
      size_t best = 0;
      for (size_t b = 1; b < zs.size(); ++b)
        if (zs[b].defects.dtheta > zs[best].defects.dtheta) best = b;
      return best;
    };
    double lo = ds.back();
    double fl = rows.back()[top_branch(rows.back())].defects.dtheta - t;
    if (fl >= 0.0) return std::nullopt;
    double hi = d_up;
    for (int it = 0; it < 80; ++it) {
      double mid = 0.5 * (lo + hi);
      auto zs = dz_zeros(params, mid, box.e_min, box.e_max);
      if (zs.empty()) {
        hi = mid;
        continue;
      }
      size_t b = top_branch(zs);
      double f = zs[b].defects.dtheta - t;
      if (f >= 0.0) return Bracket{lo, mid, fl, b, sign};
      lo = mid;
      fl = f;
    }
    return std::nullopt;
  };
  auto br = bracketed(target, 1.0);
  if (!br) br = bracketed(-target, -1.0);
  if (!br) br = tail_hunt(target, 1.0);
  if (!br) {
    std::ostringstream msg;
    msg << "find_closed_curve: target 2*pi*" << p << "/" << q
        << " not reachable; delta_theta values on the family spanned [" << th_min
        << ", " << th_max << "]";
    throw numerical_error(msg.str());
  }

  double goal = br->sign * target;
  double lo = br->d_lo, hi = br->d_hi, flo = br->f_lo;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    auto zs = dz_zeros(params, mid, box.e_min, box.e_max);
    if (zs.size() <= br->branch)
      throw numerical_error("find_closed_curve: delta_z branch lost during refinement");
    const FamilyPoint& fp = zs[br->branch];
    double fm = fp.defects.dtheta - goal;
    if (std::abs(fm) < 1e-9) return FirstIntegrals(mid, br->sign * fp.e);
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  throw numerical_error("find_closed_curve: bisection stalled before tolerance");
}

}  // namespace eh
