#include "eh/discrete_geometry.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <unordered_set>

#include "eh/errors.hpp"
#include "eh/numerics.hpp"

namespace eh {

namespace {

inline double corner_angle(const Eigen::Vector3d& at, const Eigen::Vector3d& p, const Eigen::Vector3d& q) {
  const Eigen::Vector3d u = p - at, v = q - at;
  return std::atan2(u.cross(v).norm(), u.dot(v));
}

inline double cot(double angle) { return std::cos(angle) / std::sin(angle); }

// Aggregated first and second interior rings around a boundary vertex.
struct BoundaryRings {
  Eigen::Vector3d x1 = Eigen::Vector3d::Zero(), x2 = Eigen::Vector3d::Zero();
  double h1 = 0.0, h2 = 0.0;  // mean of a scalar field over each ring
  int n1 = 0, n2 = 0;
};

// Vertices adjacent to any boundary vertex (first interior row).
std::vector<char> near_boundary_mask(const std::vector<std::vector<int>>& adj,
                                     const std::vector<char>& on_boundary) {
  std::vector<char> near(on_boundary.size(), 0);
  for (size_t v = 0; v < adj.size(); ++v) {
    if (!on_boundary[v]) continue;
    for (int j : adj[v])
      if (!on_boundary[j]) near[j] = 1;
  }
  return near;
}

BoundaryRings boundary_rings(int v, const std::vector<std::vector<int>>& adj,
                             const std::vector<char>& on_boundary, const std::vector<char>& near_boundary,
                             const Eigen::Matrix3Xd& V, const Eigen::VectorXd* field) {
  BoundaryRings r;
  std::unordered_set<int> ring1;
  for (int j : adj[v]) {
    if (on_boundary[j]) continue;
    ring1.insert(j);
    r.x1 += V.col(j);
    if (field) r.h1 += (*field)(j);
    ++r.n1;
  }
  if (r.n1 > 0) {
    r.x1 /= r.n1;
    r.h1 /= r.n1;
  }
  // Second ring: prefer vertices a full row deeper (not adjacent to the
  // boundary at all); first-row neighbors of ring1 would bias the fit.
  for (int pass = 0; pass < 2 && r.n2 == 0; ++pass) {
    std::unordered_set<int> ring2;
    for (int j : ring1) {
      for (int k : adj[j]) {
        if (on_boundary[k] || ring1.count(k) || k == v || ring2.count(k)) continue;
        if (pass == 0 && near_boundary[k]) continue;
        ring2.insert(k);
        r.x2 += V.col(k);
        if (field) r.h2 += (*field)(k);
        ++r.n2;
      }
    }
  }
  if (r.n2 > 0) {
    r.x2 /= r.n2;
    r.h2 /= r.n2;
  }
  return r;
}

}  // namespace

Eigen::Matrix3Xd vertex_normals(const TriMesh& mesh) {
  Eigen::Matrix3Xd normals = Eigen::Matrix3Xd::Zero(3, mesh.vertex_count());
  for (int f = 0; f < mesh.face_count(); ++f) {
    const int a = mesh.F(0, f), b = mesh.F(1, f), c = mesh.F(2, f);
    const Eigen::Vector3d fn = (mesh.V.col(b) - mesh.V.col(a)).cross(mesh.V.col(c) - mesh.V.col(a));
    const double fn_norm = fn.norm();
    if (fn_norm <= 0.0) continue;
    const Eigen::Vector3d unit = fn / fn_norm;
    normals.col(a) += corner_angle(mesh.V.col(a), mesh.V.col(b), mesh.V.col(c)) * unit;
    normals.col(b) += corner_angle(mesh.V.col(b), mesh.V.col(c), mesh.V.col(a)) * unit;
    normals.col(c) += corner_angle(mesh.V.col(c), mesh.V.col(a), mesh.V.col(b)) * unit;
  }
  for (int i = 0; i < normals.cols(); ++i) {
    const double len = normals.col(i).norm();
    if (len <= 0.0) throw numerical_error("vertex with no usable incident faces for a normal");
    normals.col(i) /= len;
  }
  return normals;
}

Eigen::VectorXd mixed_areas(const TriMesh& mesh) {
  Eigen::VectorXd area = Eigen::VectorXd::Zero(mesh.vertex_count());
  for (int f = 0; f < mesh.face_count(); ++f) {
    const int idx[3] = {mesh.F(0, f), mesh.F(1, f), mesh.F(2, f)};
    const Eigen::Vector3d p[3] = {mesh.V.col(idx[0]), mesh.V.col(idx[1]), mesh.V.col(idx[2])};
    double ang[3];
    for (int c = 0; c < 3; ++c) ang[c] = corner_angle(p[c], p[(c + 1) % 3], p[(c + 2) % 3]);
    const double face_area = 0.5 * (p[1] - p[0]).cross(p[2] - p[0]).norm();
    int obtuse = -1;
    for (int c = 0; c < 3; ++c)
      if (ang[c] > kPi / 2) obtuse = c;
    for (int c = 0; c < 3; ++c) {
      if (obtuse >= 0) {
        area[idx[c]] += (c == obtuse) ? face_area / 2 : face_area / 4;
      } else {
        const double e1 = (p[(c + 1) % 3] - p[c]).squaredNorm();
        const double e2 = (p[(c + 2) % 3] - p[c]).squaredNorm();
        area[idx[c]] += (e1 * cot(ang[(c + 2) % 3]) + e2 * cot(ang[(c + 1) % 3])) / 8;
      }
    }
  }
  return area;
}

Eigen::VectorXd vertex_mean_curvature(const TriMesh& mesh) {
  const int n = mesh.vertex_count();
  Eigen::Matrix3Xd kvec = Eigen::Matrix3Xd::Zero(3, n);
  for (int f = 0; f < mesh.face_count(); ++f) {
    const int idx[3] = {mesh.F(0, f), mesh.F(1, f), mesh.F(2, f)};
    const Eigen::Vector3d p[3] = {mesh.V.col(idx[0]), mesh.V.col(idx[1]), mesh.V.col(idx[2])};
    for (int c = 0; c < 3; ++c) {
      // cot at corner c weights the opposite edge
      const double w = cot(corner_angle(p[c], p[(c + 1) % 3], p[(c + 2) % 3]));
      kvec.col(idx[(c + 1) % 3]) += w * (p[(c + 1) % 3] - p[(c + 2) % 3]);
      kvec.col(idx[(c + 2) % 3]) += w * (p[(c + 2) % 3] - p[(c + 1) % 3]);
    }
  }
  const Eigen::VectorXd area = mixed_areas(mesh);
  const Eigen::Matrix3Xd normals = vertex_normals(mesh);
  const std::vector<char> on_boundary = mesh.boundary_vertex_mask();
  const double mean_area = area.sum() / n;
  Eigen::VectorXd h(n);
  for (int i = 0; i < n; ++i) {
    if (on_boundary[i]) {
      h[i] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    if (!(area[i] > 1e-14 * mean_area)) throw numerical_error("zero-area vertex star in mean curvature");
    h[i] = -kvec.col(i).dot(normals.col(i)) / (4 * area[i]);
  }
  return h;
}

Eigen::VectorXd vertex_angle_defect(const TriMesh& mesh) {
  const int n = mesh.vertex_count();
  Eigen::VectorXd angle_sum = Eigen::VectorXd::Zero(n);
  for (int f = 0; f < mesh.face_count(); ++f) {
    const int idx[3] = {mesh.F(0, f), mesh.F(1, f), mesh.F(2, f)};
    const Eigen::Vector3d p[3] = {mesh.V.col(idx[0]), mesh.V.col(idx[1]), mesh.V.col(idx[2])};
    for (int c = 0; c < 3; ++c) angle_sum[idx[c]] += corner_angle(p[c], p[(c + 1) % 3], p[(c + 2) % 3]);
  }
  const std::vector<char> on_boundary = mesh.boundary_vertex_mask();
  Eigen::VectorXd defect(n);
  for (int i = 0; i < n; ++i) defect[i] = (on_boundary[i] ? kPi : 2 * kPi) - angle_sum[i];
  return defect;
}

BoundaryFrame boundary_darboux(const TriMesh& mesh, const std::vector<int>& loop) {
  const int m = static_cast<int>(loop.size());
  if (m < 8) throw validation_error("boundary loop too coarse for frame estimation (need >= 8 vertices)");

  const auto adj = vertex_vertex_adjacency(mesh);
  const std::vector<char> on_boundary = mesh.boundary_vertex_mask();
  const std::vector<char> near_bd = near_boundary_mask(adj, on_boundary);

  // Angle-weighted normals restricted to faces touching the loop.
  const auto vf = vertex_face_adjacency(mesh);

  BoundaryFrame bf;
  bf.vertices = loop;
  bf.T.resize(3, m);
  bf.n.resize(3, m);
  bf.nu.resize(3, m);
  bf.kappa.resize(m);
  bf.kappa_g.resize(m);
  bf.kappa_n.resize(m);
  bf.tau_g.resize(m);
  bf.theta.resize(m);
  bf.tau.resize(m);
  bf.ds.resize(m);

  Eigen::Matrix3Xd frenet_n(3, m), frenet_b(3, m);
  std::vector<double> h1(m), h2(m);

  for (int k = 0; k < m; ++k) {
    const Eigen::Vector3d xm = mesh.V.col(loop[(k + m - 1) % m]);
    const Eigen::Vector3d x0 = mesh.V.col(loop[k]);
    const Eigen::Vector3d xp = mesh.V.col(loop[(k + 1) % m]);
    h1[k] = (x0 - xm).norm();
    h2[k] = (xp - x0).norm();
    if (h1[k] <= 0 || h2[k] <= 0) throw validation_error("repeated boundary vertex position");
    bf.ds[k] = (h1[k] + h2[k]) / 2;
    bf.length += h2[k];

    const Eigen::Vector3d T = (xp - xm).normalized();
    bf.T.col(k) = T;

    // Menger curvature of the three-point circle.
    const double chord = (xp - xm).norm();
    const double tri2 = (x0 - xm).cross(xp - x0).norm();  // twice the triangle area
    bf.kappa[k] = 2 * tri2 / (h1[k] * h2[k] * chord);

    // Curvature direction from the nonuniform second difference, projected off T.
    Eigen::Vector3d d2 = 2 / (h1[k] * (h1[k] + h2[k])) * xm - 2 / (h1[k] * h2[k]) * x0 +
                         2 / (h2[k] * (h1[k] + h2[k])) * xp;
    d2 -= d2.dot(T) * T;

    // Surface normal: face-average seed, sharpened by the one-sided tangent fit
    // through the first two interior rings (kills the half-step tilt bias).
    Eigen::Vector3d nu_face = Eigen::Vector3d::Zero();
    for (int f : vf[loop[k]]) {
      const int a = mesh.F(0, f), b = mesh.F(1, f), c = mesh.F(2, f);
      const Eigen::Vector3d fn = (mesh.V.col(b) - mesh.V.col(a)).cross(mesh.V.col(c) - mesh.V.col(a));
      int corner = (a == loop[k]) ? 0 : (b == loop[k] ? 1 : 2);
      const int i0 = mesh.F(corner, f), i1 = mesh.F((corner + 1) % 3, f), i2 = mesh.F((corner + 2) % 3, f);
      const double w = corner_angle(mesh.V.col(i0), mesh.V.col(i1), mesh.V.col(i2));
      if (fn.norm() > 0) nu_face += w * fn.normalized();
    }
    if (nu_face.norm() <= 0) throw numerical_error("boundary vertex without usable incident faces");
    nu_face.normalize();

    const BoundaryRings rings = boundary_rings(loop[k], adj, on_boundary, near_bd, mesh.V, nullptr);
    Eigen::Vector3d nu;
    if (rings.n1 == 0) {
      nu = nu_face;
    } else {
      // Work in the plane normal to T; ring centroids carry tangential offsets
      // that would otherwise pollute the fit distances.
      const Eigen::Vector3d p1 = (rings.x1 - x0) - (rings.x1 - x0).dot(T) * T;
      const Eigen::Vector3d p2 = (rings.x2 - x0) - (rings.x2 - x0).dot(T) * T;
      Eigen::Vector3d v;
      const double t1 = p1.norm(), t2 = p2.norm();
      if (rings.n2 == 0 || t1 <= 0 || t2 - t1 <= 1e-9 * (t1 + t2)) {
        v = p1;
      } else {
        v = (t2 * t2 * p1 - t1 * t1 * p2) / (t1 * t2 * (t2 - t1));
      }
      Eigen::Vector3d inward = v - v.dot(T) * T;
      if (inward.norm() < 1e-12) {
        nu = nu_face;
      } else {
        nu = T.cross(inward.normalized());
        if (nu.dot(nu_face) < 0) nu = -nu;
      }
    }
    nu -= nu.dot(T) * T;
    nu.normalize();
    bf.nu.col(k) = nu;
    bf.n.col(k) = T.cross(nu);

    Eigen::Vector3d N;
    if (d2.norm() < 1e-12 * bf.kappa.maxCoeff() || bf.kappa[k] < 1e-300) {
      N = nu;  // near-straight sample; angle is immaterial since kappa ~ 0
    } else {
      N = d2.normalized();
    }
    frenet_n.col(k) = N;
    frenet_b.col(k) = T.cross(N);

    bf.theta[k] = std::atan2(N.dot(bf.n.col(k)), N.dot(nu));
    bf.kappa_g[k] = bf.kappa[k] * std::sin(bf.theta[k]);
    bf.kappa_n[k] = bf.kappa[k] * std::cos(bf.theta[k]);
  }

  // Torsion with the library's B' . N storage sign, and tau_g = theta' - tau.
  auto wrap = [](double a) {
    while (a > kPi) a -= 2 * kPi;
    while (a < -kPi) a += 2 * kPi;
    return a;
  };
  for (int k = 0; k < m; ++k) {
    const int km = (k + m - 1) % m, kp = (k + 1) % m;
    const double span = h1[k] + h2[k];
    bf.tau[k] = (frenet_b.col(kp) - frenet_b.col(km)).dot(frenet_n.col(k)) / span;
    const double theta_prime = (wrap(bf.theta[kp] - bf.theta[k]) + wrap(bf.theta[k] - bf.theta[km])) / span;
    bf.tau_g[k] = theta_prime - bf.tau[k];
  }
  return bf;
}

BoundaryH boundary_h_extrapolation(const TriMesh& mesh, const std::vector<int>& loop,
                                   const Eigen::VectorXd& h_field) {
  const auto adj = vertex_vertex_adjacency(mesh);
  const std::vector<char> on_boundary = mesh.boundary_vertex_mask();
  const std::vector<char> near_bd = near_boundary_mask(adj, on_boundary);
  const int m = static_cast<int>(loop.size());
  BoundaryH out;
  out.h.resize(m);
  out.dh_dn.resize(m);
  for (int k = 0; k < m; ++k) {
    const BoundaryRings rings = boundary_rings(loop[k], adj, on_boundary, near_bd, mesh.V, &h_field);
    if (rings.n1 == 0) throw numerical_error("boundary vertex has no interior neighbors for H extrapolation");
    const Eigen::Vector3d x0 = mesh.V.col(loop[k]);
    const Eigen::Vector3d T =
        (mesh.V.col(loop[(k + 1) % m]) - mesh.V.col(loop[(k + m - 1) % m])).normalized();
    const double t1 = ((rings.x1 - x0) - (rings.x1 - x0).dot(T) * T).norm();
    const double t2 = ((rings.x2 - x0) - (rings.x2 - x0).dot(T) * T).norm();
    if (rings.n2 == 0 || t1 <= 0 || t2 - t1 <= 1e-9 * (t1 + t2)) {
      out.h[k] = rings.h1;
      out.dh_dn[k] = 0.0;
      continue;
    }
    const double slope = (rings.h2 - rings.h1) / (t2 - t1);  // along the inward direction
    out.h[k] = rings.h1 - slope * t1;
    out.dh_dn[k] = -slope;
  }
  return out;
}

SurfaceIntegrals integrate_surface(const TriMesh& mesh, double c0) {
  const Eigen::VectorXd area = mixed_areas(mesh);
  const Eigen::VectorXd h = vertex_mean_curvature(mesh);
  const Eigen::VectorXd defect = vertex_angle_defect(mesh);
  const std::vector<char> on_boundary = mesh.boundary_vertex_mask();

  SurfaceIntegrals out;
  KahanSum a_sum, sq_sum, k_sum, off_sum;
  for (int i = 0; i < mesh.vertex_count(); ++i) {
    a_sum.add(area[i]);
    if (on_boundary[i]) continue;
    k_sum.add(defect[i]);
    const double v = h[i] + c0;
    sq_sum.add(v * v * area[i]);
    off_sum.add(v * area[i]);
  }
  for (const auto& loop : mesh.boundary_loops()) {
    const BoundaryH bh = boundary_h_extrapolation(mesh, loop, h);
    for (int k = 0; k < static_cast<int>(loop.size()); ++k) {
      const double v = bh.h[k] + c0;
      sq_sum.add(v * v * area[loop[k]]);
      off_sum.add(v * area[loop[k]]);
    }
  }
  out.area = a_sum.value();
  out.total_h_plus_c0_sq = sq_sum.value();
  out.total_k = k_sum.value();
  out.total_h_offset = off_sum.value();
  return out;
}

double gauss_bonnet_residual(const TriMesh& mesh) {
  const Eigen::VectorXd defect = vertex_angle_defect(mesh);
  const std::vector<char> on_boundary = mesh.boundary_vertex_mask();
  KahanSum interior, turning;
  for (int i = 0; i < mesh.vertex_count(); ++i) {
    if (on_boundary[i])
      turning.add(-defect[i]);  // theta_sum - pi, the geodesic turning integral
    else
      interior.add(defect[i]);
  }
  return std::abs(interior.value() - turning.value() - 2 * kPi * mesh.euler_characteristic());
}

WirtingerSides wirtinger_check(const SampledCurve& curve) {
  if (!curve.closed) throw validation_error("Wirtinger check requires a closed curve");
  WirtingerSides sides;
  sides.lhs = 4 * kPi * kPi / curve.length();
  sides.rhs = integrate_curve(curve, curve.kappa.array().square().matrix());
  return sides;
}

void write_vertex_scalars_csv(const TriMesh& mesh, const std::string& path) {
  const Eigen::VectorXd h = vertex_mean_curvature(mesh);
  const Eigen::VectorXd defect = vertex_angle_defect(mesh);
  std::FILE* out = std::fopen(path.c_str(), "w");
  if (!out) throw validation_error("cannot open for writing: " + path);
  std::fprintf(out, "vertex_index,H,K_defect\n");
  for (int i = 0; i < mesh.vertex_count(); ++i) {
    if (std::isnan(h[i]))
      std::fprintf(out, "%d,,%.17g\n", i, defect[i]);
    else
      std::fprintf(out, "%d,%.17g,%.17g\n", i, h[i], defect[i]);
  }
  std::fclose(out);
}

}  // namespace eh
