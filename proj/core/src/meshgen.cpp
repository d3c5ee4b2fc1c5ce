#include "eh/meshgen.hpp"

#include <cmath>
#include <map>
#include <vector>

#include "eh/errors.hpp"
#include "eh/numerics.hpp"

namespace eh {

namespace {

void mark_boundary_fixed(TriMesh& mesh) {
  const std::vector<char> mask = mesh.boundary_vertex_mask();
  mesh.fixed_mask.assign(mask.begin(), mask.end());
}

}  // namespace

TriMesh revolve_profile(const Eigen::ArrayXd& r, const Eigen::ArrayXd& z, int azimuth_steps,
                        bool pole_start, bool pole_end) {
  const int m = static_cast<int>(r.size());
  const int nv = azimuth_steps;
  if (m < 2 || z.size() != m) throw validation_error("revolve_profile: need matching r,z with >= 2 points");
  if (nv < 3) throw validation_error("revolve_profile: need >= 3 azimuth steps");
  const double rmax = r.maxCoeff();
  if (pole_start && !(std::abs(r[0]) < 1e-7 * rmax))
    throw validation_error("revolve_profile: pole_start requires r[0] ~ 0");
  if (pole_end && !(std::abs(r[m - 1]) < 1e-7 * rmax))
    throw validation_error("revolve_profile: pole_end requires r[last] ~ 0");

  const int k0 = pole_start ? 1 : 0;
  const int k1 = pole_end ? m - 2 : m - 1;
  const int nrings = k1 - k0 + 1;
  if (nrings < 1) throw validation_error("revolve_profile: profile too short for the requested poles");
  for (int k = k0; k <= k1; ++k)
    if (!(r[k] > 0)) throw validation_error("revolve_profile: non-pole profile radius must be positive");

  TriMesh mesh;
  const int base = pole_start ? 1 : 0;
  const int n_vertices = base + nrings * nv + (pole_end ? 1 : 0);
  mesh.V.resize(3, n_vertices);
  if (pole_start) mesh.V.col(0) = Eigen::Vector3d(0, 0, z[0]);
  for (int k = 0; k < nrings; ++k) {
    const double rk = r[k0 + k], zk = z[k0 + k];
    for (int j = 0; j < nv; ++j) {
      const double th = 2 * kPi * j / nv;
      mesh.V.col(base + k * nv + j) = Eigen::Vector3d(rk * std::cos(th), rk * std::sin(th), zk);
    }
  }
  const int pole_end_id = base + nrings * nv;
  if (pole_end) mesh.V.col(pole_end_id) = Eigen::Vector3d(0, 0, z[m - 1]);

  auto vid = [&](int ring, int j) { return base + ring * nv + (j % nv); };
  std::vector<Eigen::Vector3i> faces;
  faces.reserve(2 * nrings * nv);
  int probe_face = -1, probe_segment = -1;
  for (int k = 0; k + 1 < nrings; ++k) {
    for (int j = 0; j < nv; ++j) {
      if (probe_face < 0) {
        probe_face = static_cast<int>(faces.size());
        probe_segment = k0 + k;
      }
      faces.push_back({vid(k, j), vid(k, j + 1), vid(k + 1, j)});
      faces.push_back({vid(k, j + 1), vid(k + 1, j + 1), vid(k + 1, j)});
    }
  }
  if (pole_start) {
    for (int j = 0; j < nv; ++j) {
      if (probe_face < 0) {
        probe_face = static_cast<int>(faces.size());
        probe_segment = 0;
      }
      faces.push_back({0, vid(0, j + 1), vid(0, j)});
    }
  }
  if (pole_end) {
    for (int j = 0; j < nv; ++j) {
      if (probe_face < 0) {
        probe_face = static_cast<int>(faces.size());
        probe_segment = m - 2;
      }
      faces.push_back({vid(nrings - 1, j), vid(nrings - 1, j + 1), pole_end_id});
    }
  }
  mesh.F.resize(3, static_cast<int>(faces.size()));
  for (size_t f = 0; f < faces.size(); ++f) mesh.F.col(static_cast<int>(f)) = faces[f];

  // Orient so the outward normal follows the rotated profile normal (z', -r').
  const Eigen::Vector3d a = mesh.V.col(mesh.F(0, probe_face));
  const Eigen::Vector3d b = mesh.V.col(mesh.F(1, probe_face));
  const Eigen::Vector3d c = mesh.V.col(mesh.F(2, probe_face));
  const Eigen::Vector3d centroid = (a + b + c) / 3;
  const double theta_c = std::atan2(centroid.y(), centroid.x());
  const double dr = r[probe_segment + 1] - r[probe_segment];
  const double dz = z[probe_segment + 1] - z[probe_segment];
  const Eigen::Vector3d expected(dz * std::cos(theta_c), dz * std::sin(theta_c), -dr);
  if ((b - a).cross(c - a).dot(expected) < 0) mesh.F.row(1).swap(mesh.F.row(2));

  mark_boundary_fixed(mesh);
  return mesh;
}

TriMesh make_icosphere(double radius, int subdivisions) {
  if (!(radius > 0)) throw validation_error("icosphere radius must be positive");
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Eigen::Vector3d> verts = {
      {-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t},  {0, 1, t},
      {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
  std::vector<Eigen::Vector3i> faces = {
      {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9},  {5, 11, 4},
      {11, 10, 2}, {10, 7, 6}, {7, 1, 8},   {3, 9, 4},  {3, 4, 2},   {3, 2, 6},  {3, 6, 8},
      {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  for (auto& v : verts) v = radius * v.normalized();

  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      const int id = static_cast<int>(verts.size());
      verts.push_back(radius * (verts[a] + verts[b]).normalized());
      midpoint[key] = id;
      return id;
    };
    std::vector<Eigen::Vector3i> next;
    next.reserve(4 * faces.size());
    for (const auto& f : faces) {
      const int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    faces = std::move(next);
  }

  TriMesh mesh;
  mesh.V.resize(3, static_cast<int>(verts.size()));
  for (size_t i = 0; i < verts.size(); ++i) mesh.V.col(static_cast<int>(i)) = verts[i];
  mesh.F.resize(3, static_cast<int>(faces.size()));
  for (size_t f = 0; f < faces.size(); ++f) mesh.F.col(static_cast<int>(f)) = faces[f];

  const Eigen::Vector3d a = mesh.V.col(mesh.F(0, 0)), b = mesh.V.col(mesh.F(1, 0)),
                        c = mesh.V.col(mesh.F(2, 0));
  if ((b - a).cross(c - a).dot(a + b + c) < 0) mesh.F.row(1).swap(mesh.F.row(2));
  return mesh;
}

TriMesh make_disc_from_curve(const SampledCurve& boundary, int rings) {
  if (!boundary.closed) throw validation_error("disc construction needs a closed boundary curve");
  if (rings < 1) throw validation_error("disc construction needs >= 1 ring");
  const int m = boundary.cycle_count();
  if (m < 3) throw validation_error("boundary curve too coarse");

  Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
  for (int i = 0; i < m; ++i) centroid += boundary.points.col(i);
  centroid /= m;

  // Boundary point at fractional sample index, for rings with fewer samples.
  auto curve_at = [&](double u) -> Eigen::Vector3d {
    u -= std::floor(u);
    const double s = u * m;
    const int i = std::min(static_cast<int>(s), m - 1);
    const double f = s - i;
    return (1 - f) * boundary.points.col(i) + f * boundary.points.col((i + 1) % m);
  };

  // Inner rings are decimated with their radius so the triangles keep roughly
  // unit aspect; a full-count fan would meet the apex in slivers that poison
  // the curvature estimators.
  std::vector<int> count(rings), offset(rings);
  std::vector<double> shrink(rings);
  int nv = 0;
  for (int k = 0; k < rings; ++k) {
    shrink[k] = 1.0 - static_cast<double>(k) / rings;
    count[k] = k == 0 ? m : std::max(6, static_cast<int>(std::lround(m * shrink[k])));
    count[k] = std::min(count[k], k == 0 ? m : count[k - 1]);
    offset[k] = nv;
    nv += count[k];
  }
  TriMesh mesh;
  mesh.V.resize(3, nv + 1);
  for (int i = 0; i < m; ++i) mesh.V.col(i) = boundary.points.col(i);
  for (int k = 1; k < rings; ++k)
    for (int i = 0; i < count[k]; ++i)
      mesh.V.col(offset[k] + i) =
          centroid + shrink[k] * (curve_at(static_cast<double>(i) / count[k]) - centroid);
  const int center = nv;
  mesh.V.col(center) = centroid;

  std::vector<Eigen::Vector3i> faces;
  faces.reserve(3 * nv);
  for (int k = 0; k + 1 < rings; ++k) {
    // zip the two rings by fractional progress; orientation matches the
    // boundary loop so the normals of a planar disc point the same way as
    // its curve's binormal frame
    const int ma = count[k], mb = count[k + 1];
    auto va = [&](int i) { return offset[k] + (i % ma); };
    auto vb = [&](int j) { return offset[k + 1] + (j % mb); };
    int i = 0, j = 0;
    while (i < ma || j < mb) {
      const bool advance_outer =
          i < ma && (j >= mb || (i + 1) * static_cast<long long>(mb) <=
                                    (j + 1) * static_cast<long long>(ma));
      if (advance_outer) {
        faces.push_back({va(i), va(i + 1), vb(j)});
        ++i;
      } else {
        faces.push_back({va(i), vb(j + 1), vb(j)});
        ++j;
      }
    }
  }
  const int ml = count[rings - 1];
  for (int i = 0; i < ml; ++i)
    faces.push_back({offset[rings - 1] + i, offset[rings - 1] + (i + 1) % ml, center});
  mesh.F.resize(3, static_cast<int>(faces.size()));
  for (size_t f = 0; f < faces.size(); ++f) mesh.F.col(static_cast<int>(f)) = faces[f];
  mark_boundary_fixed(mesh);
  return mesh;
}

TriMesh make_annulus_between(const SampledCurve& a, const SampledCurve& b, int rows) {
  if (!a.closed || !b.closed) throw validation_error("annulus construction needs closed rim curves");
  if (rows < 1) throw validation_error("annulus construction needs >= 1 row");
  const int m = a.cycle_count();
  if (m != b.cycle_count()) throw validation_error("rim curves must have equal sample counts");
  if (m < 3) throw validation_error("rim curves too coarse");

  TriMesh mesh;
  mesh.V.resize(3, m * (rows + 1));
  for (int k = 0; k <= rows; ++k) {
    const double t = static_cast<double>(k) / rows;
    for (int i = 0; i < m; ++i)
      mesh.V.col(k * m + i) = (1 - t) * a.points.col(i) + t * b.points.col(i);
  }
  auto vid = [&](int ring, int i) { return ring * m + (i % m); };
  std::vector<Eigen::Vector3i> faces;
  faces.reserve(2 * rows * m);
  for (int k = 0; k < rows; ++k) {
    for (int i = 0; i < m; ++i) {
      faces.push_back({vid(k, i), vid(k, i + 1), vid(k + 1, i)});
      faces.push_back({vid(k, i + 1), vid(k + 1, i + 1), vid(k + 1, i)});
    }
  }
  mesh.F.resize(3, static_cast<int>(faces.size()));
  for (size_t f = 0; f < faces.size(); ++f) mesh.F.col(static_cast<int>(f)) = faces[f];
  mark_boundary_fixed(mesh);
  return mesh;
}

TriMesh make_flat_disc(double radius, int boundary_samples, int rings) {
  return make_disc_from_curve(make_circle(radius, boundary_samples), rings);
}

TriMesh make_planar_annulus(double r_inner, double r_outer, int azimuth_steps, int rows) {
  if (!(0 < r_inner && r_inner < r_outer)) throw validation_error("planar annulus needs 0 < r_inner < r_outer");
  Eigen::ArrayXd r = Eigen::ArrayXd::LinSpaced(rows + 1, r_outer, r_inner);
  Eigen::ArrayXd z = Eigen::ArrayXd::Zero(rows + 1);
  return revolve_profile(r, z, azimuth_steps);
}

TriMesh make_cylinder(double radius, double half_height, int azimuth_steps, int rows) {
  if (!(radius > 0 && half_height > 0)) throw validation_error("cylinder needs positive radius and height");
  Eigen::ArrayXd z = Eigen::ArrayXd::LinSpaced(rows + 1, -half_height, half_height);
  Eigen::ArrayXd r = Eigen::ArrayXd::Constant(rows + 1, radius);
  return revolve_profile(r, z, azimuth_steps);
}

TriMesh make_hemisphere(double radius, int azimuth_steps, int rows) {
  if (!(radius > 0)) throw validation_error("hemisphere radius must be positive");
  Eigen::ArrayXd t = Eigen::ArrayXd::LinSpaced(rows + 1, 0.0, kPi / 2);  // equator to pole
  Eigen::ArrayXd r = radius * t.cos();
  Eigen::ArrayXd z = radius * t.sin();
  r[rows] = 0.0;
  return revolve_profile(r, z, azimuth_steps, false, true);
}

TriMesh make_spherical_annulus(double sphere_radius, double boundary_radius, int azimuth_steps,
                               int rows) {
  if (!(0 < boundary_radius && boundary_radius < sphere_radius))
    throw validation_error("spherical annulus needs boundary_radius < sphere_radius");
  const double phi = std::asin(boundary_radius / sphere_radius);
  // south rim up to north rim so the rotated profile normal points outward
  Eigen::ArrayXd s = Eigen::ArrayXd::LinSpaced(rows + 1, phi, kPi - phi);
  Eigen::ArrayXd r = sphere_radius * s.sin();
  Eigen::ArrayXd z = -sphere_radius * s.cos();
  r[0] = boundary_radius;
  r[rows] = boundary_radius;
  return revolve_profile(r, z, azimuth_steps);
}

TriMesh make_spherical_cap(double sphere_radius, double boundary_radius, int azimuth_steps,
                           int rows, bool major) {
  if (!(0 < boundary_radius && boundary_radius <= sphere_radius))
    throw validation_error("spherical cap needs boundary_radius <= sphere_radius");
  const double phi = std::asin(std::min(1.0, boundary_radius / sphere_radius));
  Eigen::ArrayXd s, r, z;
  if (major) {
    // south pole up to the rim
    s = Eigen::ArrayXd::LinSpaced(rows + 1, 0.0, kPi - phi);
    r = sphere_radius * s.sin();
    z = -sphere_radius * s.cos();
    r[0] = 0.0;
    r[rows] = boundary_radius;
    return revolve_profile(r, z, azimuth_steps, true, false);
  }
  // rim up to the north pole
  s = Eigen::ArrayXd::LinSpaced(rows + 1, phi, 0.0);
  r = sphere_radius * s.sin();
  z = sphere_radius * s.cos();
  r[0] = boundary_radius;
  r[rows] = 0.0;
  return revolve_profile(r, z, azimuth_steps, false, true);
}

TriMesh make_catenoid_slice(double aspect, double boundary_radius, int azimuth_steps, int rows) {
  if (!(aspect > 0 && boundary_radius > 0))
    throw validation_error("catenoid slice needs positive aspect and boundary radius");
  const double c = boundary_radius / std::cosh(aspect);
  const double h = c * aspect;
  Eigen::ArrayXd z = Eigen::ArrayXd::LinSpaced(rows + 1, -h, h);
  Eigen::ArrayXd r = (z / c).cosh() * c;
  r[0] = boundary_radius;
  r[rows] = boundary_radius;
  return revolve_profile(r, z, azimuth_steps);
}

TriMesh make_sphere_with_holes(double sphere_radius, double hole_radius, int holes,
                               int azimuth_steps, int rows) {
  if (holes == 1) return make_spherical_cap(sphere_radius, hole_radius, azimuth_steps, rows, true);
  if (holes == 2) return make_spherical_annulus(sphere_radius, hole_radius, azimuth_steps, rows);
  throw validation_error("sphere with holes supports 1 or 2 holes");
}

}  // namespace eh
