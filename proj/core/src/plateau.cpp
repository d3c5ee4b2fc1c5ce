#include "eh/plateau.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

#include "eh/discrete_geometry.hpp"
#include "eh/errors.hpp"

namespace eh {

namespace {

// Symmetric half-cotan edge weights, no diagonal. Obtuse triangles make some
// weights negative; they are kept as-is (clamping biases the limit surface).
Eigen::SparseMatrix<double> cotan_weights(const TriMesh& mesh) {
  const int nv = mesh.vertex_count();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(12 * mesh.face_count());
  for (int f = 0; f < mesh.face_count(); ++f) {
    const Eigen::Vector3i tri = mesh.F.col(f);
    for (int c = 0; c < 3; ++c) {
      const int k = tri[c], i = tri[(c + 1) % 3], j = tri[(c + 2) % 3];
      const Eigen::Vector3d u = mesh.V.col(i) - mesh.V.col(k);
      const Eigen::Vector3d v = mesh.V.col(j) - mesh.V.col(k);
      const double cross = u.cross(v).norm();
      if (cross <= 0) throw numerical_error("degenerate triangle in cotan assembly");
      const double w = 0.5 * u.dot(v) / cross;
      trips.emplace_back(i, j, w);
      trips.emplace_back(j, i, w);
    }
  }
  Eigen::SparseMatrix<double> W(nv, nv);
  W.setFromTriplets(trips.begin(), trips.end());
  return W;
}

struct StepGeometry {
  Eigen::SparseMatrix<double> W;
  Eigen::VectorXd row_sum;
  Eigen::VectorXd area;          // mixed Voronoi
  Eigen::Matrix3Xd normal;
  Eigen::Matrix3Xd h_vec;        // (L x) / (2 A), the mean curvature vector
  Eigen::VectorXd h;             // h_vec . normal
};

StepGeometry step_geometry(const TriMesh& mesh) {
  StepGeometry g;
  g.W = cotan_weights(mesh);
  g.row_sum = g.W * Eigen::VectorXd::Ones(mesh.vertex_count());
  g.area = mixed_areas(mesh);
  g.normal = vertex_normals(mesh);
  const Eigen::MatrixXd X = mesh.V.transpose();
  const Eigen::MatrixXd LX = g.W * X - g.row_sum.asDiagonal() * X;
  g.h_vec = (LX.transpose().array().rowwise() / (2.0 * g.area.transpose().array())).matrix();
  g.h = (g.h_vec.array() * g.normal.array()).colwise().sum().transpose();
  return g;
}

// Pure normal motion (H - target_h) n. The tangential part of the raw mean
// curvature vector only reparameterizes the surface, and letting it act
// shears the triangulation against the fixed boundary over long runs.
void explicit_step(TriMesh& mesh, const StepGeometry& g, const std::vector<char>& boundary,
                   double dt, double target_h) {
  for (int i = 0; i < mesh.vertex_count(); ++i) {
    if (boundary[i]) continue;
    mesh.V.col(i) += dt * (g.h[i] - target_h) * g.normal.col(i);
  }
}

// One backward-Euler step of 2 A dx/dt = L x - 2 A target_h n with the
// Laplacian taken at the new positions and the forcing at the old ones.
// Boundary positions are known, so the interior block stays symmetric
// positive definite.
void semi_implicit_step(TriMesh& mesh, const StepGeometry& g, const std::vector<char>& boundary,
                        const std::vector<int>& interior_index, int n_interior, double dt,
                        double target_h) {
  const int nv = mesh.vertex_count();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(g.W.nonZeros() + nv);
  Eigen::MatrixXd rhs(n_interior, 3);
  for (int i = 0; i < nv; ++i) {
    const int ii = interior_index[i];
    if (ii < 0) continue;
    trips.emplace_back(ii, ii, 2.0 * g.area[i] + dt * g.row_sum[i]);
    rhs.row(ii) = 2.0 * g.area[i] * (mesh.V.col(i) - dt * target_h * g.normal.col(i)).transpose();
  }
  for (int col = 0; col < g.W.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(g.W, col); it; ++it) {
      const int i = static_cast<int>(it.row()), j = static_cast<int>(it.col());
      const int ii = interior_index[i];
      if (ii < 0) continue;
      if (interior_index[j] >= 0)
        trips.emplace_back(ii, interior_index[j], -dt * it.value());
      else
        rhs.row(ii) += dt * it.value() * mesh.V.col(j).transpose();
    }
  }
  Eigen::SparseMatrix<double> M(n_interior, n_interior);
  M.setFromTriplets(trips.begin(), trips.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(M);
  if (solver.info() != Eigen::Success)
    throw numerical_error("implicit flow step: factorization failed");
  const Eigen::MatrixXd X = solver.solve(rhs);
  if (solver.info() != Eigen::Success) throw numerical_error("implicit flow step: solve failed");
  // The full update is kept, tangential part included: the implicit
  // Laplacian's tangential component is what relaxes sliver configurations a
  // cone seed starts from (normal-only motion freezes them in).
  for (int i = 0; i < nv; ++i)
    if (interior_index[i] >= 0) mesh.V.col(i) = X.row(interior_index[i]).transpose();
  (void)boundary;
}

// Backward-Euler step restricted to motion along the current vertex normals,
// x+ = x + phi n. Solving (2 A / dt) phi - [L(phi n)] . n = 2 A (h - target)
// for the interior offsets keeps the step unconditionally stable while never
// moving a vertex inside the surface, so triangles cannot creep flat against
// concave stretches of the fixed boundary the way the free update does. Its
// fixed point is h = target at every interior vertex, exactly the
// convergence metric. Used once the shape is close and only pointwise
// curvature refinement remains; the free update has spurious rest states
// there (a Laplacian residual pointing along the surface stalls it) and
// degrades triangles if run long enough.
void normal_offset_step(TriMesh& mesh, const StepGeometry& g, const std::vector<char>& boundary,
                        const std::vector<int>& interior_index, int n_interior, double dt,
                        double target_h) {
  const int nv = mesh.vertex_count();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(g.W.nonZeros() + nv);
  Eigen::VectorXd rhs(n_interior);
  for (int i = 0; i < nv; ++i) {
    const int ii = interior_index[i];
    if (ii < 0) continue;
    trips.emplace_back(ii, ii, 2.0 * g.area[i] / dt + g.row_sum[i]);
    rhs[ii] = 2.0 * g.area[i] * (g.h[i] - target_h);
  }
  for (int col = 0; col < g.W.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(g.W, col); it; ++it) {
      const int i = static_cast<int>(it.row()), j = static_cast<int>(it.col());
      const int ii = interior_index[i];
      if (ii < 0 || interior_index[j] < 0) continue;  // boundary offsets are zero
      trips.emplace_back(ii, interior_index[j], -it.value() * g.normal.col(i).dot(g.normal.col(j)));
    }
  }
  Eigen::SparseMatrix<double> M(n_interior, n_interior);
  M.setFromTriplets(trips.begin(), trips.end());
  // Negative cotangent weights can push the symmetric system slightly off
  // definite, so use LU rather than LDLT.
  Eigen::SparseLU<Eigen::SparseMatrix<double>> solver(M);
  if (solver.info() != Eigen::Success)
    throw numerical_error("normal offset step: factorization failed");
  const Eigen::VectorXd phi = solver.solve(rhs);
  if (solver.info() != Eigen::Success) throw numerical_error("normal offset step: solve failed");
  for (int i = 0; i < nv; ++i)
    if (interior_index[i] >= 0) mesh.V.col(i) += phi[interior_index[i]] * g.normal.col(i);
  (void)boundary;
}

// Area-weighted umbrella displacement projected onto the tangent plane;
// equalizes triangle sizes without moving the surface in the normal
// direction. The move is capped against the smallest height of the incident
// triangles (not their edges: a sliver collapses under a move far shorter
// than its shortest edge), and kept gentle so it cannot fight the flow.
void tangential_smooth(TriMesh& mesh, const std::vector<char>& boundary,
                       const std::vector<std::vector<int>>& adjacency,
                       const std::vector<std::vector<int>>& vertex_faces) {
  const Eigen::Matrix3Xd normal = vertex_normals(mesh);
  const Eigen::VectorXd area = mixed_areas(mesh);
  Eigen::Matrix3Xd moved = mesh.V;
  for (int i = 0; i < mesh.vertex_count(); ++i) {
    if (boundary[i]) continue;
    Eigen::Vector3d num = Eigen::Vector3d::Zero();
    double den = 0;
    for (int j : adjacency[i]) {
      num += area[j] * mesh.V.col(j);
      den += area[j];
    }
    if (den <= 0) continue;
    double min_height = std::numeric_limits<double>::infinity();
    for (int f : vertex_faces[i]) {
      const Eigen::Vector3d a = mesh.V.col(mesh.F(0, f)), b = mesh.V.col(mesh.F(1, f)),
                            c = mesh.V.col(mesh.F(2, f));
      const double twice_area = (b - a).cross(c - a).norm();
      const double longest =
          std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
      if (longest > 0) min_height = std::min(min_height, twice_area / longest);
    }
    Eigen::Vector3d delta = num / den - mesh.V.col(i);
    delta -= delta.dot(normal.col(i)) * normal.col(i);
    delta *= 0.1;
    const double cap = 0.2 * min_height;
    const double len = delta.norm();
    if (len > cap && len > 0) delta *= cap / len;
    moved.col(i) += delta;
  }
  mesh.V = moved;
}

}  // namespace

void FlowConfig::validate() const {
  if (!(time_step > 0)) throw validation_error("flow time_step must be positive");
  if (max_iters < 1) throw validation_error("flow max_iters must be >= 1");
  if (!(h_tolerance >= 0)) throw validation_error("flow h_tolerance must be >= 0");
  if (!(target_H <= 0))
    throw validation_error("flow target_H must be <= 0 (outward-normal sign convention)");
  if (remesh_interval < 0) throw validation_error("flow remesh_interval must be >= 0");
  if (energy_params) energy_params->validate(false);
}

const char* to_string(FlowStatus s) {
  switch (s) {
    case FlowStatus::Converged: return "converged";
    case FlowStatus::MaxIters: return "max-iters";
    case FlowStatus::Diverged: return "diverged";
  }
  return "?";
}

double explicit_stability_bound(const TriMesh& mesh) {
  double min_edge_sq = std::numeric_limits<double>::infinity();
  for (int f = 0; f < mesh.face_count(); ++f) {
    const Eigen::Vector3i tri = mesh.F.col(f);
    for (int c = 0; c < 3; ++c) {
      const double e = (mesh.V.col(tri[c]) - mesh.V.col(tri[(c + 1) % 3])).squaredNorm();
      min_edge_sq = std::min(min_edge_sq, e);
    }
  }
  return 0.4 * min_edge_sq;
}

FlowResult run_flow(const TriMesh& mesh, const FlowConfig& config) {
  config.validate();
  mesh.validate();
  const std::vector<char> boundary = mesh.boundary_vertex_mask();
  if (mesh.fixed_mask.size() != boundary.size() ||
      !std::equal(boundary.begin(), boundary.end(), mesh.fixed_mask.begin()))
    throw validation_error("run_flow needs fixed_mask to mark exactly the boundary vertices");
  if (config.step_mode == StepMode::Explicit) {
    const double bound = explicit_stability_bound(mesh);
    if (config.time_step > bound)
      throw validation_error("explicit flow step " + std::to_string(config.time_step) +
                             " exceeds the stability bound " + std::to_string(bound));
  }

  std::vector<int> interior_index(mesh.vertex_count(), -1);
  int n_interior = 0;
  for (int i = 0; i < mesh.vertex_count(); ++i)
    if (!boundary[i]) interior_index[i] = n_interior++;
  if (n_interior == 0) throw validation_error("run_flow needs at least one interior vertex");
  const std::vector<std::vector<int>> adjacency = vertex_vertex_adjacency(mesh);
  const std::vector<std::vector<int>> vertex_faces = vertex_face_adjacency(mesh);

  FlowResult result;
  result.mesh = mesh;
  double prev_disp = std::numeric_limits<double>::infinity();
  int growth_streak = 0;
  bool refine_phase = false;
  double best_max_h = std::numeric_limits<double>::infinity();
  int best_iter = 0;

  for (int iter = 0; iter < config.max_iters; ++iter) {
    const StepGeometry g = step_geometry(result.mesh);
    double max_h_error = 0;
    for (int i = 0; i < result.mesh.vertex_count(); ++i)
      if (!boundary[i]) max_h_error = std::max(max_h_error, std::abs(g.h[i] - config.target_H));

    FlowTrace::Row row;
    row.iter = iter;
    row.max_h_error = max_h_error;
    row.area = total_area(result.mesh);
    row.energy = config.energy_params
                     ? evaluate_energy(result.mesh, *config.energy_params).total
                     : std::numeric_limits<double>::quiet_NaN();
    result.iterations = iter;

    if (max_h_error < config.h_tolerance) {
      result.trace.rows.push_back(row);
      result.status = FlowStatus::Converged;
      return result;
    }

    // Hand over to the normal-offset step once the curvature error is small
    // on the scale of the surface, or once the free update has stopped making
    // progress (it stalls in tangential rest states at a shape-dependent
    // level). The switch is one way.
    if (max_h_error < best_max_h) {
      best_max_h = max_h_error;
      best_iter = iter;
    }
    if (!refine_phase &&
        (max_h_error * std::sqrt(row.area) < 0.05 || iter - best_iter > 100))
      refine_phase = true;

    const Eigen::Matrix3Xd before = result.mesh.V;
    if (config.step_mode == StepMode::Explicit)
      explicit_step(result.mesh, g, boundary, config.time_step, config.target_H);
    else if (refine_phase)
      normal_offset_step(result.mesh, g, boundary, interior_index, n_interior, config.time_step,
                         config.target_H);
    else
      semi_implicit_step(result.mesh, g, boundary, interior_index, n_interior, config.time_step,
                         config.target_H);
    row.max_displacement = (result.mesh.V - before).colwise().norm().maxCoeff();
    result.trace.rows.push_back(row);

    growth_streak = row.max_displacement > prev_disp ? growth_streak + 1 : 0;
    prev_disp = row.max_displacement;
    if (growth_streak >= 20) {
      result.status = FlowStatus::Diverged;
      return result;
    }

    if (!refine_phase && config.remesh_interval > 0 && (iter + 1) % config.remesh_interval == 0)
      tangential_smooth(result.mesh, boundary, adjacency, vertex_faces);
  }
  result.status = FlowStatus::MaxIters;
  result.iterations = config.max_iters;
  return result;
}

EquilibriumReport verify_equilibrium(const TriMesh& mesh, const EnergyParams& params) {
  params.validate(false);
  const std::vector<char> boundary = mesh.boundary_vertex_mask();
  const std::vector<std::vector<int>> adjacency = vertex_vertex_adjacency(mesh);
  const int nv = mesh.vertex_count();
  std::vector<char> near(nv, 0);  // graph distance <= 1 from the boundary
  for (int i = 0; i < nv; ++i) {
    if (boundary[i]) { near[i] = 1; continue; }
    for (int j : adjacency[i])
      if (boundary[j]) { near[i] = 1; break; }
  }

  const Eigen::SparseMatrix<double> W = cotan_weights(mesh);
  const Eigen::VectorXd area = mixed_areas(mesh);
  const Eigen::VectorXd h = vertex_mean_curvature(mesh);
  const Eigen::VectorXd defect = vertex_angle_defect(mesh);

  EquilibriumReport report;
  double scale = 0;
  for (int i = 0; i < nv; ++i) {
    if (near[i]) continue;
    double lap = 0;
    for (Eigen::SparseMatrix<double>::InnerIterator it(W, i); it; ++it)
      lap += it.value() * (h[it.row()] - h[i]);
    lap /= area[i];
    const double k = defect[i] / area[i];
    const double algebraic = 2.0 * (h[i] + params.c0) * (h[i] * (h[i] - params.c0) - k);
    report.r1_max_abs = std::max(report.r1_max_abs, std::abs(lap + algebraic));
    scale = std::max({scale, std::abs(lap), std::abs(algebraic)});
  }
  const double kappa_s = std::sqrt(params.beta / params.alpha);
  report.r1 = report.r1_max_abs / (scale + kappa_s * kappa_s * kappa_s);
  report.boundary = el_boundary_residuals(mesh, params);
  return report;
}

void write_flow_trace_csv(const FlowTrace& trace, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw validation_error("cannot open " + path + " for writing");
  const bool with_energy =
      !trace.rows.empty() && std::isfinite(trace.rows.front().energy);
  std::fprintf(f, with_energy ? "iter,maxH,maxdisp,area,energy\n" : "iter,maxH,maxdisp,area\n");
  for (const FlowTrace::Row& r : trace.rows) {
    if (with_energy)
      std::fprintf(f, "%d,%.17g,%.17g,%.17g,%.17g\n", r.iter, r.max_h_error, r.max_displacement,
                   r.area, r.energy);
    else
      std::fprintf(f, "%d,%.17g,%.17g,%.17g\n", r.iter, r.max_h_error, r.max_displacement, r.area);
  }
  std::fclose(f);
}

}  // namespace eh
