#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>

namespace eh {

// Arc-length-sampled space curve with Frenet data, the exchange type between
// the curve solvers, the mesh builders, and the CLI.
//
// Closed curves store the wrap sample explicitly: the last column revisits the
// first one up to the closure gap. Cyclic quantities (integrals, spectral
// derivatives) run over the first cycle_count() columns.
struct SampledCurve {
  Eigen::Matrix3Xd points;
  Eigen::Matrix3Xd tangent;
  Eigen::Matrix3Xd normal;
  Eigen::Matrix3Xd binormal;
  Eigen::VectorXd kappa;
  Eigen::VectorXd tau;
  double ds = 0.0;  // uniform arclength step
  bool closed = true;

  int sample_count() const { return static_cast<int>(points.cols()); }
  int cycle_count() const { return closed ? sample_count() - 1 : sample_count(); }
  double length() const {
    return ds * (closed ? cycle_count() : sample_count() - 1);
  }
  double closure_gap() const;

  // Frame orthonormality and sizing checks; throws validation_error.
  void validate(double tol = 1e-9) const;
};

// Circle of given radius in the z=0 plane, arc-length sampled, n distinct
// samples plus the wrap sample.
SampledCurve make_circle(double radius, int n);

// ∮ f ds over one traversal (closed: rectangle rule on the cycle, which is the
// trapezoid rule by periodicity; open: trapezoid).
double integrate_curve(const SampledCurve& c, const Eigen::VectorXd& values);

// Integrates the Frenet system x' = T, T' = kappa N, N' = -kappa T - tau B,
// B' = tau N by RK4 with `substeps` internal steps per output interval (the
// torsion sign convention is tau = B'·N throughout this library). kappa/tau
// are functions of arclength. Returns n+1 samples.
SampledCurve frenet_integrate(const std::function<double(double)>& kappa,
                              const std::function<double(double)>& tau,
                              double total_length, int n, bool closed,
                              const Eigen::Vector3d& x0,
                              const Eigen::Matrix3d& tnb0, int substeps = 16);

void write_curve_csv(const SampledCurve& c, const std::string& path);
void write_curve_obj(const SampledCurve& c, const std::string& path);
SampledCurve read_curve_csv(const std::string& path);

}  // namespace eh
