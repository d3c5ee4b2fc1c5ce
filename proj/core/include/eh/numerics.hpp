#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace eh {

inline constexpr double kPi = 3.14159265358979323846;

// Compensated accumulator for long sums of small terms.
class KahanSum {
 public:
  void add(double x) {
    double y = x - comp_;
    double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct GaussLegendre {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

// Nodes/weights are computed once per order and cached.
const GaussLegendre& gauss_legendre(int order);

double integrate_gl(const std::function<double(double)>& f, double a, double b,
                    int order = 96);

// Fourth-order centered first derivative of periodic samples on a uniform grid.
std::vector<double> cyclic_derivative4(const std::vector<double>& y, double h);

// Trigonometric-interpolant derivative of periodic samples, direct DFT form.
// O(n^2) but exact for band-limited data; n stays in the low thousands here.
std::vector<double> spectral_derivative(const std::vector<double>& y, double period,
                                        int deriv_order = 1);

// RMS point distance between two ordered point sets after the best rigid motion
// (rotation + translation, Kabsch). Columns are points.
double rigid_alignment_gap(const Eigen::Matrix3Xd& a, const Eigen::Matrix3Xd& b);

// Root of f on [lo, hi]; requires a sign change. Plain bisection, |hi-lo| < tol.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double tol = 1e-12, int max_iter = 200);

// Dense polynomial helpers, coefficients in ascending order (c[0] + c[1] x + ...).
std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b);
double poly_eval(const std::vector<double>& c, double x);
// Synthetic division by (x - root); remainder discarded (caller guarantees root).
std::vector<double> poly_deflate(const std::vector<double>& c, double root);

}  // namespace eh
