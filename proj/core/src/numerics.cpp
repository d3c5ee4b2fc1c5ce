#include "eh/numerics.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <map>
#include <mutex>

#include "eh/errors.hpp"

namespace eh {

namespace {

// Legendre P_n and P_n' at x by the three-term recurrence.
void legendre_pair(int n, double x, double& p, double& dp) {
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  p = (n == 0) ? 1.0 : p1;
  dp = (n == 0) ? 0.0 : n * (x * p1 - p0) / (x * x - 1.0);
}

GaussLegendre compute_gl(int order) {
  GaussLegendre gl;
  gl.nodes.resize(order);
  gl.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    // Chebyshev-like initial guess, then Newton.
    double x = std::cos(kPi * (i + 0.75) / (order + 0.5));
    double p, dp;
    for (int it = 0; it < 100; ++it) {
      legendre_pair(order, x, p, dp);
      double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    legendre_pair(order, x, p, dp);
    gl.nodes[i] = x;
    gl.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return gl;
}

}  // namespace

const GaussLegendre& gauss_legendre(int order) {
  if (order < 1) throw validation_error("gauss_legendre: order must be positive");
  static std::map<int, GaussLegendre> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_gl(order)).first;
  return it->second;
}

double integrate_gl(const std::function<double(double)>& f, double a, double b,
                    int order) {
  const GaussLegendre& gl = gauss_legendre(order);
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  KahanSum sum;
  for (int i = 0; i < order; ++i) sum.add(gl.weights[i] * f(mid + half * gl.nodes[i]));
  return half * sum.value();
}

std::vector<double> cyclic_derivative4(const std::vector<double>& y, double h) {
  const int n = static_cast<int>(y.size());
  if (n < 5) throw validation_error("cyclic_derivative4: need at least 5 samples");
  std::vector<double> dy(n);
  auto at = [&](int i) { return y[((i % n) + n) % n]; };
  for (int i = 0; i < n; ++i) {
    dy[i] = (-at(i + 2) + 8.0 * at(i + 1) - 8.0 * at(i - 1) + at(i - 2)) / (12.0 * h);
  }
  return dy;
}

std::vector<double> spectral_derivative(const std::vector<double>& y, double period,
                                        int deriv_order) {
  const int n = static_cast<int>(y.size());
  if (n < 4) throw validation_error("spectral_derivative: need at least 4 samples");
  if (period <= 0.0) throw validation_error("spectral_derivative: period must be positive");

  // Real DFT coefficients a_k, b_k for k = 0..n/2.
  const int kmax = n / 2;
  std::vector<double> ca(kmax + 1, 0.0), cb(kmax + 1, 0.0);
  for (int k = 0; k <= kmax; ++k) {
    KahanSum sa, sb;
    for (int j = 0; j < n; ++j) {
      double ang = 2.0 * kPi * k * j / n;
      sa.add(y[j] * std::cos(ang));
      sb.add(y[j] * std::sin(ang));
    }
    ca[k] = 2.0 * sa.value() / n;
    cb[k] = 2.0 * sb.value() / n;
  }

  std::vector<double> dy(n, 0.0);
  for (int j = 0; j < n; ++j) {
    KahanSum s;
    for (int k = 1; k <= kmax; ++k) {
      // Drop the unpaired Nyquist sine mode for even n.
      double bk = (n % 2 == 0 && k == kmax) ? 0.0 : cb[k];
      double ak = ca[k];
      if (n % 2 == 0 && k == kmax) ak *= 0.5;
      double w = 2.0 * kPi * k / period;
      double ang = 2.0 * kPi * k * j / n;
      // Each derivative multiplies by w and advances the phase by pi/2.
      double c = std::cos(ang), sn = std::sin(ang);
      double re = ak, im = bk;
      for (int d = 0; d < deriv_order; ++d) {
        // (a cos + b sin)' = w b cos - w a sin
        double nre = w * im;
        double nim = -w * re;
        re = nre;
        im = nim;
      }
      s.add(re * c + im * sn);
    }
    dy[j] = s.value();
  }
  return dy;
}

double rigid_alignment_gap(const Eigen::Matrix3Xd& a, const Eigen::Matrix3Xd& b) {
  if (a.cols() != b.cols() || a.cols() < 3)
    throw validation_error("rigid_alignment_gap: point sets must match, >= 3 points");
  Eigen::Vector3d ca = a.rowwise().mean();
  Eigen::Vector3d cb = b.rowwise().mean();
  Eigen::Matrix3Xd A = a.colwise() - ca;
  Eigen::Matrix3Xd B = b.colwise() - cb;
  Eigen::Matrix3d H = A * B.transpose();
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(H, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d U = svd.matrixU(), V = svd.matrixV();
  Eigen::Matrix3d R = V * U.transpose();
  if (R.determinant() < 0) {
    V.col(2) *= -1.0;
    R = V * U.transpose();
  }
  double acc = (B - R * A).squaredNorm();
  return std::sqrt(acc / static_cast<double>(a.cols()));
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double tol,
              int max_iter) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0))
    throw numerical_error("bisect: no sign change on bracket");
  for (int it = 0; it < max_iter && (hi - lo) > tol; ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> c(a.size() + b.size() - 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

double poly_eval(const std::vector<double>& c, double x) {
  double v = 0.0;
  for (size_t i = c.size(); i-- > 0;) v = v * x + c[i];
  return v;
}

std::vector<double> poly_deflate(const std::vector<double>& c, double root) {
  if (c.size() < 2) throw validation_error("poly_deflate: degree must be >= 1");
  std::vector<double> q(c.size() - 1, 0.0);
  double carry = c.back();
  for (size_t i = c.size() - 1; i-- > 0;) {
    q[i] = carry;
    carry = c[i] + root * carry;
  }
  return q;
}

}  // namespace eh
