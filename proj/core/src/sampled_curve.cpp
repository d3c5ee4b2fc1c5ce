#include "eh/sampled_curve.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "eh/errors.hpp"
#include "eh/numerics.hpp"

namespace eh {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

double SampledCurve::closure_gap() const {
  if (sample_count() < 2) return 0.0;
  return (points.col(0) - points.col(sample_count() - 1)).norm();
}

void SampledCurve::validate(double tol) const {
  const int n = sample_count();
  if (n < 4) throw validation_error("SampledCurve: too few samples");
  if (tangent.cols() != n || normal.cols() != n || binormal.cols() != n ||
      kappa.size() != n || tau.size() != n)
    throw validation_error("SampledCurve: inconsistent array sizes");
  if (!(ds > 0.0)) throw validation_error("SampledCurve: nonpositive arclength step");
  for (int i = 0; i < n; ++i) {
    Eigen::Vector3d T = tangent.col(i), N = normal.col(i), B = binormal.col(i);
    if (std::abs(T.norm() - 1.0) > tol || std::abs(N.norm() - 1.0) > tol ||
        std::abs(B.norm() - 1.0) > tol)
      throw validation_error("SampledCurve: non-unit frame vector");
    if (std::abs(T.dot(N)) > tol || std::abs(T.dot(B)) > tol || std::abs(N.dot(B)) > tol)
      throw validation_error("SampledCurve: frame not orthogonal");
    if ((T.cross(N) - B).norm() > 10 * tol)
      throw validation_error("SampledCurve: frame not right-handed");
  }
}

SampledCurve make_circle(double radius, int n) {
  if (radius <= 0.0) throw validation_error("make_circle: radius must be positive");
  if (n < 4) throw validation_error("make_circle: need at least 4 samples");
  SampledCurve c;
  c.closed = true;
  c.points.resize(3, n + 1);
  c.tangent.resize(3, n + 1);
  c.normal.resize(3, n + 1);
  c.binormal.resize(3, n + 1);
  c.kappa.resize(n + 1);
  c.tau.resize(n + 1);
  c.ds = 2.0 * kPi * radius / n;
  for (int j = 0; j <= n; ++j) {
    double t = 2.0 * kPi * j / n;
    double ct = std::cos(t), st = std::sin(t);
    c.points.col(j) = Eigen::Vector3d(radius * ct, radius * st, 0.0);
    c.tangent.col(j) = Eigen::Vector3d(-st, ct, 0.0);
    c.normal.col(j) = Eigen::Vector3d(-ct, -st, 0.0);
    c.binormal.col(j) = Eigen::Vector3d(0.0, 0.0, 1.0);
    c.kappa[j] = 1.0 / radius;
    c.tau[j] = 0.0;
  }
  return c;
}

double integrate_curve(const SampledCurve& c, const Eigen::VectorXd& values) {
  if (values.size() != c.sample_count())
    throw validation_error("integrate_curve: value count mismatch");
  KahanSum s;
  if (c.closed) {
    for (int i = 0; i < c.cycle_count(); ++i) s.add(values[i]);
    return s.value() * c.ds;
  }
  for (int i = 0; i + 1 < c.sample_count(); ++i)
    s.add(0.5 * (values[i] + values[i + 1]));
  return s.value() * c.ds;
}

SampledCurve frenet_integrate(const std::function<double(double)>& kappa,
                              const std::function<double(double)>& tau,
                              double total_length, int n, bool closed,
                              const Eigen::Vector3d& x0,
                              const Eigen::Matrix3d& tnb0, int substeps) {
  if (n < 4 || substeps < 1)
    throw validation_error("frenet_integrate: bad sample/substep count");
  if (total_length <= 0.0)
    throw validation_error("frenet_integrate: nonpositive length");

  using State = Eigen::Matrix<double, 12, 1>;
  auto pack = [](const Eigen::Vector3d& x, const Eigen::Matrix3d& F) {
    State y;
    y.segment<3>(0) = x;
    y.segment<3>(3) = F.col(0);
    y.segment<3>(6) = F.col(1);
    y.segment<3>(9) = F.col(2);
    return y;
  };
  auto deriv = [&](double s, const State& y) {
    Eigen::Vector3d T = y.segment<3>(3), N = y.segment<3>(6), B = y.segment<3>(9);
    double k = kappa(s), t = tau(s);
    State dy;
    dy.segment<3>(0) = T;
    dy.segment<3>(3) = k * N;
    dy.segment<3>(6) = -k * T - t * B;
    dy.segment<3>(9) = t * N;
    return dy;
  };

  SampledCurve c;
  c.closed = closed;
  const int cols = n + 1;
  c.points.resize(3, cols);
  c.tangent.resize(3, cols);
  c.normal.resize(3, cols);
  c.binormal.resize(3, cols);
  c.kappa.resize(cols);
  c.tau.resize(cols);
  c.ds = total_length / n;

  State y = pack(x0, tnb0);
  double h = c.ds / substeps;
  auto store = [&](int j, double s) {
    c.points.col(j) = y.segment<3>(0);
    // Re-orthonormalize against drift so frame invariants hold to rounding.
    Eigen::Vector3d T = y.segment<3>(3).normalized();
    Eigen::Vector3d N = y.segment<3>(6);
    N = (N - N.dot(T) * T).normalized();
    Eigen::Vector3d B = T.cross(N);
    y.segment<3>(3) = T;
    y.segment<3>(6) = N;
    y.segment<3>(9) = B;
    c.tangent.col(j) = T;
    c.normal.col(j) = N;
    c.binormal.col(j) = B;
    c.kappa[j] = kappa(s);
    c.tau[j] = tau(s);
  };
  store(0, 0.0);
  for (int j = 1; j <= n; ++j) {
    double s0 = (j - 1) * c.ds;
    for (int k = 0; k < substeps; ++k) {
      double s = s0 + k * h;
      State k1 = deriv(s, y);
      State k2 = deriv(s + 0.5 * h, y + 0.5 * h * k1);
      State k3 = deriv(s + 0.5 * h, y + 0.5 * h * k2);
      State k4 = deriv(s + h, y + h * k3);
      y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    store(j, j * c.ds);
  }
  return c;
}

void write_curve_csv(const SampledCurve& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw validation_error("write_curve_csv: cannot open " + path);
  out << "s,x,y,z,kappa,tau\n";
  for (int i = 0; i < c.sample_count(); ++i) {
    out << fmt17(i * c.ds) << ',' << fmt17(c.points(0, i)) << ','
        << fmt17(c.points(1, i)) << ',' << fmt17(c.points(2, i)) << ','
        << fmt17(c.kappa[i]) << ',' << fmt17(c.tau[i]) << '\n';
  }
  if (!out.good()) throw validation_error("write_curve_csv: write failed for " + path);
}

void write_curve_obj(const SampledCurve& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw validation_error("write_curve_obj: cannot open " + path);
  const int n = c.cycle_count();
  for (int i = 0; i < n; ++i)
    out << "v " << fmt17(c.points(0, i)) << ' ' << fmt17(c.points(1, i)) << ' '
        << fmt17(c.points(2, i)) << '\n';
  out << 'l';
  for (int i = 1; i <= n; ++i) out << ' ' << i;
  if (c.closed) out << " 1";
  out << '\n';
  if (!out.good()) throw validation_error("write_curve_obj: write failed for " + path);
}

SampledCurve read_curve_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("read_curve_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw validation_error("read_curve_csv: empty file");
  std::vector<std::array<double, 6>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::array<double, 6> row{};
    std::stringstream ss(line);
    std::string cell;
    for (int k = 0; k < 6; ++k) {
      if (!std::getline(ss, cell, ','))
        throw validation_error("read_curve_csv: short row in " + path);
      row[k] = std::stod(cell);
    }
    rows.push_back(row);
  }
  const int m = static_cast<int>(rows.size());
  if (m < 4) throw validation_error("read_curve_csv: too few rows");

  SampledCurve c;
  c.ds = rows[1][0] - rows[0][0];
  if (!(c.ds > 0.0)) throw validation_error("read_curve_csv: arclength not increasing");
  c.points.resize(3, m);
  c.kappa.resize(m);
  c.tau.resize(m);
  for (int i = 0; i < m; ++i) {
    c.points.col(i) = Eigen::Vector3d(rows[i][1], rows[i][2], rows[i][3]);
    c.kappa[i] = rows[i][4];
    c.tau[i] = rows[i][5];
  }
  c.closed = (c.points.col(0) - c.points.col(m - 1)).norm() < 1e-3 * c.ds * m;

  // Frames by centered differences; good enough for seeding meshes.
  c.tangent.resize(3, m);
  c.normal.resize(3, m);
  c.binormal.resize(3, m);
  auto point = [&](int i) {
    if (c.closed) {
      int n = m - 1;
      return Eigen::Vector3d(c.points.col(((i % n) + n) % n));
    }
    return Eigen::Vector3d(c.points.col(std::min(std::max(i, 0), m - 1)));
  };
  for (int i = 0; i < m; ++i) {
    Eigen::Vector3d T = (point(i + 1) - point(i - 1)).normalized();
    Eigen::Vector3d acc = point(i + 1) - 2.0 * point(i) + point(i - 1);
    Eigen::Vector3d N = acc - acc.dot(T) * T;
    if (N.norm() < 1e-14) {
      // Straight segment; pick any perpendicular.
      N = T.unitOrthogonal();
    } else {
      N.normalize();
    }
    c.tangent.col(i) = T;
    c.normal.col(i) = N;
    c.binormal.col(i) = T.cross(N);
  }
  return c;
}

}  // namespace eh
