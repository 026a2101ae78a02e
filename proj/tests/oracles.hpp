// Independent reference computations used only by the tests. Nothing here
// calls into the library's numerical routines.
#ifndef OEM_TESTS_ORACLES_HPP
#define OEM_TESTS_ORACLES_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

// Cyclic Jacobi rotations; returns eigenvalues in descending order.
inline Eigen::VectorXd jacobi_eigenvalues(Eigen::MatrixXd a, int sweeps = 100) {
  const Eigen::Index n = a.rows();
  for (int s = 0; s < sweeps; ++s) {
    double off = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    if (off < 1e-30 * std::max(1.0, a.squaredNorm())) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), sn = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
      }
    }
  }
  Eigen::VectorXd v = a.diagonal();
  std::sort(v.data(), v.data() + v.size(), std::greater<>());
  return v;
}

inline double brute_dot(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  long double s = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) s += static_cast<long double>(a(i)) * b(i);
  return static_cast<double>(s);
}

// Composite Simpson rule on [lo, hi].
inline double simpson(const std::function<double(double)>& f, double lo, double hi, int panels = 2000) {
  if (hi <= lo) return 0.0;
  const double h = (hi - lo) / panels;
  double s = f(lo) + f(hi);
  for (int k = 1; k < panels; ++k) s += f(lo + k * h) * (k % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// Penalty derivative forms, written from their definitions.
inline double scad_derivative(double theta, double lambda, double a) {
  return theta <= lambda ? lambda : std::max(a * lambda - theta, 0.0) / (a - 1.0);
}
inline double mcp_derivative(double theta, double lambda, double a) {
  return theta <= a * lambda ? lambda - theta / a : 0.0;
}

// Penalty values, coded independently of the library. SCAD/MCP split the
// integral at their kinks so Simpson's rule is exact on each piece.
inline double scad_value(double b, double lambda, double a) {
  const double t = std::abs(b);
  auto f = [&](double s) { return scad_derivative(s, lambda, a); };
  double total = simpson(f, 0.0, std::min(t, lambda), 2);
  if (t > lambda) total += simpson(f, lambda, std::min(t, a * lambda), 2);
  return 2.0 * total;
}
inline double mcp_value(double b, double lambda, double a) {
  const double t = std::abs(b);
  auto f = [&](double s) { return mcp_derivative(s, lambda, a); };
  return 2.0 * simpson(f, 0.0, std::min(t, a * lambda), 2);
}

struct Minimum {
  double argmin;
  double value;
};

// Global minimizer of f on [lo, hi]: a dense grid, then golden-section
// refinement around each of the best few grid-local minima.
inline Minimum grid_refine_min(const std::function<double(double)>& f, double lo, double hi, int points = 20001) {
  std::vector<double> xs(static_cast<std::size_t>(points)), fs(static_cast<std::size_t>(points));
  const double h = (hi - lo) / (points - 1);
  for (int k = 0; k < points; ++k) {
    xs[static_cast<std::size_t>(k)] = lo + k * h;
    fs[static_cast<std::size_t>(k)] = f(xs[static_cast<std::size_t>(k)]);
  }
  std::vector<std::size_t> local;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const bool left = k == 0 || fs[k] <= fs[k - 1];
    const bool right = k + 1 == xs.size() || fs[k] <= fs[k + 1];
    if (left && right) local.push_back(k);
  }
  std::sort(local.begin(), local.end(), [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
  if (local.size() > 4) local.resize(4);

  Minimum best{0.0, std::numeric_limits<double>::infinity()};
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (std::size_t k : local) {
    double a = std::max(lo, xs[k] - h), b = std::min(hi, xs[k] + h);
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 200 && b - a > 1e-14 * std::max(1.0, std::abs(b)); ++it) {
      if (fc <= fd) { b = d; d = c; fd = fc; c = b - g * (b - a); fc = f(c); }
      else { a = c; c = d; fc = fd; d = a + g * (b - a); fd = f(d); }
    }
    for (double cand : {0.5 * (a + b), xs[k]}) {
      const double v = f(cand);
      if (v < best.value) best = {cand, v};
    }
  }
  // kinks at zero are common; check it exactly
  if (lo <= 0.0 && hi >= 0.0 && f(0.0) <= best.value) best = {0.0, f(0.0)};
  return best;
}

inline Eigen::MatrixXd random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  return m;
}

inline Eigen::VectorXd random_vector(std::mt19937_64& rng, Eigen::Index n) {
  return random_matrix(rng, n, 1).col(0);
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

// Fixed data used across suites.
inline Eigen::MatrixXd three_column_x() {
  Eigen::MatrixXd x(4, 3);
  x << 0, 0, 1.5, -4.0 / 3, -2.0 / 3, 1.0 / 6, 2.0 / 3, 4.0 / 3, 1.0 / 6, -2.0 / 3, 2.0 / 3, -7.0 / 6;
  return x;
}

inline Eigen::MatrixXd aliased_design_x() {
  Eigen::MatrixXd x(4, 6);
  x << -1, -1, -1, 1, 1, 1,
       -1, 1, 1, -1, -1, 1,
       1, -1, 1, -1, 1, -1,
       1, 1, -1, 1, -1, -1;
  return x;
}

inline Eigen::MatrixXd aliased_design_delta() {
  Eigen::MatrixXd d(3, 6);
  d << 0, -2, 0, 0, -2, 0,
       0, 0, -2, -2, 0, 0,
       -2, 0, 0, 0, 0, -2;
  return d;
}

inline Eigen::VectorXd aliased_design_y() {
  Eigen::VectorXd y(4);
  y << 2, 1, -4, 1.5;
  return y;
}

}  // namespace oracle

#endif  // OEM_TESTS_ORACLES_HPP
