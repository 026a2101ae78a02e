// Dense linear-algebra primitives shared by the OEM solver.
//
// The reductions here (gram, gram_times, cross) accumulate each entry as a
// plain sequential dot product. Two identical columns therefore produce
// bit-identical rows, and a negated column produces exactly negated rows;
// the grouping-coherence guarantees of the solver rely on this.
#ifndef OEM_LINALG_HPP
#define OEM_LINALG_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "oem/error.hpp"

namespace oem {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

namespace detail {

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar sequential_dot(const Eigen::MatrixBase<DerivedA>& a,
                                         const Eigen::MatrixBase<DerivedB>& b) {
  typename DerivedA::Scalar acc(0);
  for (Eigen::Index i = 0; i < a.size(); ++i) acc += a(i) * b(i);
  return acc;
}

}  // namespace detail

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j))) return false;
  return true;
}

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, const char* what) {
  if (!all_finite(m)) throw DataError(std::string(what) + " contains NaN or Inf entries");
}

/// m'm, computed entrywise with sequential dot products.
template <typename Derived>
MatrixX<typename Derived::Scalar> gram(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  if (m.size() == 0) throw std::invalid_argument("gram: empty matrix");
  const Eigen::Index p = m.cols();
  MatrixX<Scalar> g(p, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    for (Eigen::Index k = j; k < p; ++k) {
      const Scalar v = detail::sequential_dot(m.col(j), m.col(k));
      g(j, k) = v;
      g(k, j) = v;
    }
  }
  return g;
}

/// m'v, one sequential dot product per column.
template <typename DerivedM, typename DerivedV>
VectorX<typename DerivedM::Scalar> cross(const Eigen::MatrixBase<DerivedM>& m,
                                         const Eigen::MatrixBase<DerivedV>& v) {
  VectorX<typename DerivedM::Scalar> out(m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j) out(j) = detail::sequential_dot(m.col(j), v);
  return out;
}

/// g·v for a symmetric g, each entry a sequential dot over a row.
template <typename DerivedG, typename DerivedV>
VectorX<typename DerivedG::Scalar> gram_times(const Eigen::MatrixBase<DerivedG>& g,
                                              const Eigen::MatrixBase<DerivedV>& v) {
  VectorX<typename DerivedG::Scalar> out(g.rows());
  for (Eigen::Index i = 0; i < g.rows(); ++i) out(i) = detail::sequential_dot(g.row(i), v);
  return out;
}

template <typename Scalar>
struct PowerResult {
  Scalar gamma1{};
  std::size_t iterations{};
};

/// Thrown when power iteration exhausts its budget; carries the last estimate.
class PowerMethodError : public NumericalError {
 public:
  PowerMethodError(double best, std::size_t iterations)
      : NumericalError("power method did not converge after " + std::to_string(iterations) +
                       " iterations"),
        best_estimate(best),
        iterations(iterations) {}
  double best_estimate;
  std::size_t iterations;
};

/// All-ones start with an index-dependent tilt, so it is never orthogonal to
/// a coordinate-aligned dominant eigenspace.
template <typename Scalar>
VectorX<Scalar> default_power_init(Eigen::Index p) {
  VectorX<Scalar> v(p);
  for (Eigen::Index j = 0; j < p; ++j)
    v(j) = Scalar(1) + Scalar(j + 1) / Scalar(10 * p + 1);
  return v;
}

/// Largest eigenvalue of a symmetric PSD matrix by power iteration.
///
/// The start vector is normalized, so gamma^(0) = 1, and each step computes
/// a <- g a / gamma, gamma <- |a|. Stops once the relative change in gamma is
/// at most `tol`.
template <typename DerivedG, typename DerivedV>
PowerResult<typename DerivedG::Scalar> power_method(const Eigen::MatrixBase<DerivedG>& g,
                                                    const Eigen::MatrixBase<DerivedV>& init,
                                                    typename DerivedG::Scalar tol = 1e-10,
                                                    std::size_t max_iter = 10000) {
  using Scalar = typename DerivedG::Scalar;
  if (g.rows() != g.cols() || g.rows() == 0)
    throw std::invalid_argument("power_method: matrix must be square and nonempty");
  if (init.size() != g.rows()) throw std::invalid_argument("power_method: init size mismatch");
  const Scalar init_norm = init.norm();
  if (!(init_norm > Scalar(0))) throw std::invalid_argument("power_method: zero initial vector");

  VectorX<Scalar> a = init / init_norm;
  Scalar gamma(1);
  for (std::size_t k = 1; k <= max_iter; ++k) {
    VectorX<Scalar> next = g * a / gamma;
    const Scalar next_gamma = next.norm();
    if (next_gamma == Scalar(0)) return {Scalar(0), k};
    if (std::abs(next_gamma - gamma) <= tol * next_gamma) return {next_gamma, k};
    a = std::move(next);
    gamma = next_gamma;
  }
  throw PowerMethodError(static_cast<double>(gamma), max_iter);
}

template <typename DerivedG>
PowerResult<typename DerivedG::Scalar> power_method(const Eigen::MatrixBase<DerivedG>& g) {
  return power_method(g, default_power_init<typename DerivedG::Scalar>(g.rows()));
}

template <typename Scalar>
struct EigenResult {
  VectorX<Scalar> values;   // descending
  MatrixX<Scalar> vectors;  // column j pairs with values(j)
};

/// Symmetric eigendecomposition, eigenvalues sorted in descending order.
template <typename Derived>
EigenResult<typename Derived::Scalar> sym_eigen(const Eigen::MatrixBase<Derived>& g) {
  using Scalar = typename Derived::Scalar;
  if (g.rows() != g.cols() || g.rows() == 0)
    throw std::invalid_argument("sym_eigen: matrix must be square and nonempty");
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> solver(g.eval());
  if (solver.info() != Eigen::Success) throw NumericalError("sym_eigen: eigensolver failed to converge");
  const Eigen::Index p = g.rows();
  EigenResult<Scalar> out{VectorX<Scalar>(p), MatrixX<Scalar>(p, p)};
  for (Eigen::Index j = 0; j < p; ++j) {
    out.values(j) = solver.eigenvalues()(p - 1 - j);
    out.vectors.col(j) = solver.eigenvectors().col(p - 1 - j);
  }
  return out;
}

/// Number of leading eigenvalues equal to the first within relative `rel_tol`.
template <typename Derived>
std::size_t top_multiplicity(const Eigen::MatrixBase<Derived>& descending_values,
                             typename Derived::Scalar rel_tol = 1e-9) {
  using Scalar = typename Derived::Scalar;
  const Scalar top = descending_values(0);
  const Scalar slack = rel_tol * std::max(std::abs(top), Scalar(0));
  std::size_t t = 0;
  for (Eigen::Index j = 0; j < descending_values.size(); ++j) {
    if (top - descending_values(j) <= slack) ++t;
    else break;
  }
  return t;
}

/// Minimal-norm least-squares solution via SVD. Singular values below
/// 1e-12 times the largest are treated as zero.
template <typename DerivedX, typename DerivedY>
VectorX<typename DerivedX::Scalar> pinv_least_squares(const Eigen::MatrixBase<DerivedX>& x,
                                                      const Eigen::MatrixBase<DerivedY>& y) {
  using Scalar = typename DerivedX::Scalar;
  if (x.rows() != y.size()) throw std::invalid_argument("pinv_least_squares: dimension mismatch");
  Eigen::JacobiSVD<MatrixX<Scalar>> svd(x.eval(), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  VectorX<Scalar> beta = VectorX<Scalar>::Zero(x.cols());
  if (sv.size() == 0 || sv(0) == Scalar(0)) return beta;
  const Scalar cutoff = Scalar(1e-12) * sv(0);
  const VectorX<Scalar> uty = svd.matrixU().transpose() * y;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv(k) <= cutoff) continue;
    beta += svd.matrixV().col(k) * (uty(k) / sv(k));
  }
  return beta;
}

}  // namespace oem

#endif  // OEM_LINALG_HPP
