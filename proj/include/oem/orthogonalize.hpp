// Active orthogonalization: embed an arbitrary regression matrix X into a
// taller matrix (X; Delta) whose columns are mutually orthogonal.
#ifndef OEM_ORTHOGONALIZE_HPP
#define OEM_ORTHOGONALIZE_HPP

#include <Eigen/Dense>

#include <cstddef>
#include <optional>

namespace oem {

enum class ScalingChoice {
  identity,     // S = I
  column_norm,  // S = diag(|x_j|)
};

/// Byproducts of orthogonalizing X with scaling S and inflation d >= gamma1.
///
/// X'X + a_matrix == diag(d_diag) == d_scalar * S^2.
struct OrthoExpansion {
  Eigen::VectorXd s_diag;
  double gamma1 = 0.0;    // top eigenvalue of S^-1 X'X S^-1
  double gamma_p = 0.0;   // smallest eigenvalue of the same matrix
  double d_scalar = 0.0;
  Eigen::MatrixXd a_matrix;
  Eigen::VectorXd d_diag;
  std::optional<Eigen::MatrixXd> delta;  // (m - n) x p rows, descending eigenvalue order
  std::size_t multiplicity_t = 0;

  Eigen::Index dim() const { return s_diag.size(); }
};

/// Relative tolerance under which two eigenvalues count as tied.
inline constexpr double kEigenTieTol = 1e-9;

Eigen::VectorXd scaling_diagonal(const Eigen::MatrixXd& x, ScalingChoice scaling);

/// Builds the expansion from X. `inflate` >= 1 sets d = inflate * gamma1.
/// Delta is materialized only when `want_delta` is set.
OrthoExpansion expand(const Eigen::MatrixXd& x, ScalingChoice scaling = ScalingChoice::identity,
                      double inflate = 1.0, bool want_delta = false);

/// Same as expand() but from a precomputed Gram matrix X'X.
OrthoExpansion expand_from_gram(const Eigen::MatrixXd& gram, const Eigen::VectorXd& s_diag,
                                double inflate = 1.0, bool want_delta = false);

/// gamma1 of S^-1 X'X S^-1 by power iteration, falling back to a full
/// eigendecomposition if the power method stalls.
double gamma1_fast(const Eigen::MatrixXd& x, ScalingChoice scaling = ScalingChoice::identity);

/// Returns a copy with d raised to `new_d` (>= current d). A grows by
/// (new_d - d) S^2; an explicit Delta is dropped since it no longer applies.
OrthoExpansion with_d(const OrthoExpansion& e, double new_d);

}  // namespace oem

#endif  // OEM_ORTHOGONALIZE_HPP
