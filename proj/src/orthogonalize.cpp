#include "oem/orthogonalize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "oem/error.hpp"
#include "oem/linalg.hpp"

namespace oem {

Eigen::VectorXd scaling_diagonal(const Eigen::MatrixXd& x, ScalingChoice scaling) {
  const Eigen::Index p = x.cols();
  if (scaling == ScalingChoice::identity) return Eigen::VectorXd::Ones(p);
  Eigen::VectorXd s(p);
  for (Eigen::Index j = 0; j < p; ++j) {
    s(j) = std::sqrt(detail::sequential_dot(x.col(j), x.col(j)));
    if (!(s(j) > 0.0))
      throw DataError("column " + std::to_string(j) + " is zero; column-norm scaling needs nonzero columns");
  }
  return s;
}

OrthoExpansion expand_from_gram(const Eigen::MatrixXd& gram, const Eigen::VectorXd& s_diag,
                                double inflate, bool want_delta) {
  if (!(inflate >= 1.0)) throw std::invalid_argument("expand: inflate must be >= 1");
  const Eigen::Index p = gram.rows();
  if (p == 0 || gram.cols() != p || s_diag.size() != p)
    throw std::invalid_argument("expand: Gram and scaling dimensions disagree");

  const Eigen::VectorXd s_inv = s_diag.cwiseInverse();
  const Eigen::MatrixXd z_gram = s_inv.asDiagonal() * gram * s_inv.asDiagonal();
  const auto eig = sym_eigen(z_gram);

  OrthoExpansion e;
  e.s_diag = s_diag;
  e.gamma1 = std::max(eig.values(0), 0.0);
  e.gamma_p = eig.values(p - 1);
  e.d_scalar = inflate * e.gamma1;
  e.multiplicity_t = top_multiplicity(eig.values, kEigenTieTol);
  e.d_diag = e.d_scalar * s_diag.cwiseAbs2();
  e.a_matrix = -gram;
  e.a_matrix.diagonal() += e.d_diag;

  if (want_delta) {
    // One row per eigenpair with d - gamma_j above the tie tolerance. For
    // d = gamma1 these are exactly the p - t trailing eigenpairs.
    std::vector<Eigen::Index> rows;
    const double slack = kEigenTieTol * e.d_scalar;
    for (Eigen::Index j = 0; j < p; ++j)
      if (e.d_scalar - eig.values(j) > slack) rows.push_back(j);
    Eigen::MatrixXd delta(static_cast<Eigen::Index>(rows.size()), p);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const Eigen::Index j = rows[r];
      const double b = std::sqrt(std::max(e.d_scalar - eig.values(j), 0.0));
      delta.row(static_cast<Eigen::Index>(r)) = b * eig.vectors.col(j).cwiseProduct(s_diag).transpose();
    }
    e.delta = std::move(delta);
  }
  return e;
}

OrthoExpansion expand(const Eigen::MatrixXd& x, ScalingChoice scaling, double inflate, bool want_delta) {
  if (x.size() == 0) throw std::invalid_argument("expand: empty matrix");
  require_finite(x, "regression matrix");
  return expand_from_gram(gram(x), scaling_diagonal(x, scaling), inflate, want_delta);
}

double gamma1_fast(const Eigen::MatrixXd& x, ScalingChoice scaling) {
  if (x.size() == 0) throw std::invalid_argument("gamma1_fast: empty matrix");
  require_finite(x, "regression matrix");
  const Eigen::VectorXd s_inv = scaling_diagonal(x, scaling).cwiseInverse();
  const Eigen::MatrixXd z_gram = s_inv.asDiagonal() * gram(x) * s_inv.asDiagonal();
  try {
    return power_method(z_gram, default_power_init<double>(z_gram.rows()), 1e-12, 100000).gamma1;
  } catch (const PowerMethodError&) {
    return sym_eigen(z_gram).values(0);
  }
}

OrthoExpansion with_d(const OrthoExpansion& e, double new_d) {
  if (!(new_d >= e.d_scalar)) throw std::invalid_argument("with_d: d may only grow");
  OrthoExpansion out = e;
  const Eigen::VectorXd s2 = e.s_diag.cwiseAbs2();
  out.a_matrix.diagonal() += (new_d - e.d_scalar) * s2;
  out.d_scalar = new_d;
  out.d_diag = new_d * s2;
  out.delta.reset();
  return out;
}

}  // namespace oem
