// The OEM iteration for penalized least squares.
//
// Given the expansion X'X + A = diag(d), each iteration forms
//     u = X'Y + A beta^(k)
// and solves p independent scalar problems (see penalty.hpp). Without a
// penalty this is the Healy-Westmacott procedure.
#ifndef OEM_SOLVER_HPP
#define OEM_SOLVER_HPP

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <vector>

#include "oem/orthogonalize.hpp"
#include "oem/penalty.hpp"

namespace oem {

enum class InitKind { zeros, ols, custom };

struct SolverOptions {
  double tol = 1e-6;  // max_j |b_j' - b_j| / max(|b_j|, 1)
  std::size_t max_iter = 10000;
  InitKind init = InitKind::zeros;
  Eigen::VectorXd init_beta;  // used with InitKind::custom, raw scale
  bool accelerate = false;
  std::size_t groups = 1;  // hybrid scheme when > 1
  bool record_trace = false;
  bool record_iterates = false;
  bool standardize = true;  // fit on unit-norm columns, report raw-scale beta
  double inflate = 1.0;     // d = inflate * gamma1

  void validate(Eigen::Index p) const;
};

struct ExpansionSummary {
  double gamma1 = 0.0;
  double d = 0.0;
  std::size_t t = 0;
};

struct FitResult {
  Eigen::VectorXd beta;  // raw scale
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> objective_trace;      // l(beta^(k)), k = 0..iterations
  std::vector<Eigen::VectorXd> iterates;    // raw scale, k = 0..iterations
  double final_objective = 0.0;             // on the fitting scale
  Eigen::VectorXd u_final;                  // fitting scale
  ExpansionSummary expansion;
};

/// |Y - X beta|^2 + P(beta).
double objective(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& beta,
                 const PenaltySpec& spec);

/// One M-step: beta_j = solve_scalar(d_j, u_j, j, spec) for every j.
Eigen::VectorXd oem_step(const Eigen::VectorXd& u, const OrthoExpansion& expansion, const PenaltySpec& spec);

/// The matrix the solver actually iterates on, plus the column scales that
/// map its coefficients back to the raw scale (beta_raw = beta_fit / scale).
struct WorkingDesign {
  Eigen::MatrixXd x;
  Eigen::VectorXd scale;
};

/// Unit-norm columns when `standardize`, otherwise X unchanged with unit scales.
WorkingDesign working_design(const Eigen::MatrixXd& x, bool standardize);

/// Runs OEM to convergence. When `expansion` is supplied it must describe the
/// working design (see working_design) and is reused as-is.
FitResult fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const PenaltySpec& spec,
              const SolverOptions& opts = {}, const OrthoExpansion* expansion = nullptr);

/// Hybrid scheme: contiguous balanced coordinate groups, each minimized by
/// OEM with the others held fixed, swept until no coefficient moves by more
/// than tol. opts.groups == 1 is plain fit().
FitResult fit_hybrid(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const PenaltySpec& spec,
                     const SolverOptions& opts);

/// Contiguous, balanced partition of 0..p-1 into g groups; the remainder is
/// spread over the leading groups.
std::vector<std::vector<Eigen::Index>> contiguous_groups(Eigen::Index p, std::size_t g);

}  // namespace oem

#endif  // OEM_SOLVER_HPP
