// Measurable consequences of the OEM theory: convergence rates, grouping
// coherence, and simulation harnesses for iteration counts and the oracle
// property of SCAD/MCP.
#ifndef OEM_DIAGNOSTICS_HPP
#define OEM_DIAGNOSTICS_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "oem/orthogonalize.hpp"
#include "oem/penalty.hpp"
#include "oem/solver.hpp"

namespace oem {

struct AliasedPair {
  Eigen::Index i = 0;
  Eigen::Index j = 0;
  int sign = 1;  // x_i == sign * x_j
  bool operator==(const AliasedPair&) const = default;
};

struct CoherenceReport {
  std::vector<AliasedPair> aliased_pairs;
  std::vector<AliasedPair> violations;
  bool coherent = true;
};

/// Pairs (i < j) with x_i = +-x_j entrywise to 1e-12, and whether beta_i = +-beta_j
/// within `tol` for each.
CoherenceReport check_coherence(const Eigen::MatrixXd& x, const Eigen::VectorXd& beta, double tol = 1e-8);

/// (d - gamma_p) / d, with gamma_p the smallest eigenvalue of S^-1 X'X S^-1.
double rate_r0(const OrthoExpansion& expansion, const Eigen::MatrixXd& x);

/// Median of |b(k+1) - b*| / |b(k) - b*| over the last `window` iterations
/// before the final one, taking b* as the final iterate. Returns 0 when
/// fewer than two usable ratios exist.
double empirical_rate(const std::vector<Eigen::VectorXd>& iterates, std::size_t window = 10);

struct RateReport {
  double r0 = 0.0;
  double empirical_r = 0.0;
  std::size_t iterations_ols = 0;
  std::size_t iterations_penalized = 0;
};

/// Fits OLS and `spec` on the same data with identical options and reports
/// R0 together with the observed rate of the penalized run.
RateReport estimate_rate(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const PenaltySpec& spec,
                         SolverOptions opts = {});

// --- simulation --------------------------------------------------------------

/// Generator used by every experiment. Replication r at sample size n draws
/// from an engine seeded with seed_seq{seed_lo, seed_hi, n, r, stream}.
using Rng = std::mt19937_64;
inline constexpr std::string_view kRngName = "mt19937_64/seed_seq-v1";

Rng replication_rng(std::uint64_t seed, std::size_t n, std::size_t replication, std::uint32_t stream = 0);

struct SimulationSpec {
  std::size_t n = 100;
  std::size_t p = 10;
  double rho = 0.1;    // equicorrelation of the Gaussian design
  double sigma = 1.0;  // noise standard deviation
  Eigen::VectorXd beta_true;
  std::size_t replications = 20;
  std::uint64_t seed = 20120101;

  void validate() const;
};

/// beta_j = (-1)^j exp(-2 (j - 1) / 20), j = 1..p.
Eigen::VectorXd alternating_decay_beta(std::size_t p);
/// (3, 1.5, 2, 0, ..., 0).
Eigen::VectorXd sparse_default_beta(std::size_t p);

struct SimulatedData {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
};

/// Rows of X i.i.d. N(0, V) with V_ii = 1, V_ij = rho; Y = X beta + sigma eps.
SimulatedData simulate(const SimulationSpec& spec, std::size_t replication);

struct IterationRow {
  std::size_t n = 0;
  double mean_r0 = 0.0;
  double mean_iter_ols = 0.0;
  double mean_iter_lasso = 0.0;
};

/// For each n: replicate, fit OLS-mode and lasso with the same options,
/// average iterations and R0.
std::vector<IterationRow> run_iteration_experiment(const SimulationSpec& spec, const std::vector<std::size_t>& n_grid,
                                                   double lambda, const SolverOptions& opts = {});
IterationRow run_iteration_experiment(const SimulationSpec& spec, double lambda, const SolverOptions& opts = {});

struct OracleRow {
  std::size_t n = 0;
  double support_recovery_rate = 0.0;
  double estimation_rmse_on_support = 0.0;
  double oracle_rmse_on_support = 0.0;  // OLS on the true support
};

/// SCAD or MCP with lambda_n = n^lambda_exponent (in the n-scaled
/// parametrization, i.e. lambda = lambda_n / sqrt(n) on unit-norm columns),
/// started from OLS.
OracleRow run_oracle_experiment(const SimulationSpec& spec, PenaltyKind penalty, double a, double lambda_exponent,
                                SolverOptions opts = {});
std::vector<OracleRow> run_oracle_experiment(const SimulationSpec& spec, const std::vector<std::size_t>& n_grid,
                                             PenaltyKind penalty, double a, double lambda_exponent,
                                             const SolverOptions& opts = {});

}  // namespace oem

#endif  // OEM_DIAGNOSTICS_HPP
