#include "oem/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "oem/error.hpp"
#include "oem/linalg.hpp"

namespace oem {

namespace {

bool columns_match(const Eigen::MatrixXd& x, Eigen::Index i, Eigen::Index j, int sign, double tol) {
  for (Eigen::Index r = 0; r < x.rows(); ++r)
    if (std::abs(x(r, i) - sign * x(r, j)) > tol) return false;
  return true;
}

}  // namespace

CoherenceReport check_coherence(const Eigen::MatrixXd& x, const Eigen::VectorXd& beta, double tol) {
  if (x.cols() != beta.size()) throw std::invalid_argument("check_coherence: beta does not match X");
  CoherenceReport report;
  const double entry_tol = 1e-12 * std::max(1.0, x.size() ? x.cwiseAbs().maxCoeff() : 0.0);
  for (Eigen::Index i = 0; i < x.cols(); ++i) {
    for (Eigen::Index j = i + 1; j < x.cols(); ++j) {
      for (int sign : {1, -1}) {
        if (!columns_match(x, i, j, sign, entry_tol)) continue;
        const AliasedPair pair{i, j, sign};
        report.aliased_pairs.push_back(pair);
        if (std::abs(beta(i) - sign * beta(j)) > tol) report.violations.push_back(pair);
      }
    }
  }
  report.coherent = report.violations.empty();
  return report;
}

double rate_r0(const OrthoExpansion& expansion, const Eigen::MatrixXd& x) {
  if (x.cols() != expansion.dim()) throw std::invalid_argument("rate_r0: expansion does not match X");
  if (!(expansion.d_scalar > 0.0)) return 0.0;
  const Eigen::VectorXd s_inv = expansion.s_diag.cwiseInverse();
  const Eigen::MatrixXd z_gram = s_inv.asDiagonal() * gram(x) * s_inv.asDiagonal();
  const double gamma_p = std::max(sym_eigen(z_gram).values(x.cols() - 1), 0.0);
  return std::clamp((expansion.d_scalar - gamma_p) / expansion.d_scalar, 0.0, 1.0);
}

double empirical_rate(const std::vector<Eigen::VectorXd>& iterates, std::size_t window) {
  if (iterates.size() < 3) return 0.0;
  const Eigen::VectorXd& limit = iterates.back();
  // ratios e(k+1)/e(k) for k+1 < last
  std::vector<double> ratios;
  const std::size_t last = iterates.size() - 1;
  const std::size_t first = last > window + 1 ? last - window - 1 : 0;
  for (std::size_t k = first; k + 1 < last; ++k) {
    const double num = (iterates[k + 1] - limit).norm();
    const double den = (iterates[k] - limit).norm();
    if (den > 0.0) ratios.push_back(num / den);
  }
  if (ratios.size() < 2) return ratios.empty() ? 0.0 : ratios.front();
  std::sort(ratios.begin(), ratios.end());
  const std::size_t m = ratios.size();
  return m % 2 ? ratios[m / 2] : 0.5 * (ratios[m / 2 - 1] + ratios[m / 2]);
}

RateReport estimate_rate(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const PenaltySpec& spec,
                         SolverOptions opts) {
  opts.record_iterates = true;
  const FitResult ols = fit(x, y, PenaltySpec::none(), opts);
  const FitResult pen = fit(x, y, spec, opts);
  const WorkingDesign w = working_design(x, opts.standardize);
  const OrthoExpansion e = expand(w.x, ScalingChoice::identity, opts.inflate);
  return {rate_r0(e, w.x), empirical_rate(pen.iterates), ols.iterations, pen.iterations};
}

Rng replication_rng(std::uint64_t seed, std::size_t n, std::size_t replication, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(replication), stream};
  return Rng(seq);
}

void SimulationSpec::validate() const {
  if (n < 1 || p < 1) throw std::invalid_argument("simulation: n and p must be positive");
  if (!(rho >= 0.0 && rho < 1.0)) throw std::invalid_argument("simulation: rho must lie in [0, 1)");
  if (!(sigma > 0.0)) throw std::invalid_argument("simulation: sigma must be positive");
  if (beta_true.size() != static_cast<Eigen::Index>(p))
    throw std::invalid_argument("simulation: beta_true must have p entries");
  if (replications < 1) throw std::invalid_argument("simulation: need at least one replication");
}

Eigen::VectorXd alternating_decay_beta(std::size_t p) {
  Eigen::VectorXd b(static_cast<Eigen::Index>(p));
  for (std::size_t j = 1; j <= p; ++j)
    b(static_cast<Eigen::Index>(j - 1)) = (j % 2 ? -1.0 : 1.0) * std::exp(-2.0 * (static_cast<double>(j) - 1.0) / 20.0);
  return b;
}

Eigen::VectorXd sparse_default_beta(std::size_t p) {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p));
  const double lead[] = {3.0, 1.5, 2.0};
  for (std::size_t j = 0; j < std::min<std::size_t>(3, p); ++j) b(static_cast<Eigen::Index>(j)) = lead[j];
  return b;
}

SimulatedData simulate(const SimulationSpec& spec, std::size_t replication) {
  spec.validate();
  Rng rng = replication_rng(spec.seed, spec.n, replication);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto n = static_cast<Eigen::Index>(spec.n);
  const auto p = static_cast<Eigen::Index>(spec.p);
  const double shared = std::sqrt(spec.rho), own = std::sqrt(1.0 - spec.rho);
  SimulatedData data{Eigen::MatrixXd(n, p), Eigen::VectorXd(n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    const double common = normal(rng);
    for (Eigen::Index j = 0; j < p; ++j) data.x(i, j) = shared * common + own * normal(rng);
  }
  for (Eigen::Index i = 0; i < n; ++i) data.y(i) = spec.sigma * normal(rng);
  data.y += data.x * spec.beta_true;
  return data;
}

IterationRow run_iteration_experiment(const SimulationSpec& spec, double lambda, const SolverOptions& opts) {
  spec.validate();
  IterationRow row;
  row.n = spec.n;
  for (std::size_t r = 0; r < spec.replications; ++r) {
    const SimulatedData data = simulate(spec, r);
    const FitResult ols = fit(data.x, data.y, PenaltySpec::none(), opts);
    const FitResult lasso = fit(data.x, data.y, PenaltySpec::lasso(lambda), opts);
    const WorkingDesign w = working_design(data.x, opts.standardize);
    const OrthoExpansion e = expand(w.x, ScalingChoice::identity, opts.inflate);
    row.mean_r0 += rate_r0(e, w.x);
    row.mean_iter_ols += static_cast<double>(ols.iterations);
    row.mean_iter_lasso += static_cast<double>(lasso.iterations);
  }
  const auto reps = static_cast<double>(spec.replications);
  row.mean_r0 /= reps;
  row.mean_iter_ols /= reps;
  row.mean_iter_lasso /= reps;
  return row;
}

std::vector<IterationRow> run_iteration_experiment(const SimulationSpec& spec, const std::vector<std::size_t>& n_grid,
                                                   double lambda, const SolverOptions& opts) {
  std::vector<IterationRow> rows;
  for (std::size_t n : n_grid) {
    SimulationSpec s = spec;
    s.n = n;
    rows.push_back(run_iteration_experiment(s, lambda, opts));
  }
  return rows;
}

OracleRow run_oracle_experiment(const SimulationSpec& spec, PenaltyKind penalty, double a, double lambda_exponent,
                                SolverOptions opts) {
  spec.validate();
  if (penalty != PenaltyKind::scad && penalty != PenaltyKind::mcp)
    throw std::invalid_argument("oracle experiment: penalty must be scad or mcp");
  if (!(lambda_exponent > 0.5 && lambda_exponent < 1.0))
    throw std::invalid_argument("oracle experiment: lambda exponent must lie in (0.5, 1)");
  if (spec.n <= spec.p) throw std::invalid_argument("oracle experiment: needs n > p so that X'X is invertible");

  const double n = static_cast<double>(spec.n);
  const double lambda = std::pow(n, lambda_exponent) / std::sqrt(n);
  const PenaltySpec pen = penalty == PenaltyKind::scad ? PenaltySpec::scad(lambda, a) : PenaltySpec::mcp(lambda, a);
  opts.init = InitKind::ols;
  opts.standardize = true;

  std::vector<Eigen::Index> support;
  for (Eigen::Index j = 0; j < spec.beta_true.size(); ++j)
    if (spec.beta_true(j) != 0.0) support.push_back(j);
  const auto p1 = static_cast<Eigen::Index>(support.size());

  OracleRow row;
  row.n = spec.n;
  double hits = 0.0, sq_err = 0.0, oracle_sq_err = 0.0;
  for (std::size_t r = 0; r < spec.replications; ++r) {
    const SimulatedData data = simulate(spec, r);
    if (Eigen::FullPivLU<Eigen::MatrixXd>(data.x).rank() < data.x.cols())
      throw NumericalError("oracle experiment: X'X is singular");
    const FitResult res = fit(data.x, data.y, pen, opts);

    bool exact = true;
    for (Eigen::Index j = 0; j < res.beta.size(); ++j)
      if ((res.beta(j) != 0.0) != (spec.beta_true(j) != 0.0)) exact = false;
    hits += exact ? 1.0 : 0.0;

    if (p1 > 0) {
      Eigen::MatrixXd x_s(data.x.rows(), p1);
      for (Eigen::Index k = 0; k < p1; ++k) x_s.col(k) = data.x.col(support[static_cast<std::size_t>(k)]);
      const Eigen::VectorXd oracle = pinv_least_squares(x_s, data.y);
      for (Eigen::Index k = 0; k < p1; ++k) {
        const Eigen::Index j = support[static_cast<std::size_t>(k)];
        sq_err += std::pow(res.beta(j) - spec.beta_true(j), 2);
        oracle_sq_err += std::pow(oracle(k) - spec.beta_true(j), 2);
      }
    }
  }
  const auto reps = static_cast<double>(spec.replications);
  row.support_recovery_rate = hits / reps;
  if (p1 > 0) {
    row.estimation_rmse_on_support = std::sqrt(sq_err / (reps * static_cast<double>(p1)));
    row.oracle_rmse_on_support = std::sqrt(oracle_sq_err / (reps * static_cast<double>(p1)));
  }
  return row;
}

std::vector<OracleRow> run_oracle_experiment(const SimulationSpec& spec, const std::vector<std::size_t>& n_grid,
                                             PenaltyKind penalty, double a, double lambda_exponent,
                                             const SolverOptions& opts) {
  std::vector<OracleRow> rows;
  for (std::size_t n : n_grid) {
    SimulationSpec s = spec;
    s.n = n;
    rows.push_back(run_oracle_experiment(s, penalty, a, lambda_exponent, opts));
  }
  return rows;
}

}  // namespace oem
