#include "oem/solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "oem/error.hpp"
#include "oem/linalg.hpp"

namespace oem {

namespace {

// A separable OEM problem in fitting coordinates: u(beta) = c + d .* beta - G beta.
struct Subproblem {
  const Eigen::MatrixXd& gram;
  Eigen::VectorXd c;
  const Eigen::VectorXd& d;
  const PenaltySpec& spec;
  std::function<double(const Eigen::VectorXd&)> loss;  // objective up to a constant
};

struct RunResult {
  Eigen::VectorXd beta;
  Eigen::VectorXd u;
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> trace;
  std::vector<Eigen::VectorXd> iterates;
};

Eigen::VectorXd u_of(const Subproblem& prob, const Eigen::VectorXd& beta) {
  const Eigen::VectorXd g_beta = gram_times(prob.gram, beta);
  Eigen::VectorXd u(beta.size());
  for (Eigen::Index j = 0; j < beta.size(); ++j) u(j) = (prob.c(j) + prob.d(j) * beta(j)) - g_beta(j);
  return u;
}

// One OEM map M(beta). For the bridge the scalar search is a generalized
// M-step: a coordinate is only moved when its surrogate does not increase.
Eigen::VectorXd oem_map(const Subproblem& prob, const Eigen::VectorXd& beta, Eigen::VectorXd* u_out = nullptr) {
  Eigen::VectorXd u = u_of(prob, beta);
  Eigen::VectorXd next(beta.size());
  const bool generalized = prob.spec.kind() == PenaltyKind::bridge;
  for (Eigen::Index j = 0; j < beta.size(); ++j) {
    double cand = solve_scalar(prob.d(j), u(j), j, prob.spec);
    if (generalized && scalar_objective(prob.d(j), u(j), cand, j, prob.spec) >
                           scalar_objective(prob.d(j), u(j), beta(j), j, prob.spec))
      cand = beta(j);
    next(j) = cand;
  }
  if (u_out) *u_out = std::move(u);
  return next;
}

double max_relative_change(const Eigen::VectorXd& before, const Eigen::VectorXd& after) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < before.size(); ++j)
    worst = std::max(worst, std::abs(after(j) - before(j)) / std::max(std::abs(before(j)), 1.0));
  return worst;
}

RunResult run_oem(const Subproblem& prob, Eigen::VectorXd beta, const SolverOptions& opts, bool record_trace,
                  bool record_iterates) {
  RunResult out;
  if (record_trace) out.trace.push_back(prob.loss(beta));
  if (record_iterates) out.iterates.push_back(beta);

  for (std::size_t k = 1; k <= opts.max_iter; ++k) {
    Eigen::VectorXd u;
    Eigen::VectorXd next = oem_map(prob, beta, &u);
    if (opts.accelerate) {
      const Eigen::VectorXd second = oem_map(prob, next);
      const Eigen::VectorXd r = next - beta;
      const Eigen::VectorXd v = second - next - r;
      const double r_norm = r.norm(), v_norm = v.norm();
      Eigen::VectorXd chosen = second;
      if (r_norm > 0.0 && v_norm > 0.0) {
        const double gamma = -r_norm / v_norm;
        Eigen::VectorXd extrapolated = beta - 2.0 * gamma * r + gamma * gamma * v;
        if (is_feasible(extrapolated, prob.spec) && prob.loss(extrapolated) <= prob.loss(second))
          chosen = std::move(extrapolated);
      } else if (r_norm == 0.0) {
        chosen = beta;
      }
      next = std::move(chosen);
      u = u_of(prob, next);
    }
    const double change = max_relative_change(beta, next);
    beta = std::move(next);
    out.u = std::move(u);
    out.iterations = k;
    if (record_trace) out.trace.push_back(prob.loss(beta));
    if (record_iterates) out.iterates.push_back(beta);
    if (change < opts.tol) {
      out.converged = true;
      break;
    }
  }
  if (out.iterations == 0) out.u = u_of(prob, beta);
  out.beta = std::move(beta);
  return out;
}

// SCAD and MCP closed forms need d_j >= 1, and every scalar solve needs d_j > 0.
OrthoExpansion admissible(OrthoExpansion e, const PenaltySpec& spec) {
  double needed = e.d_scalar;
  if (!(needed > 0.0)) needed = 1.0;
  if (spec.kind() == PenaltyKind::scad || spec.kind() == PenaltyKind::mcp) {
    for (Eigen::Index j = 0; j < e.s_diag.size(); ++j)
      needed = std::max(needed, 1.0 / (e.s_diag(j) * e.s_diag(j)));
  }
  if (needed > e.d_scalar) e = with_d(e, needed);
  return e;
}

void check_dimensions(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  if (x.rows() == 0 || x.cols() == 0) throw std::invalid_argument("fit: empty regression matrix");
  if (y.size() != x.rows())
    throw std::invalid_argument("fit: response has " + std::to_string(y.size()) + " entries but X has " +
                                std::to_string(x.rows()) + " rows");
  require_finite(x, "regression matrix");
  require_finite(y, "response");
}

void check_garrote(const PenaltySpec& spec, Eigen::Index p) {
  if (spec.kind() == PenaltyKind::garrote && spec.garrote_base()->size() != p)
    throw std::invalid_argument("fit: garrote baseline has the wrong length");
}

Eigen::VectorXd initial_beta(const SolverOptions& opts, const WorkingDesign& w, const Eigen::VectorXd& y) {
  const Eigen::Index p = w.x.cols();
  switch (opts.init) {
    case InitKind::zeros: return Eigen::VectorXd::Zero(p);
    case InitKind::ols: return pinv_least_squares(w.x, y);
    case InitKind::custom:
      if (opts.init_beta.size() != p) throw std::invalid_argument("fit: custom init has the wrong length");
      return opts.init_beta.cwiseProduct(w.scale);
  }
  return Eigen::VectorXd::Zero(p);
}

Eigen::VectorXd to_raw(const Eigen::VectorXd& beta, const Eigen::VectorXd& scale) {
  return beta.cwiseQuotient(scale);
}

}  // namespace

void SolverOptions::validate(Eigen::Index p) const {
  if (!(tol > 0.0)) throw std::invalid_argument("solver options: tol must be > 0");
  if (max_iter < 1) throw std::invalid_argument("solver options: max_iter must be >= 1");
  if (groups < 1 || static_cast<Eigen::Index>(groups) > p)
    throw std::invalid_argument("solver options: groups must lie in [1, p]");
  if (!(inflate >= 1.0)) throw std::invalid_argument("solver options: inflate must be >= 1");
}

double objective(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& beta,
                 const PenaltySpec& spec) {
  if (x.rows() != y.size() || x.cols() != beta.size()) throw std::invalid_argument("objective: dimension mismatch");
  return (y - x * beta).squaredNorm() + penalty_value(beta, spec);
}

Eigen::VectorXd oem_step(const Eigen::VectorXd& u, const OrthoExpansion& expansion, const PenaltySpec& spec) {
  if (u.size() != expansion.dim()) throw std::invalid_argument("oem_step: u does not match the expansion");
  Eigen::VectorXd beta(u.size());
  for (Eigen::Index j = 0; j < u.size(); ++j) beta(j) = solve_scalar(expansion.d_diag(j), u(j), j, spec);
  return beta;
}

WorkingDesign working_design(const Eigen::MatrixXd& x, bool standardize) {
  WorkingDesign w{x, Eigen::VectorXd::Ones(x.cols())};
  if (!standardize) return w;
  w.scale = scaling_diagonal(x, ScalingChoice::column_norm);
  for (Eigen::Index j = 0; j < x.cols(); ++j) w.x.col(j) /= w.scale(j);
  return w;
}

FitResult fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const PenaltySpec& spec, const SolverOptions& opts,
              const OrthoExpansion* expansion) {
  check_dimensions(x, y);
  opts.validate(x.cols());
  check_garrote(spec, x.cols());
  if (opts.groups > 1) {
    if (expansion) throw std::invalid_argument("fit: a shared expansion cannot be used with groups > 1");
    return fit_hybrid(x, y, spec, opts);
  }

  const WorkingDesign w = working_design(x, opts.standardize);
  const Eigen::MatrixXd g = gram(w.x);

  OrthoExpansion e;
  if (expansion) {
    if (expansion->dim() != x.cols()) throw std::invalid_argument("fit: expansion dimension does not match X");
    const Eigen::MatrixXd check = g + expansion->a_matrix;
    Eigen::MatrixXd off = check;
    off.diagonal() -= expansion->d_diag;
    if (off.cwiseAbs().maxCoeff() > 1e-8 * std::max(expansion->d_scalar, 1.0))
      throw std::invalid_argument("fit: expansion does not orthogonalize the working design");
    e = *expansion;
  } else {
    e = expand_from_gram(g, Eigen::VectorXd::Ones(x.cols()), opts.inflate, false);
  }
  e = admissible(std::move(e), spec);

  Subproblem prob{g, cross(w.x, y), e.d_diag, spec,
                  [&](const Eigen::VectorXd& b) { return (y - w.x * b).squaredNorm() + penalty_value(b, spec); }};

  RunResult run = run_oem(prob, initial_beta(opts, w, y), opts, opts.record_trace, opts.record_iterates);

  FitResult out;
  out.beta = to_raw(run.beta, w.scale);
  out.iterations = run.iterations;
  out.converged = run.converged;
  out.objective_trace = std::move(run.trace);
  out.iterates.reserve(run.iterates.size());
  for (const auto& it : run.iterates) out.iterates.push_back(to_raw(it, w.scale));
  out.final_objective = prob.loss(run.beta);
  out.u_final = std::move(run.u);
  out.expansion = {e.gamma1, e.d_scalar, e.multiplicity_t};
  return out;
}

std::vector<std::vector<Eigen::Index>> contiguous_groups(Eigen::Index p, std::size_t g) {
  if (g < 1 || static_cast<Eigen::Index>(g) > p) throw std::invalid_argument("contiguous_groups: need 1 <= g <= p");
  std::vector<std::vector<Eigen::Index>> groups(g);
  const Eigen::Index base = p / static_cast<Eigen::Index>(g);
  const Eigen::Index extra = p % static_cast<Eigen::Index>(g);
  Eigen::Index next = 0;
  for (std::size_t k = 0; k < g; ++k) {
    const Eigen::Index size = base + (static_cast<Eigen::Index>(k) < extra ? 1 : 0);
    for (Eigen::Index i = 0; i < size; ++i) groups[k].push_back(next++);
  }
  return groups;
}

FitResult fit_hybrid(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const PenaltySpec& spec,
                     const SolverOptions& opts) {
  check_dimensions(x, y);
  opts.validate(x.cols());
  check_garrote(spec, x.cols());
  if (opts.groups == 1) return fit(x, y, spec, opts);

  const WorkingDesign w = working_design(x, opts.standardize);
  const Eigen::MatrixXd g = gram(w.x);
  const Eigen::VectorXd c = cross(w.x, y);
  const auto groups = contiguous_groups(x.cols(), opts.groups);

  struct Block {
    std::vector<Eigen::Index> idx;
    Eigen::MatrixXd gram;
    OrthoExpansion expansion;
    PenaltySpec spec;
  };
  std::vector<Block> blocks;
  for (const auto& idx : groups) {
    const auto n_idx = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd sub(n_idx, n_idx);
    for (Eigen::Index a = 0; a < n_idx; ++a)
      for (Eigen::Index b = 0; b < n_idx; ++b) sub(a, b) = g(idx[a], idx[b]);
    PenaltySpec sub_spec = spec.subset(idx);
    OrthoExpansion e = admissible(expand_from_gram(sub, Eigen::VectorXd::Ones(n_idx), opts.inflate, false), sub_spec);
    blocks.push_back({idx, std::move(sub), std::move(e), std::move(sub_spec)});
  }

  auto loss = [&](const Eigen::VectorXd& b) { return (y - w.x * b).squaredNorm() + penalty_value(b, spec); };

  SolverOptions inner = opts;
  inner.groups = 1;

  Eigen::VectorXd beta = initial_beta(opts, w, y);
  FitResult out;
  if (opts.record_trace) out.objective_trace.push_back(loss(beta));
  if (opts.record_iterates) out.iterates.push_back(to_raw(beta, w.scale));

  for (std::size_t sweep = 1; sweep <= opts.max_iter; ++sweep) {
    const Eigen::VectorXd before = beta;
    for (const Block& blk : blocks) {
      const auto n_idx = static_cast<Eigen::Index>(blk.idx.size());
      Eigen::VectorXd beta_g(n_idx), c_g(n_idx);
      const Eigen::VectorXd g_beta = gram_times(g, beta);
      for (Eigen::Index a = 0; a < n_idx; ++a) beta_g(a) = beta(blk.idx[a]);
      const Eigen::VectorXd own = gram_times(blk.gram, beta_g);
      // X_g'(Y - X_{-g} beta_{-g})
      for (Eigen::Index a = 0; a < n_idx; ++a) c_g(a) = c(blk.idx[a]) - g_beta(blk.idx[a]) + own(a);
      const PenaltySpec& sub_spec = blk.spec;
      const Eigen::MatrixXd& sub_gram = blk.gram;
      Subproblem prob{sub_gram, c_g, blk.expansion.d_diag, sub_spec,
                      [&sub_gram, &sub_spec, c_g](const Eigen::VectorXd& b) {
                        return b.dot(sub_gram * b) - 2.0 * c_g.dot(b) + penalty_value(b, sub_spec);
                      }};
      const RunResult run = run_oem(prob, beta_g, inner, false, false);
      for (Eigen::Index a = 0; a < n_idx; ++a) beta(blk.idx[a]) = run.beta(a);
    }
    out.iterations = sweep;
    if (opts.record_trace) out.objective_trace.push_back(loss(beta));
    if (opts.record_iterates) out.iterates.push_back(to_raw(beta, w.scale));
    if (max_relative_change(before, beta) < opts.tol) {
      out.converged = true;
      break;
    }
  }

  const OrthoExpansion whole = expand_from_gram(g, Eigen::VectorXd::Ones(x.cols()), opts.inflate, false);
  out.beta = to_raw(beta, w.scale);
  out.final_objective = loss(beta);
  out.u_final = c + whole.a_matrix * beta;
  out.expansion = {whole.gamma1, whole.d_scalar, whole.multiplicity_t};
  return out;
}

}  // namespace oem
