#include "oem/report.hpp"

#include <iomanip>
#include <ostream>
#include <sstream>

namespace oem {

namespace {

std::string_view init_name(InitKind k) {
  switch (k) {
    case InitKind::zeros: return "zeros";
    case InitKind::ols: return "ols";
    case InitKind::custom: return "custom";
  }
  return "?";
}

void write_named_vector(std::ostream& os, const std::string& key, const Eigen::VectorXd& v,
                        const std::vector<std::string>& names) {
  os << key << ":\n";
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    const auto idx = static_cast<std::size_t>(j);
    os << "  " << (idx < names.size() ? names[idx] : "x" + std::to_string(j + 1)) << " " << format_number(v(j))
       << "\n";
  }
}

void write_matrix(std::ostream& os, const std::string& key, const Eigen::MatrixXd& m) {
  os << key << ": " << m.rows() << "x" << m.cols() << "\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    os << " ";
    for (Eigen::Index j = 0; j < m.cols(); ++j) os << " " << format_number(m(i, j));
    os << "\n";
  }
}

}  // namespace

std::string format_number(double v) {
  if (v == 0.0) return "0";  // also folds -0
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

void write_echo(std::ostream& os, const RunEcho& echo, const Dataset& d) {
  os << "command: " << echo.command << "\n";
  os << "input: " << echo.input << "\n";
  os << "response: " << echo.response << "\n";
  os << "n: " << d.n() << "\n";
  os << "p: " << d.p() << "\n";
  if (!echo.penalty.empty()) os << "penalty: " << echo.penalty << "\n";
  const SolverOptions& o = echo.options;
  os << "standardize: " << (o.standardize ? "true" : "false") << "\n";
  os << "tol: " << format_number(o.tol) << "\n";
  os << "max_iter: " << o.max_iter << "\n";
  os << "init: " << init_name(o.init) << "\n";
  os << "accelerate: " << (o.accelerate ? "true" : "false") << "\n";
  os << "groups: " << o.groups << "\n";
  os << "inflate: " << format_number(o.inflate) << "\n";
}

void write_fit(std::ostream& os, const FitResult& fit, const std::vector<std::string>& names, double lambda) {
  os << "lambda: " << format_number(lambda) << "\n";
  os << "iterations: " << fit.iterations << "\n";
  os << "converged: " << (fit.converged ? "true" : "false") << "\n";
  os << "objective: " << format_number(fit.final_objective) << "\n";
  os << "expansion.gamma1: " << format_number(fit.expansion.gamma1) << "\n";
  os << "expansion.d: " << format_number(fit.expansion.d) << "\n";
  os << "expansion.t: " << fit.expansion.t << "\n";
  write_named_vector(os, "coefficients", fit.beta, names);
  if (!fit.objective_trace.empty()) {
    os << "objective_trace:\n";
    for (double v : fit.objective_trace) os << "  " << format_number(v) << "\n";
  }
}

void write_path(std::ostream& os, const PathResult& path, const std::vector<std::string>& names) {
  os << "expansion.gamma1: " << format_number(path.expansion.gamma1) << "\n";
  os << "expansion.d: " << format_number(path.expansion.d_scalar) << "\n";
  os << "expansion.t: " << path.expansion.multiplicity_t << "\n";
  os << "path_length: " << path.entries.size() << "\n";
  for (std::size_t k = 0; k < path.entries.size(); ++k) {
    const PathEntry& e = path.entries[k];
    os << "[step " << (k + 1) << "]\n";
    if (e.result) {
      write_fit(os, *e.result, names, e.lambda);
    } else {
      os << "lambda: " << format_number(e.lambda) << "\n";
      os << "error: " << e.error << "\n";
    }
  }
}

void write_expansion(std::ostream& os, const OrthoExpansion& e, const std::vector<std::string>& names) {
  os << "gamma1: " << format_number(e.gamma1) << "\n";
  os << "gamma_p: " << format_number(e.gamma_p) << "\n";
  os << "d: " << format_number(e.d_scalar) << "\n";
  os << "t: " << e.multiplicity_t << "\n";
  write_named_vector(os, "s", e.s_diag, names);
  write_named_vector(os, "d_j", e.d_diag, names);
  write_matrix(os, "A", e.a_matrix);
  if (e.delta) {
    os << "added_rows: " << e.delta->rows() << "\n";
    write_matrix(os, "delta", *e.delta);
  }
}

void write_coherence(std::ostream& os, const CoherenceReport& r, const std::vector<std::string>& names) {
  auto name = [&](Eigen::Index j) {
    const auto idx = static_cast<std::size_t>(j);
    return idx < names.size() ? names[idx] : "x" + std::to_string(j + 1);
  };
  os << "coherent: " << (r.coherent ? "true" : "false") << "\n";
  os << "aliased_pairs: " << r.aliased_pairs.size() << "\n";
  for (const auto& p : r.aliased_pairs)
    os << "  " << name(p.i) << " " << (p.sign > 0 ? "=" : "= -") << " " << name(p.j) << "\n";
  os << "violations: " << r.violations.size() << "\n";
  for (const auto& p : r.violations) os << "  " << name(p.i) << " " << name(p.j) << "\n";
}

void write_long_header(std::ostream& os) { os << "experiment,n,metric,value\n"; }

void write_long(std::ostream& os, const std::string& experiment, const std::vector<IterationRow>& rows) {
  for (const auto& r : rows) {
    os << experiment << "," << r.n << ",mean_r0," << format_number(r.mean_r0) << "\n";
    os << experiment << "," << r.n << ",mean_iter_ols," << format_number(r.mean_iter_ols) << "\n";
    os << experiment << "," << r.n << ",mean_iter_lasso," << format_number(r.mean_iter_lasso) << "\n";
  }
}

void write_long(std::ostream& os, const std::string& experiment, const std::vector<OracleRow>& rows) {
  for (const auto& r : rows) {
    os << experiment << "," << r.n << ",support_recovery_rate," << format_number(r.support_recovery_rate) << "\n";
    os << experiment << "," << r.n << ",rmse_on_support," << format_number(r.estimation_rmse_on_support) << "\n";
    os << experiment << "," << r.n << ",oracle_rmse_on_support," << format_number(r.oracle_rmse_on_support) << "\n";
  }
}

}  // namespace oem
