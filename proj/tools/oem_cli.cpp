// oem: command-line front end for the OEM penalized regression solver.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "oem/dataset.hpp"
#include "oem/diagnostics.hpp"
#include "oem/error.hpp"
#include "oem/linalg.hpp"
#include "oem/orthogonalize.hpp"
#include "oem/penalty.hpp"
#include "oem/report.hpp"
#include "oem/solver.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PenaltyFlags {
  std::string penalty = "lasso";
  double lambda = 1.0;
  double lambda2 = 0.0;
  double a = -1.0;  // kind-specific default when unset
  double delta = 1.0;
};

struct SolverFlags {
  double tol = 1e-6;
  std::size_t max_iter = 10000;
  std::string init = "zeros";
  bool accelerate = false;
  std::size_t groups = 1;
  bool record_trace = false;
  bool no_standardize = false;
  double inflate = 1.0;
  bool strict = false;
};

struct IoFlags {
  std::string data;
  std::string response;
  std::string out;
};

void add_io(CLI::App* app, IoFlags& io) {
  app->add_option("--data", io.data, "Comma-separated input file with a header row")->required();
  app->add_option("--response", io.response, "Name of the response column")->required();
  app->add_option("--out", io.out, "Write the report here instead of stdout");
}

void add_penalty(CLI::App* app, PenaltyFlags& f) {
  app->add_option("--penalty", f.penalty, "none|lasso|elastic_net|scad|mcp|garrote|berhu|bridge")->capture_default_str();
  app->add_option("--lambda", f.lambda, "Tuning parameter (lambda1 for elastic_net)")->capture_default_str();
  app->add_option("--lambda2", f.lambda2, "Ridge part of elastic_net")->capture_default_str();
  app->add_option("--a", f.a, "SCAD a (>2, default 3.7), MCP a (>1, default 2.5), bridge exponent in (0,1)");
  app->add_option("--delta", f.delta, "Berhu delta")->capture_default_str();
}

void add_solver(CLI::App* app, SolverFlags& f) {
  app->add_option("--tol", f.tol, "Relative coefficient-change tolerance")->capture_default_str();
  app->add_option("--max-iter", f.max_iter, "Iteration limit")->capture_default_str();
  app->add_option("--init", f.init, "zeros|ols")->capture_default_str();
  app->add_flag("--accelerate", f.accelerate, "Squared extrapolation with descent safeguard");
  app->add_option("--groups", f.groups, "Hybrid scheme group count (1 = plain OEM)")->capture_default_str();
  app->add_flag("--record-trace", f.record_trace, "Include the objective trace in the report");
  app->add_flag("--no-standardize", f.no_standardize, "Fit on the raw columns");
  app->add_option("--inflate", f.inflate, "Use d = inflate * gamma1")->capture_default_str();
  app->add_flag("--strict", f.strict, "Exit with status 3 when a fit does not converge");
}

oem::SolverOptions solver_options(const SolverFlags& f) {
  oem::SolverOptions o;
  o.tol = f.tol;
  o.max_iter = f.max_iter;
  if (f.init == "zeros") o.init = oem::InitKind::zeros;
  else if (f.init == "ols") o.init = oem::InitKind::ols;
  else throw UsageError("--init must be zeros or ols");
  o.accelerate = f.accelerate;
  o.groups = f.groups;
  o.record_trace = f.record_trace;
  o.standardize = !f.no_standardize;
  o.inflate = f.inflate;
  return o;
}

oem::PenaltySpec penalty_spec(const PenaltyFlags& f, const oem::Dataset& d, const oem::SolverOptions& opts) {
  using oem::PenaltyKind;
  using oem::PenaltySpec;
  const PenaltyKind kind = oem::penalty_kind_from_string(f.penalty);
  switch (kind) {
    case PenaltyKind::none: return PenaltySpec::none();
    case PenaltyKind::lasso: return PenaltySpec::lasso(f.lambda);
    case PenaltyKind::elastic_net: return PenaltySpec::elastic_net(f.lambda, f.lambda2);
    case PenaltyKind::scad: return PenaltySpec::scad(f.lambda, f.a < 0 ? 3.7 : f.a);
    case PenaltyKind::mcp: return PenaltySpec::mcp(f.lambda, f.a < 0 ? 2.5 : f.a);
    case PenaltyKind::berhu: return PenaltySpec::berhu(f.lambda, f.delta);
    case PenaltyKind::bridge: return PenaltySpec::bridge(f.lambda, f.a < 0 ? 0.5 : f.a);
    case PenaltyKind::garrote: {
      // baseline is OLS on the fitting scale
      const oem::WorkingDesign w = oem::working_design(d.x, opts.standardize);
      return PenaltySpec::garrote(f.lambda, oem::pinv_least_squares(w.x, d.y));
    }
  }
  throw UsageError("unknown penalty");
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      values.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw UsageError("cannot parse '" + item + "' as a number");
    }
  }
  return values;
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> out;
  for (double v : parse_list(text)) {
    if (!(v >= 1.0) || v != static_cast<double>(static_cast<std::size_t>(v)))
      throw UsageError("sample sizes must be positive integers");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw oem::DataError("cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Penalized least squares by orthogonalizing EM"};
  app.require_subcommand(1);

  IoFlags io;
  PenaltyFlags pen;
  SolverFlags sol;

  auto* fit_cmd = app.add_subcommand("fit", "Fit one penalized regression");
  add_io(fit_cmd, io);
  add_penalty(fit_cmd, pen);
  add_solver(fit_cmd, sol);

  auto* path_cmd = app.add_subcommand("path", "Sweep a descending lambda sequence with warm starts");
  std::string lambdas_text;
  std::size_t n_lambda = 10;
  double lambda_ratio = 0.01;
  bool no_warm_start = false;
  add_io(path_cmd, io);
  add_penalty(path_cmd, pen);
  add_solver(path_cmd, sol);
  path_cmd->add_option("--lambdas", lambdas_text, "Comma-separated descending lambdas");
  path_cmd->add_option("--n-lambda", n_lambda, "Grid size when --lambdas is absent")->capture_default_str();
  path_cmd->add_option("--lambda-ratio", lambda_ratio, "Smallest/largest lambda on the grid")->capture_default_str();
  path_cmd->add_flag("--no-warm-start", no_warm_start, "Start every fit from the configured init");

  auto* orth_cmd = app.add_subcommand("orthogonalize", "Actively orthogonalize the predictor matrix");
  std::string scaling = "identity";
  double orth_inflate = 1.0;
  bool want_delta = false;
  add_io(orth_cmd, io);
  orth_cmd->add_option("--scaling", scaling, "identity|column-norm")->capture_default_str();
  orth_cmd->add_option("--inflate", orth_inflate, "Use d = inflate * gamma1")->capture_default_str();
  orth_cmd->add_flag("--delta", want_delta, "Materialize the added rows");

  auto* coh_cmd = app.add_subcommand("coherence", "Check grouping coherence of a fit or a given beta");
  std::string beta_text;
  double coh_tol = 1e-8;
  add_io(coh_cmd, io);
  add_penalty(coh_cmd, pen);
  add_solver(coh_cmd, sol);
  coh_cmd->add_option("--beta", beta_text, "Comma-separated coefficients to check instead of fitting");
  coh_cmd->add_option("--coherence-tol", coh_tol, "Tolerance on signed coefficient equality")->capture_default_str();

  std::string n_grid_text = "100,400,1600,6400";
  std::size_t sim_p = 10, reps = 20;
  double rho = 0.1, sigma = 1.0, bench_lambda = 0.5;
  std::uint64_t seed = 20120101;
  std::string out_path;
  auto add_sim = [&](CLI::App* cmd) {
    cmd->add_option("--n-grid", n_grid_text, "Comma-separated sample sizes")->capture_default_str();
    cmd->add_option("--p", sim_p, "Number of predictors")->capture_default_str();
    cmd->add_option("--rho", rho, "Equicorrelation of the design")->capture_default_str();
    cmd->add_option("--sigma", sigma, "Noise standard deviation")->capture_default_str();
    cmd->add_option("--replications", reps, "Replications per sample size")->capture_default_str();
    cmd->add_option("--seed", seed, "Base seed")->capture_default_str();
    cmd->add_option("--out", out_path, "Write the long-format table here instead of stdout");
    add_solver(cmd, sol);
  };

  auto* bench_it = app.add_subcommand("bench-iterations", "Iteration counts and R0 against n (OLS vs lasso)");
  add_sim(bench_it);
  bench_it->add_option("--lambda", bench_lambda, "Lasso lambda")->capture_default_str();

  auto* bench_or = app.add_subcommand("bench-oracle", "Support recovery of SCAD/MCP against n");
  std::string oracle_penalty = "scad";
  double oracle_a = -1.0, lambda_exponent = 0.75;
  add_sim(bench_or);
  bench_or->add_option("--penalty", oracle_penalty, "scad|mcp")->capture_default_str();
  bench_or->add_option("--a", oracle_a, "Concavity parameter (default 3.7 scad, 2.5 mcp)");
  bench_or->add_option("--lambda-exponent", lambda_exponent, "lambda_n = n^exponent")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    const oem::SolverOptions opts = solver_options(sol);

    if (*fit_cmd || *path_cmd || *coh_cmd || *orth_cmd) {
      const oem::Dataset d = oem::load_dataset(io.data, io.response);
      Output out(io.out);
      std::ostream& os = out.stream();

      if (*orth_cmd) {
        oem::ScalingChoice choice;
        if (scaling == "identity") choice = oem::ScalingChoice::identity;
        else if (scaling == "column-norm") choice = oem::ScalingChoice::column_norm;
        else throw UsageError("--scaling must be identity or column-norm");
        const oem::OrthoExpansion e = oem::expand(d.x, choice, orth_inflate, want_delta);
        os << "command: orthogonalize\ninput: " << io.data << "\nn: " << d.n() << "\np: " << d.p()
           << "\nscaling: " << scaling << "\n";
        oem::write_expansion(os, e, d.column_names);
        return 0;
      }

      const oem::PenaltySpec spec = penalty_spec(pen, d, opts);
      oem::RunEcho echo{"", io.data, io.response, spec.describe(), opts};

      if (*fit_cmd) {
        echo.command = "fit";
        const oem::FitResult res = oem::fit(d.x, d.y, spec, opts);
        oem::write_echo(os, echo, d);
        oem::write_fit(os, res, d.column_names, spec.lambda());
        if (sol.strict && !res.converged) {
          std::cerr << "error: fit did not converge in " << res.iterations << " iterations\n";
          return kExitNumerical;
        }
        return 0;
      }

      if (*path_cmd) {
        echo.command = "path";
        oem::PathRequest req;
        req.lambdas = lambdas_text.empty()
                          ? oem::log_lambda_grid(oem::lambda_max(d.x, d.y, opts.standardize), n_lambda, lambda_ratio)
                          : parse_list(lambdas_text);
        req.warm_start = !no_warm_start;
        req.penalty = spec;
        req.options = opts;
        const oem::PathResult res = oem::run_path(d, req);
        oem::write_echo(os, echo, d);
        os << "warm_start: " << (req.warm_start ? "true" : "false") << "\n";
        oem::write_path(os, res, d.column_names);
        if (sol.strict) {
          for (const auto& e : res.entries)
            if (!e.result || !e.result->converged) {
              std::cerr << "error: fit at lambda " << e.lambda << " failed or did not converge\n";
              return kExitNumerical;
            }
        }
        return 0;
      }

      if (*coh_cmd) {
        echo.command = "coherence";
        Eigen::VectorXd beta;
        if (!beta_text.empty()) {
          const std::vector<double> values = parse_list(beta_text);
          if (static_cast<Eigen::Index>(values.size()) != d.p())
            throw UsageError("--beta needs exactly " + std::to_string(d.p()) + " values");
          beta = Eigen::Map<const Eigen::VectorXd>(values.data(), d.p());
        } else {
          const oem::FitResult res = oem::fit(d.x, d.y, spec, opts);
          beta = res.beta;
          oem::write_echo(os, echo, d);
          oem::write_fit(os, res, d.column_names, spec.lambda());
        }
        oem::write_coherence(os, oem::check_coherence(d.x, beta, coh_tol), d.column_names);
        return 0;
      }
    }

    oem::SimulationSpec sim;
    sim.p = sim_p;
    sim.rho = rho;
    sim.sigma = sigma;
    sim.replications = reps;
    sim.seed = seed;
    const std::vector<std::size_t> grid = parse_sizes(n_grid_text);
    Output out(out_path);

    if (*bench_it) {
      sim.beta_true = oem::alternating_decay_beta(sim_p);
      const auto rows = oem::run_iteration_experiment(sim, grid, bench_lambda, opts);
      oem::write_long_header(out.stream());
      oem::write_long(out.stream(), "iterations", rows);
      return 0;
    }

    if (*bench_or) {
      sim.beta_true = oem::sparse_default_beta(sim_p);
      const oem::PenaltyKind kind = oem::penalty_kind_from_string(oracle_penalty);
      const double a = oracle_a > 0 ? oracle_a : (kind == oem::PenaltyKind::mcp ? 2.5 : 3.7);
      const auto rows = oem::run_oracle_experiment(sim, grid, kind, a, lambda_exponent, opts);
      oem::write_long_header(out.stream());
      oem::write_long(out.stream(), "oracle_" + oracle_penalty, rows);
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const oem::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const oem::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::domain_error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return 0;
}
