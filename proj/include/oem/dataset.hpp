// Data ingestion, standardization and lambda-path sweeps.
#ifndef OEM_DATASET_HPP
#define OEM_DATASET_HPP

#include <Eigen/Dense>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "oem/orthogonalize.hpp"
#include "oem/penalty.hpp"
#include "oem/solver.hpp"

namespace oem {

struct Dataset {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  std::vector<std::string> column_names;
  std::string response_name;
  Eigen::VectorXd scale;  // x_standardized = x_raw / scale; ones when raw

  Eigen::Index n() const { return x.rows(); }
  Eigen::Index p() const { return x.cols(); }
};

/// Comma-separated text with a header row. The named column becomes y, the
/// remaining columns become X in header order.
Dataset parse_dataset(std::istream& in, const std::string& response_column, const std::string& source = "<stream>");
Dataset load_dataset(const std::string& path, const std::string& response_column);

/// Rescales every column of X to unit sum of squares, recording the factors.
Dataset standardize(const Dataset& d);

/// Maps coefficients fitted on standardize(d) back to the raw columns.
Eigen::VectorXd raw_coefficients(const Dataset& standardized, const Eigen::VectorXd& beta);
/// Inverse of standardize().
Eigen::MatrixXd unstandardized_x(const Dataset& standardized);

/// max_j |x_j'Y| on the working design: the smallest lasso lambda giving beta = 0.
double lambda_max(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, bool standardize);

/// n_lambda values log-spaced from lambda_max down to ratio * lambda_max.
std::vector<double> log_lambda_grid(double lambda_max, std::size_t n_lambda, double ratio);

struct PathRequest {
  std::vector<double> lambdas;  // strictly descending, positive
  bool warm_start = true;
  PenaltySpec penalty;  // lambda is replaced per step
  SolverOptions options;

  void validate() const;
};

struct PathEntry {
  double lambda = 0.0;
  std::optional<FitResult> result;
  std::string error;  // set when the fit at this lambda failed
};

struct PathResult {
  std::vector<PathEntry> entries;
  OrthoExpansion expansion;  // shared by every fit
};

/// One fit per lambda, each warm-started from the previous solution when
/// requested. The expansion is computed once.
PathResult run_path(const Dataset& d, const PathRequest& req);

}  // namespace oem

#endif  // OEM_DATASET_HPP
