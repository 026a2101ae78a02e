#include "oem/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "oem/error.hpp"
#include "oem/linalg.hpp"

namespace oem {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(std::string_view(line).substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

double parse_cell(const std::string& cell, std::size_t row, const std::string& column, const std::string& source) {
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (cell.empty() || ec != std::errc() || ptr != end || !std::isfinite(value))
    throw DataError(source + ": row " + std::to_string(row) + ", column '" + column + "': '" + cell +
                    "' is not a finite number");
  return value;
}

}  // namespace

Dataset parse_dataset(std::istream& in, const std::string& response_column, const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) throw DataError(source + ": empty file");
  const std::vector<std::string> header = split_row(line);
  const auto resp = std::find(header.begin(), header.end(), response_column);
  if (resp == header.end()) throw DataError(source + ": response column '" + response_column + "' not found");
  const auto resp_idx = static_cast<std::size_t>(resp - header.begin());
  if (header.size() < 2) throw DataError(source + ": need at least one predictor column");

  std::vector<std::vector<double>> rows;
  std::size_t row_number = 1;  // header is row 1
  while (std::getline(in, line)) {
    ++row_number;
    if (trim(line).empty()) continue;
    const std::vector<std::string> cells = split_row(line);
    if (cells.size() != header.size())
      throw DataError(source + ": row " + std::to_string(row_number) + " has " + std::to_string(cells.size()) +
                      " cells, header has " + std::to_string(header.size()));
    std::vector<double> values(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) values[c] = parse_cell(cells[c], row_number, header[c], source);
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw DataError(source + ": no data rows");

  Dataset d;
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto p = static_cast<Eigen::Index>(header.size() - 1);
  d.x.resize(n, p);
  d.y.resize(n);
  d.response_name = response_column;
  for (std::size_t c = 0; c < header.size(); ++c)
    if (c != resp_idx) d.column_names.push_back(header[c]);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index col = 0;
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (c == resp_idx) d.y(i) = rows[static_cast<std::size_t>(i)][c];
      else d.x(i, col++) = rows[static_cast<std::size_t>(i)][c];
    }
  }
  d.scale = Eigen::VectorXd::Ones(p);
  return d;
}

Dataset load_dataset(const std::string& path, const std::string& response_column) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return parse_dataset(in, response_column, path);
}

Dataset standardize(const Dataset& d) {
  Dataset out = d;
  for (Eigen::Index j = 0; j < d.p(); ++j) {
    const double norm = std::sqrt(detail::sequential_dot(d.x.col(j), d.x.col(j)));
    if (!(norm > 0.0)) throw DataError("column '" + d.column_names[static_cast<std::size_t>(j)] + "' is all zeros");
    out.x.col(j) /= norm;
    out.scale(j) = d.scale(j) * norm;
  }
  return out;
}

Eigen::VectorXd raw_coefficients(const Dataset& standardized, const Eigen::VectorXd& beta) {
  return beta.cwiseQuotient(standardized.scale);
}

Eigen::MatrixXd unstandardized_x(const Dataset& standardized) {
  return standardized.x * standardized.scale.asDiagonal();
}

double lambda_max(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, bool standardize) {
  const WorkingDesign w = working_design(x, standardize);
  return cross(w.x, y).cwiseAbs().maxCoeff();
}

std::vector<double> log_lambda_grid(double lambda_max, std::size_t n_lambda, double ratio) {
  if (!(lambda_max > 0.0) || n_lambda < 1 || !(ratio > 0.0 && ratio < 1.0))
    throw std::invalid_argument("log_lambda_grid: need lambda_max > 0, n_lambda >= 1, 0 < ratio < 1");
  std::vector<double> grid(n_lambda);
  for (std::size_t k = 0; k < n_lambda; ++k) {
    const double frac = n_lambda == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(n_lambda - 1);
    grid[k] = lambda_max * std::pow(ratio, frac);
  }
  return grid;
}

void PathRequest::validate() const {
  if (lambdas.empty()) throw std::invalid_argument("path: no lambda values");
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    if (!(lambdas[k] > 0.0) || !std::isfinite(lambdas[k])) throw std::invalid_argument("path: lambdas must be positive");
    if (k > 0 && !(lambdas[k] < lambdas[k - 1])) throw std::invalid_argument("path: lambdas must be strictly descending");
  }
  if (options.groups != 1) throw std::invalid_argument("path: hybrid grouping is not supported along a path");
}

PathResult run_path(const Dataset& d, const PathRequest& req) {
  req.validate();
  const WorkingDesign w = working_design(d.x, req.options.standardize);
  PathResult out;
  out.expansion = expand(w.x, ScalingChoice::identity, req.options.inflate, false);

  SolverOptions opts = req.options;
  std::optional<Eigen::VectorXd> previous;
  for (double lambda : req.lambdas) {
    PathEntry entry;
    entry.lambda = lambda;
    try {
      const PenaltySpec spec = req.penalty.with_lambda(lambda);
      if (req.warm_start && previous) {
        opts.init = InitKind::custom;
        opts.init_beta = *previous;
      }
      FitResult res = fit(d.x, d.y, spec, opts, &out.expansion);
      previous = res.beta;
      entry.result = std::move(res);
    } catch (const std::exception& ex) {
      entry.error = ex.what();
    }
    out.entries.push_back(std::move(entry));
  }
  return out;
}

}  // namespace oem
