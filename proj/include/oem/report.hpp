// Plain-text reports: "key: value" lines and indented array blocks, one
// document per run. Experiment tables use comma-separated long format.
#ifndef OEM_REPORT_HPP
#define OEM_REPORT_HPP

#include <Eigen/Dense>

#include <iosfwd>
#include <string>
#include <vector>

#include "oem/dataset.hpp"
#include "oem/diagnostics.hpp"
#include "oem/orthogonalize.hpp"
#include "oem/solver.hpp"

namespace oem {

struct RunEcho {
  std::string command;
  std::string input;
  std::string response;
  std::string penalty;
  SolverOptions options;
};

void write_echo(std::ostream& os, const RunEcho& echo, const Dataset& d);
void write_fit(std::ostream& os, const FitResult& fit, const std::vector<std::string>& names, double lambda);
void write_path(std::ostream& os, const PathResult& path, const std::vector<std::string>& names);
void write_expansion(std::ostream& os, const OrthoExpansion& e, const std::vector<std::string>& names);
void write_coherence(std::ostream& os, const CoherenceReport& r, const std::vector<std::string>& names);

/// Header "experiment,n,metric,value" plus one line per metric.
void write_long_header(std::ostream& os);
void write_long(std::ostream& os, const std::string& experiment, const std::vector<IterationRow>& rows);
void write_long(std::ostream& os, const std::string& experiment, const std::vector<OracleRow>& rows);

std::string format_number(double v);

}  // namespace oem

#endif  // OEM_REPORT_HPP
