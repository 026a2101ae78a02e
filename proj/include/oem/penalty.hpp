// Penalties and their one-dimensional solvers.
//
// Each penalty contributes P_j(beta_j) to the objective |Y - X beta|^2 + P(beta),
// and the OEM M-step reduces to p independent problems
//
//     min_b  d b^2 - 2 u b + P_j(b).
//
// Contributions per coordinate:
//   lasso        2 lambda |b|
//   elastic_net  2 lambda |b| + lambda2 b^2
//   scad, mcp    2 P_lambda(|b|)
//   garrote      2 lambda b / b_ols, restricted to b * b_ols >= 0
//   berhu        2 lambda {|b| if |b| < delta, (b^2 + delta^2) / (2 delta) otherwise}
//   bridge       lambda |b|^a, 0 < a < 1
#ifndef OEM_PENALTY_HPP
#define OEM_PENALTY_HPP

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace oem {

enum class PenaltyKind { none, lasso, elastic_net, scad, mcp, garrote, berhu, bridge };

inline constexpr std::array<PenaltyKind, 8> kAllPenalties = {
    PenaltyKind::none, PenaltyKind::lasso,   PenaltyKind::elastic_net, PenaltyKind::scad,
    PenaltyKind::mcp,  PenaltyKind::garrote, PenaltyKind::berhu,       PenaltyKind::bridge};

std::string_view to_string(PenaltyKind kind);
PenaltyKind penalty_kind_from_string(std::string_view name);

/// Validated penalty descriptor. Construct through the named factories.
class PenaltySpec {
 public:
  PenaltySpec() = default;  // kind none

  static PenaltySpec none();
  static PenaltySpec lasso(double lambda);
  static PenaltySpec elastic_net(double lambda1, double lambda2);
  static PenaltySpec scad(double lambda, double a = 3.7);
  static PenaltySpec mcp(double lambda, double a = 2.5);
  static PenaltySpec garrote(double lambda, Eigen::VectorXd base);
  static PenaltySpec berhu(double lambda, double delta);
  static PenaltySpec bridge(double lambda, double a);

  PenaltyKind kind() const { return kind_; }
  double lambda() const { return lambda_; }
  double lambda2() const { return lambda2_; }
  double a() const { return a_; }
  double delta() const { return delta_; }
  const std::optional<Eigen::VectorXd>& garrote_base() const { return garrote_base_; }

  /// Same penalty with a different lambda (lambda1 for elastic-net).
  PenaltySpec with_lambda(double lambda) const;
  /// Restriction to the given coordinates; only garrote carries per-coordinate data.
  PenaltySpec subset(const std::vector<Eigen::Index>& coords) const;

  bool is_convex() const;
  std::string describe() const;

 private:
  PenaltyKind kind_ = PenaltyKind::none;
  double lambda_ = 0.0;
  double lambda2_ = 0.0;
  double a_ = 0.0;
  double delta_ = 0.0;
  std::optional<Eigen::VectorXd> garrote_base_;
};

/// argmin_b d b^2 - 2 u b + P_j(b). For kind none returns u / d.
///
/// SCAD and MCP use closed forms that require d >= 1; smaller d throws.
double solve_scalar(double d, double u, Eigen::Index j, const PenaltySpec& spec);

/// P_j(b) for a single coordinate. Garrote outside its feasible set throws.
double penalty_term(double beta, Eigen::Index j, const PenaltySpec& spec);

/// d b^2 - 2 u b + P_j(b).
double scalar_objective(double d, double u, double beta, Eigen::Index j, const PenaltySpec& spec);

/// Sum of P_j(beta_j).
double penalty_value(const Eigen::VectorXd& beta, const PenaltySpec& spec);

/// True when every coordinate lies in the penalty's parameter space.
bool is_feasible(const Eigen::VectorXd& beta, const PenaltySpec& spec);

}  // namespace oem

#endif  // OEM_PENALTY_HPP
