// Randomized comparison of solve_scalar against the brute-force minimizer.
// Shared by the penalty unit tests and the acceptance binary.
#ifndef OEM_TESTS_SCALAR_CHECK_HPP
#define OEM_TESTS_SCALAR_CHECK_HPP

#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include "oem/penalty.hpp"
#include "oracles.hpp"

namespace oracle {

// P_j(b) from the penalty definitions; independent of oem::penalty_term.
inline double reference_penalty(double b, double base_j, const oem::PenaltySpec& s) {
  const double lambda = s.lambda(), t = std::abs(b);
  switch (s.kind()) {
    case oem::PenaltyKind::none: return 0.0;
    case oem::PenaltyKind::lasso: return 2.0 * lambda * t;
    case oem::PenaltyKind::elastic_net: return 2.0 * lambda * t + s.lambda2() * t * t;
    case oem::PenaltyKind::scad: return scad_value(b, lambda, s.a());
    case oem::PenaltyKind::mcp: return mcp_value(b, lambda, s.a());
    case oem::PenaltyKind::garrote: return 2.0 * lambda * b / base_j;
    case oem::PenaltyKind::berhu: {
      // integral of the derivative: lambda below delta, lambda * s / delta above
      const double d = s.delta();
      return 2.0 * (t < d ? lambda * t : lambda * d + lambda * (t * t - d * d) / (2.0 * d));
    }
    case oem::PenaltyKind::bridge: return lambda * std::pow(t, s.a());
  }
  return NAN;
}

struct ScalarDraw {
  double d;
  double u;
  oem::PenaltySpec spec;
};

inline ScalarDraw random_scalar_problem(std::mt19937_64& rng, oem::PenaltyKind kind) {
  const bool needs_unit_d = kind == oem::PenaltyKind::scad || kind == oem::PenaltyKind::mcp;
  const double d = needs_unit_d ? uniform(rng, 1.0, 10.0) : std::exp(uniform(rng, std::log(0.1), std::log(10.0)));
  const double lambda = uniform(rng, 0.0, 5.0);
  oem::PenaltySpec spec;
  switch (kind) {
    case oem::PenaltyKind::none: break;
    case oem::PenaltyKind::lasso: spec = oem::PenaltySpec::lasso(lambda); break;
    case oem::PenaltyKind::elastic_net: spec = oem::PenaltySpec::elastic_net(lambda, uniform(rng, 0.0, 3.0)); break;
    case oem::PenaltyKind::scad: spec = oem::PenaltySpec::scad(lambda, uniform(rng, 2.05, 6.0)); break;
    case oem::PenaltyKind::mcp: spec = oem::PenaltySpec::mcp(lambda, uniform(rng, 1.05, 5.0)); break;
    case oem::PenaltyKind::garrote: {
      double b = uniform(rng, 0.1, 5.0) * (uniform(rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0);
      spec = oem::PenaltySpec::garrote(lambda, Eigen::VectorXd::Constant(1, b));
      break;
    }
    case oem::PenaltyKind::berhu: spec = oem::PenaltySpec::berhu(lambda, uniform(rng, 0.1, 3.0)); break;
    case oem::PenaltyKind::bridge: spec = oem::PenaltySpec::bridge(lambda, uniform(rng, 0.1, 0.9)); break;
  }
  // u spans every branch: a mix of a broad draw and draws near the thresholds
  double u = uniform(rng, -30.0, 30.0);
  const double pick = uniform(rng, 0.0, 1.0);
  const double sign = u < 0 ? -1.0 : 1.0;
  if (pick < 0.15) u = sign * lambda * uniform(rng, 0.9, 1.1);
  else if (pick < 0.3 && kind == oem::PenaltyKind::scad) u = sign * (d + 1.0) * lambda * uniform(rng, 0.97, 1.03);
  else if (pick < 0.3 && kind == oem::PenaltyKind::berhu) u = sign * (lambda + d * spec.delta()) * uniform(rng, 0.97, 1.03);
  else if (pick < 0.45 && (kind == oem::PenaltyKind::scad || kind == oem::PenaltyKind::mcp))
    u = sign * spec.a() * lambda * d * uniform(rng, 0.97, 1.03);
  return {d, u, spec};
}

struct ScalarCheckOutcome {
  int draws = 0;
  int failures = 0;
  int ties = 0;  // non-unique minimizer, impl value matched the brute-force minimum
  double max_error = 0.0;
  std::string first_failure;
};

// Compares one draw; returns the argmin error (0 for an accepted tie).
inline void check_scalar_draw(const ScalarDraw& draw, ScalarCheckOutcome& out, double tol = 1e-5) {
  const auto& s = draw.spec;
  const double base = s.garrote_base() ? (*s.garrote_base())(0) : 1.0;
  auto f = [&](double b) { return draw.d * b * b - 2.0 * draw.u * b + reference_penalty(b, base, s); };
  const double reach = std::abs(draw.u) / draw.d * 1.05 + 1.0;
  double lo = -reach, hi = reach;
  if (s.kind() == oem::PenaltyKind::garrote) (base > 0 ? lo : hi) = 0.0;
  const Minimum brute = grid_refine_min(f, lo, hi);
  const double got = oem::solve_scalar(draw.d, draw.u, 0, s);
  const double err = std::abs(got - brute.argmin);
  ++out.draws;
  if (err <= tol * std::max(1.0, std::abs(brute.argmin))) {
    out.max_error = std::max(out.max_error, err);
    return;
  }
  // two separated global minimizers (possible for nonconvex penalties): the
  // returned point must then attain the minimum value
  const double scale = std::max({1.0, std::abs(brute.value), draw.d * reach * reach});
  if (!s.is_convex() && f(got) <= brute.value + 1e-12 * scale) {
    ++out.ties;
    return;
  }
  ++out.failures;
  out.max_error = std::max(out.max_error, err);
  if (out.first_failure.empty()) {
    std::ostringstream os;
    os.precision(17);
    os << s.describe() << " d=" << draw.d << " u=" << draw.u << " got=" << got << " brute=" << brute.argmin;
    out.first_failure = os.str();
  }
}

// solve_scalar must not jump across its branch boundaries (bridge excepted,
// whose thresholding is genuinely discontinuous).
inline bool continuity_ok(const ScalarDraw& draw) {
  const auto& s = draw.spec;
  const double lambda = s.lambda(), d = draw.d;
  std::vector<double> knots{lambda};
  switch (s.kind()) {
    case oem::PenaltyKind::scad: knots = {lambda, (d + 1.0) * lambda, s.a() * lambda * d}; break;
    case oem::PenaltyKind::mcp: knots = {lambda, s.a() * lambda * d}; break;
    case oem::PenaltyKind::berhu: knots = {lambda, lambda + d * s.delta()}; break;
    case oem::PenaltyKind::garrote: {
      const double b = (*s.garrote_base())(0);
      knots = {lambda / b};
      break;
    }
    case oem::PenaltyKind::bridge: return true;
    default: break;
  }
  const double eps = 1e-9;
  for (double k : knots) {
    for (double sign : {1.0, -1.0}) {
      const double at = sign * k;
      const double left = oem::solve_scalar(d, at - eps * std::max(1.0, std::abs(at)), 0, s);
      const double right = oem::solve_scalar(d, at + eps * std::max(1.0, std::abs(at)), 0, s);
      if (std::abs(left - right) > 1e-6 * std::max(1.0, std::abs(at))) return false;
    }
  }
  return true;
}

}  // namespace oracle

#endif  // OEM_TESTS_SCALAR_CHECK_HPP
