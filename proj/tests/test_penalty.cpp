#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oem/penalty.hpp"
#include "oracles.hpp"
#include "scalar_check.hpp"

namespace {

using oem::PenaltyKind;
using oem::PenaltySpec;

TEST(Penalty, NamesRoundTrip) {
  for (PenaltyKind k : oem::kAllPenalties) EXPECT_EQ(oem::penalty_kind_from_string(oem::to_string(k)), k);
  EXPECT_EQ(oem::penalty_kind_from_string("ols"), PenaltyKind::none);
  EXPECT_EQ(oem::penalty_kind_from_string("enet"), PenaltyKind::elastic_net);
  EXPECT_THROW(oem::penalty_kind_from_string("ridge"), std::invalid_argument);
}

TEST(Penalty, FactoriesValidate) {
  EXPECT_THROW(PenaltySpec::lasso(-1.0), std::invalid_argument);
  EXPECT_THROW(PenaltySpec::lasso(NAN), std::invalid_argument);
  EXPECT_THROW(PenaltySpec::elastic_net(1.0, -0.1), std::invalid_argument);
  EXPECT_THROW(PenaltySpec::scad(1.0, 2.0), std::invalid_argument);
  EXPECT_THROW(PenaltySpec::mcp(1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(PenaltySpec::bridge(1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(PenaltySpec::bridge(1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(PenaltySpec::berhu(1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(PenaltySpec::garrote(1.0, Eigen::Vector2d(1.0, 0.0)), std::invalid_argument);
  EXPECT_THROW(PenaltySpec::garrote(1.0, Eigen::VectorXd()), std::invalid_argument);
  EXPECT_EQ(PenaltySpec::scad(1.0).a(), 3.7);
  EXPECT_EQ(PenaltySpec::mcp(1.0).a(), 2.5);
  EXPECT_EQ(PenaltySpec::lasso(2.0).with_lambda(0.5).lambda(), 0.5);
  EXPECT_THROW(PenaltySpec::lasso(2.0).with_lambda(-0.5), std::invalid_argument);
}

TEST(Penalty, Convexity) {
  EXPECT_TRUE(PenaltySpec::lasso(1).is_convex());
  EXPECT_TRUE(PenaltySpec::berhu(1, 1).is_convex());
  EXPECT_FALSE(PenaltySpec::scad(1).is_convex());
  EXPECT_FALSE(PenaltySpec::mcp(1).is_convex());
  EXPECT_FALSE(PenaltySpec::bridge(1, 0.5).is_convex());
  EXPECT_EQ(PenaltySpec::scad(1.5).describe(), "scad(lambda=1.5, a=3.7)");
}

TEST(Penalty, ClosedFormsOnHandPickedPoints) {
  EXPECT_DOUBLE_EQ(oem::solve_scalar(2.0, 3.0, 0, PenaltySpec::none()), 1.5);
  EXPECT_DOUBLE_EQ(oem::solve_scalar(2.0, 3.0, 0, PenaltySpec::lasso(1.0)), 1.0);
  EXPECT_DOUBLE_EQ(oem::solve_scalar(2.0, -0.5, 0, PenaltySpec::lasso(1.0)), 0.0);
  EXPECT_DOUBLE_EQ(oem::solve_scalar(2.0, -3.0, 0, PenaltySpec::elastic_net(1.0, 2.0)), -0.5);
  // SCAD a = 3.7, lambda = 1, d = 1: branches at 2 and 3.7
  EXPECT_DOUBLE_EQ(oem::solve_scalar(1.0, 1.5, 0, PenaltySpec::scad(1.0)), 0.5);
  EXPECT_NEAR(oem::solve_scalar(1.0, 3.0, 0, PenaltySpec::scad(1.0)), (2.7 * 3.0 - 3.7) / 1.7, 1e-15);
  EXPECT_DOUBLE_EQ(oem::solve_scalar(1.0, 5.0, 0, PenaltySpec::scad(1.0)), 5.0);
  EXPECT_DOUBLE_EQ(oem::solve_scalar(1.0, 2.0, 0, PenaltySpec::mcp(1.0, 2.0)), 2.0);
  EXPECT_DOUBLE_EQ(oem::solve_scalar(1.0, 1.5, 0, PenaltySpec::mcp(1.0, 2.0)), 1.0);
  const auto g = PenaltySpec::garrote(1.0, Eigen::Vector2d(2.0, -1.0));
  EXPECT_DOUBLE_EQ(oem::solve_scalar(1.0, 3.0, 0, g), 2.5);  // ((6 - 1) / 4) * 2
  EXPECT_DOUBLE_EQ(oem::solve_scalar(1.0, 3.0, 1, g), 0.0);  // would need the wrong sign
  EXPECT_DOUBLE_EQ(oem::solve_scalar(1.0, -3.0, 1, g), -2.0);
  EXPECT_DOUBLE_EQ(oem::solve_scalar(1.0, 1.5, 0, PenaltySpec::berhu(1.0, 1.0)), 0.5);
  EXPECT_DOUBLE_EQ(oem::solve_scalar(1.0, 4.0, 0, PenaltySpec::berhu(1.0, 1.0)), 2.0);
  EXPECT_DOUBLE_EQ(oem::solve_scalar(1.0, 0.0, 0, PenaltySpec::bridge(1.0, 0.5)), 0.0);
}

TEST(Penalty, SolveScalarDomainErrors) {
  EXPECT_THROW(oem::solve_scalar(0.0, 1.0, 0, PenaltySpec::lasso(1)), std::domain_error);
  EXPECT_THROW(oem::solve_scalar(-1.0, 1.0, 0, PenaltySpec::lasso(1)), std::domain_error);
  EXPECT_THROW(oem::solve_scalar(1.0, NAN, 0, PenaltySpec::lasso(1)), std::domain_error);
  EXPECT_THROW(oem::solve_scalar(0.5, 1.0, 0, PenaltySpec::scad(1)), std::domain_error);
  EXPECT_THROW(oem::solve_scalar(0.5, 1.0, 0, PenaltySpec::mcp(1)), std::domain_error);
  EXPECT_THROW(oem::solve_scalar(1.0, 1.0, 3, PenaltySpec::garrote(1, Eigen::Vector2d(1, 1))), std::out_of_range);
}

TEST(Penalty, ValuesMatchIndependentDefinitions) {
  std::mt19937_64 rng(31);
  for (PenaltyKind kind : oem::kAllPenalties) {
    for (int k = 0; k < 200; ++k) {
      const auto draw = oracle::random_scalar_problem(rng, kind);
      const double base = draw.spec.garrote_base() ? (*draw.spec.garrote_base())(0) : 1.0;
      double b = oracle::uniform(rng, -15.0, 15.0);
      if (kind == PenaltyKind::garrote && b * base < 0) b = -b;
      const double expected = oracle::reference_penalty(b, base, draw.spec);
      EXPECT_NEAR(oem::penalty_term(b, 0, draw.spec), expected, 1e-9 * std::max(1.0, std::abs(expected)))
          << draw.spec.describe() << " b=" << b;
    }
  }
}

TEST(Penalty, ScadAndMcpByQuadrature) {
  // fine-panel Simpson over the derivative without splitting at the kinks
  for (double b : {0.3, 1.0, 2.5, 3.7, 5.0, -4.2}) {
    const double t = std::abs(b);
    const double scad = 2.0 * oracle::simpson([](double s) { return oracle::scad_derivative(s, 1.0, 3.7); }, 0.0, t, 200000);
    EXPECT_NEAR(oem::penalty_term(b, 0, PenaltySpec::scad(1.0, 3.7)), scad, 1e-6);
    const double mcp = 2.0 * oracle::simpson([](double s) { return oracle::mcp_derivative(s, 1.0, 2.5); }, 0.0, t, 200000);
    EXPECT_NEAR(oem::penalty_term(b, 0, PenaltySpec::mcp(1.0, 2.5)), mcp, 1e-6);
  }
}

TEST(Penalty, GarroteInfeasibleSignThrows) {
  const auto g = PenaltySpec::garrote(1.0, Eigen::Vector2d(2.0, -1.0));
  EXPECT_THROW(oem::penalty_term(-1.0, 0, g), std::domain_error);
  EXPECT_NO_THROW(oem::penalty_term(0.0, 1, g));
  EXPECT_TRUE(oem::is_feasible(Eigen::Vector2d(1.0, -1.0), g));
  EXPECT_FALSE(oem::is_feasible(Eigen::Vector2d(1.0, 1.0), g));
  EXPECT_FALSE(oem::is_feasible(Eigen::Vector3d(1.0, -1.0, 0.0), g));
  EXPECT_FALSE(oem::is_feasible(Eigen::Vector2d(NAN, 0.0), PenaltySpec::lasso(1)));
  EXPECT_THROW(oem::penalty_value(Eigen::Vector3d::Zero(), g), std::invalid_argument);
  const auto sub = g.subset({1});
  EXPECT_EQ(sub.garrote_base()->size(), 1);
  EXPECT_EQ((*sub.garrote_base())(0), -1.0);
}

TEST(Penalty, OddSymmetryIsExact) {
  std::mt19937_64 rng(32);
  for (PenaltyKind kind : oem::kAllPenalties) {
    if (kind == PenaltyKind::garrote) continue;
    for (int k = 0; k < 300; ++k) {
      const auto draw = oracle::random_scalar_problem(rng, kind);
      const double pos = oem::solve_scalar(draw.d, draw.u, 0, draw.spec);
      const double neg = oem::solve_scalar(draw.d, -draw.u, 0, draw.spec);
      EXPECT_EQ(neg, -pos) << draw.spec.describe();
    }
  }
}

TEST(Penalty, MatchesBruteForceMinimizer) {
  std::mt19937_64 rng(33);
  for (PenaltyKind kind : oem::kAllPenalties) {
    oracle::ScalarCheckOutcome out;
    for (int k = 0; k < 150; ++k) oracle::check_scalar_draw(oracle::random_scalar_problem(rng, kind), out);
    EXPECT_EQ(out.failures, 0) << oem::to_string(kind) << ": " << out.first_failure;
  }
}

TEST(Penalty, BranchBoundariesAreContinuous) {
  std::mt19937_64 rng(34);
  for (PenaltyKind kind : oem::kAllPenalties) {
    for (int k = 0; k < 200; ++k) {
      const auto draw = oracle::random_scalar_problem(rng, kind);
      EXPECT_TRUE(oracle::continuity_ok(draw)) << draw.spec.describe() << " d=" << draw.d;
    }
  }
}

TEST(Penalty, ThresholdIsMonotoneInU) {
  std::mt19937_64 rng(35);
  for (PenaltyKind kind : oem::kAllPenalties) {
    for (int k = 0; k < 50; ++k) {
      const auto draw = oracle::random_scalar_problem(rng, kind);
      double prev = -INFINITY;
      for (double u = -40.0; u <= 40.0; u += 0.05) {
        const double b = oem::solve_scalar(draw.d, u, 0, draw.spec);
        EXPECT_GE(b, prev - 1e-12) << draw.spec.describe();
        prev = b;
      }
    }
  }
}

TEST(Penalty, ZeroLambdaIsLeastSquares) {
  for (PenaltyKind kind : oem::kAllPenalties) {
    PenaltySpec s;
    switch (kind) {
      case PenaltyKind::lasso: s = PenaltySpec::lasso(0); break;
      case PenaltyKind::scad: s = PenaltySpec::scad(0); break;
      case PenaltyKind::mcp: s = PenaltySpec::mcp(0); break;
      case PenaltyKind::berhu: s = PenaltySpec::berhu(0, 1); break;
      case PenaltyKind::bridge: s = PenaltySpec::bridge(0, 0.5); break;
      default: continue;
    }
    EXPECT_NEAR(oem::solve_scalar(2.0, 3.0, 0, s), 1.5, 1e-15) << oem::to_string(kind);
  }
}

}  // namespace
