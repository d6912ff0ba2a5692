#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "fraclab/cone_projection.hpp"
#include "fraclab/errors.hpp"
#include "support/brute_force_qp.hpp"

using namespace fraclab;

namespace {

Eigen::VectorXd random_vector(Rng& rng, int n) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.normal();
  return v;
}

GalerkinSystem small_system(double s, const char* domain = "-1,1") {
  const IntervalUnion om = parse_domain(domain);
  return assemble(om, FracOrder(s), 4, default_grid(om));
}

}  // namespace

TEST(ProjectCone, MatchesBruteForceRandom) {
  Rng rng(21);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 4, m = 12;
    Eigen::MatrixXd A(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) A(i, j) = rng.normal();
    const Eigen::MatrixXd S = A * A.transpose() + 0.5 * Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd B(m, n);
    for (int i = 0; i < m; ++i) B.row(i) = random_vector(rng, n).transpose();
    // Keep the cone pointed but nontrivial: every row sees a common direction.
    const Eigen::VectorXd d = random_vector(rng, n);
    for (int i = 0; i < m; ++i) {
      if (B.row(i).dot(d) < 0.0) B.row(i) *= -1.0;
    }
    const Eigen::VectorXd w = random_vector(rng, n);
    const ConeProjectionProblem P = project_cone(S, w, B);
    const Eigen::VectorXd ref = testing_support::brute_force_qp(S, w, B);
    EXPECT_LT((P.v - ref).norm(), 1e-9 * std::max(1.0, ref.norm())) << trial;
    EXPECT_GE(P.min_constraint, -1e-10);
    EXPECT_LT(P.kkt_residual, 1e-9);
  }
}

TEST(ProjectCone, MatchesBruteForceOnGalerkinCone) {
  Rng rng(4);
  ConeOptions opt;
  opt.nodes_per_interval = 12;
  for (double s : {0.5, 1.5, 2.5}) {
    const GalerkinSystem sys = small_system(s);
    const Eigen::MatrixXd B = cone_constraints(sys, opt);
    ASSERT_EQ(B.rows(), 12);
    for (int trial = 0; trial < 6; ++trial) {
      const Eigen::VectorXd w = random_vector(rng, sys.size());
      const ConeProjectionProblem P = project_positive(sys, w, opt);
      const Eigen::VectorXd ref = testing_support::brute_force_qp(sys.S, w, B);
      const double scale = std::sqrt(sys.energy(w, w));
      const Eigen::VectorXd d = P.v - ref;
      EXPECT_LT(std::sqrt(std::max(0.0, sys.energy(d, d))), 1e-8 * scale) << s << " " << trial;
    }
  }
}

TEST(ProjectCone, FixesConeElements) {
  const GalerkinSystem sys = small_system(1.25);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(sys.size());
  w[0] = 1.0;  // (1 - x^2)^s P_0 is positive
  const ConeProjectionProblem P = project_positive(sys, w);
  EXPECT_LT((P.v - w).norm(), 1e-12);
  EXPECT_TRUE(P.active.empty());
  const ConeProjectionProblem N = project_negative(sys, w);
  EXPECT_LT(N.v.norm(), 1e-12);
}

TEST(ProjectCone, NegativeIsMirror) {
  Rng rng(8);
  const GalerkinSystem sys = small_system(0.5);
  const Eigen::VectorXd w = random_vector(rng, sys.size());
  const Eigen::VectorXd a = project_negative(sys, w).v;
  const Eigen::VectorXd b = -project_positive(sys, -w).v;
  EXPECT_LT((a - b).norm(), 1e-14);
  EXPECT_THROW(project_positive(sys, Eigen::VectorXd::Zero(3)), DomainError);
}

TEST(AppendixSuite, AllInequalitiesHold) {
  Rng rng(42);
  for (double s : {0.5, 1.5, 2.5}) {
    const IntervalUnion om = parse_domain("-3,-1; 1,3");
    const GalerkinSystem sys = assemble(om, FracOrder(s), 6, default_grid(om));
    const Eigen::VectorXd w = random_vector(rng, sys.size());
    const auto trials = random_cone_elements(sys, rng, 8);
    const AppendixReport rep = appendix_suite(sys, w, trials);
    EXPECT_TRUE(rep.passed()) << s;
    EXPECT_LT(rep.idempotence_error, 1e-8);
    EXPECT_LT(rep.kkt_residual, 1e-8);
    ASSERT_EQ(rep.checks.size(), 7u);
    for (const auto& c : rep.checks) EXPECT_GE(c.worst_margin, -c.slack) << c.name;
  }
}

TEST(ProjectionComparison, EnergyDoesNotIncrease) {
  const IntervalUnion om = parse_domain("-3,-1; 1,3");
  for (double s : {0.5, 1.5}) {
    const GalerkinSystem sys = assemble(om, FracOrder(s), 8, default_grid(om));
    const EigenResult r = first_eigenpair(sys);
    const ProjectionComparison c = projection_comparison(sys, r.coefficients);
    ASSERT_EQ(c.cone_signs.size(), 2u);
    EXPECT_EQ(c.cone_signs[1], FracOrder(s).even_floor() ? 1 : -1);
    EXPECT_LE(c.energy_tilde, c.energy_phi * (1.0 + 1e-8));
    EXPECT_NEAR(c.l2_phi, 1.0, 1e-10);
  }
}
