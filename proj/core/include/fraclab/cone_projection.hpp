#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "fraclab/eigen.hpp"
#include "fraclab/rng.hpp"

namespace fraclab {

struct ConeOptions {
  int nodes_per_interval = 128;
  // Restrict to the subspace of one interval; -1 keeps the whole domain.
  int interval = -1;
  int max_iterations = 500;
};

// Projection of w onto {v : Bv >= 0} in the metric (a, b) -> a^T S b.
struct ConeProjectionProblem {
  Eigen::VectorXd w;
  Eigen::VectorXd v;
  Eigen::MatrixXd B;              // constraint rows, in the full coefficient space
  std::vector<int> active;        // rows of B held at zero
  Eigen::VectorXd multipliers;    // one per row of B, zero off the active set
  int iterations = 0;
  double kkt_residual = 0.0;      // stationarity, relative to |S w|
  double slackness_residual = 0.0;
  double min_constraint = 0.0;    // min (Bv)_i
};

Eigen::MatrixXd cone_constraints(const GalerkinSystem& sys, const ConeOptions& opt = {});

// Dense strictly convex QP: min 1/2 v^T S v - (S w)^T v  s.t.  B v >= 0.
ConeProjectionProblem project_cone(const Eigen::MatrixXd& S, const Eigen::VectorXd& w,
                                   const Eigen::MatrixXd& B, int max_iterations = 500);

ConeProjectionProblem project_positive(const GalerkinSystem& sys, const Eigen::VectorXd& w,
                                       const ConeOptions& opt = {});
// pi^- w = -pi^+(-w).
ConeProjectionProblem project_negative(const GalerkinSystem& sys, const Eigen::VectorXd& w,
                                       const ConeOptions& opt = {});

struct InequalityCheck {
  std::string name;
  std::string relation;
  double worst_margin = 0.0;  // >= -slack means satisfied
  double slack = 0.0;
  int violations = 0;
  bool passed() const { return violations == 0; }
};

struct AppendixReport {
  std::vector<InequalityCheck> checks;
  double idempotence_error = 0.0;
  double kkt_residual = 0.0;
  bool passed() const;
};

// Random elements of the discrete cone: projected random vectors and nonnegative combinations.
std::vector<Eigen::VectorXd> random_cone_elements(const GalerkinSystem& sys, Rng& rng, int count,
                                                  const ConeOptions& opt = {});

AppendixReport appendix_suite(const GalerkinSystem& sys, const Eigen::VectorXd& w,
                              const std::vector<Eigen::VectorXd>& trials, const ConeOptions& opt = {});

struct ProjectionComparison {
  double l2_phi = 0.0;
  double l2_tilde = 0.0;
  double energy_phi = 0.0;
  double energy_tilde = 0.0;
  std::vector<int> cone_signs;
  Eigen::VectorXd tilde;
};

// tilde = sum_k (2 pi_k^{sign_k} phi_k - phi_k); signs default to [+, -, +, ...] for odd floor, all + otherwise.
ProjectionComparison projection_comparison(const GalerkinSystem& sys, const Eigen::VectorXd& phi,
                                           std::vector<int> signs = {}, const ConeOptions& opt = {});

}  // namespace fraclab
