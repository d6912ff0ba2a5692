#pragma once

#include <Eigen/Dense>
#include <limits>
#include <vector>

namespace testing_support {

// Exhaustive active-set search: the minimizer of a strictly convex QP is the
// feasible equality-constrained stationary point with the smallest objective.
inline Eigen::VectorXd brute_force_qp(const Eigen::MatrixXd& S, const Eigen::VectorXd& w, const Eigen::MatrixXd& B) {
  const int n = static_cast<int>(S.rows()), m = static_cast<int>(B.rows());
  const Eigen::VectorXd g = S * w;
  auto objective = [&](const Eigen::VectorXd& v) { return 0.5 * v.dot(S * v) - g.dot(v); };
  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_v;
  std::vector<int> subset;
  auto visit = [&]() {
    const int k = static_cast<int>(subset.size());
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n + k, n + k);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + k);
    K.topLeftCorner(n, n) = S;
    rhs.head(n) = g;
    for (int i = 0; i < k; ++i) {
      K.block(n + i, 0, 1, n) = B.row(subset[i]);
      K.block(0, n + i, n, 1) = B.row(subset[i]).transpose();
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(K);
    if (lu.rank() < n + k) return;
    const Eigen::VectorXd v = lu.solve(rhs).head(n);
    if ((B * v).minCoeff() < -1e-10 * std::max(1.0, v.norm())) return;
    const double f = objective(v);
    if (f < best) { best = f; best_v = v; }
  };
  auto rec = [&](auto&& self, int start) -> void {
    visit();
    if (static_cast<int>(subset.size()) == n) return;
    for (int i = start; i < m; ++i) {
      subset.push_back(i);
      self(self, i + 1);
      subset.pop_back();
    }
  };
  rec(rec, 0);
  return best_v;
}

}  // namespace testing_support
