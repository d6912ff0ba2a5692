#include "fraclab/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "fraclab/constants.hpp"
#include "fraclab/errors.hpp"

namespace fraclab {

const QuadratureRule& gauss_legendre(int n) {
  if (n < 1) throw DomainError("gauss_legendre: n must be positive");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<QuadratureRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (slot) return *slot;

  auto rule = std::make_unique<QuadratureRule>();
  rule->nodes.resize(n);
  rule->weights.resize(n);
  auto legendre = [n](double x, double& dp) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    return p1;
  };
  for (int i = 0; i < n / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      const double dx = legendre(x, dp) / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    legendre(x, dp);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule->nodes[i] = -x;
    rule->nodes[n - 1 - i] = x;
    rule->weights[i] = w;
    rule->weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) {
    double dp = 1.0;
    legendre(0.0, dp);
    rule->nodes[n / 2] = 0.0;
    rule->weights[n / 2] = n == 1 ? 2.0 : 2.0 / (dp * dp);
  }
  slot = std::move(rule);
  return *slot;
}

QuadratureRule gauss_jacobi(int n, double alpha, double beta) {
  if (n < 1) throw DomainError("gauss_jacobi: n must be positive");
  if (!(alpha > -1.0) || !(beta > -1.0)) throw DomainError("gauss_jacobi: alpha, beta must exceed -1");
  // Golub-Welsch on the Jacobi matrix of the monic recurrence.
  Eigen::VectorXd diag(n), sub(n > 1 ? n - 1 : 0);
  const double ab = alpha + beta;
  for (int k = 0; k < n; ++k) {
    const double d = 2.0 * k + ab;
    if (k == 0) {
      diag[k] = (beta - alpha) / (ab + 2.0);
    } else {
      diag[k] = (beta * beta - alpha * alpha) / (d * (d + 2.0));
    }
    if (k + 1 < n) {
      const double k1 = k + 1.0;
      const double d1 = 2.0 * k1 + ab;
      const double num = 4.0 * k1 * (k1 + alpha) * (k1 + beta) * (k1 + ab);
      const double den = d1 * d1 * (d1 + 1.0) * (d1 - 1.0);
      sub[k] = std::sqrt(num / den);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) throw NumericError("gauss_jacobi: eigensolver failed");
  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + lgamma_pos(alpha + 1.0) +
                              lgamma_pos(beta + 1.0) - lgamma_pos(ab + 2.0));
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = es.eigenvalues()[i];
    const double v0 = es.eigenvectors()(0, i);
    rule.weights[i] = mu0 * v0 * v0;
  }
  return rule;
}

QuadratureRule mapped(const QuadratureRule& rule, double a, double b) {
  QuadratureRule out;
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  out.nodes.reserve(rule.nodes.size());
  out.weights.reserve(rule.nodes.size());
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    out.nodes.push_back(mid + half * rule.nodes[i]);
    out.weights.push_back(half * rule.weights[i]);
  }
  return out;
}

}  // namespace fraclab
