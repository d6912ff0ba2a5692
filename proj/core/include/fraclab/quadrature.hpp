#pragma once

#include <vector>

namespace fraclab {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre rule on [-1, 1]; cached per n.
const QuadratureRule& gauss_legendre(int n);

// Gauss-Jacobi rule on [-1, 1] for the weight (1-t)^alpha (1+t)^beta.
QuadratureRule gauss_jacobi(int n, double alpha, double beta);

// Map a rule from [-1, 1] onto [a, b].
QuadratureRule mapped(const QuadratureRule& rule, double a, double b);

}  // namespace fraclab
