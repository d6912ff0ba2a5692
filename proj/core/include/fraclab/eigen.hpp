#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fraclab/constants.hpp"
#include "fraclab/energy.hpp"
#include "fraclab/function_rep.hpp"

namespace fraclab {

struct AssemblyOptions {
  // Subtract the interaction with periodic images implied by the FFT.
  bool image_correction = true;
};

// Galerkin discretization over J weighted-Jacobi functions per interval.
// Basis index k*J + j is degree j on interval k, scaled to unit Jacobi norm.
class GalerkinSystem {
 public:
  IntervalUnion domain;
  FracOrder order;
  int J;
  UniformGrid grid;
  std::vector<WeightedJacobiBasisFn> basis;
  std::vector<double> scale;  // basis[i] is multiplied by scale[i]
  std::vector<Moments> moments;
  Eigen::MatrixXd S;
  Eigen::MatrixXd M;

  int size() const { return static_cast<int>(basis.size()); }
  int interval_of(int i) const { return i / J; }
  // Expansion value sum_i c_i scale_i phi_i(x).
  double eval(const Eigen::VectorXd& c, double x) const;
  // Keep only the coefficients of interval k.
  Eigen::VectorXd restrict_to(const Eigen::VectorXd& c, std::size_t k) const;
  SupportedFunction as_supported(const Eigen::VectorXd& c) const;
  // Collocation nodes a + (b-a)(i+1/2)/n on every interval.
  std::vector<double> collocation(int per_interval) const;
  // Row i of the result holds the basis values at node i.
  Eigen::MatrixXd basis_matrix(const std::vector<double>& nodes) const;
  double energy(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const { return a.dot(S * b); }
  double l2(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const { return a.dot(M * b); }
};

GalerkinSystem assemble(const IntervalUnion& omega, const FracOrder& s, int J, const UniformGrid& grid,
                        const AssemblyOptions& opt = {});

enum class IntervalSign { plus, minus, zero, mixed };
std::string to_string(IntervalSign s);
std::string to_string(const std::vector<IntervalSign>& pattern);

struct EigenResult {
  double lambda_min = 0.0;
  double lambda2 = 0.0;
  double gap = 0.0;
  Eigen::VectorXd coefficients;
  std::vector<double> x;
  std::vector<double> phi;
  std::vector<IntervalSign> signs;
  // Unextrapolated values when produced by solve_eigen.
  double lambda_coarse = 0.0;
  double lambda_fine = 0.0;
};

EigenResult first_eigenpair(const GalerkinSystem& sys);

std::vector<IntervalSign> sign_pattern(const EigenResult& res, const IntervalUnion& omega,
                                       double tol = 1e-6);

struct EigenOptions {
  int J = 16;
  double L = 0.0;         // 0 picks default_half_length of the domain
  int N = 0;              // 0 picks the smallest power of two with h <= h_max (at least 2^16)
  double h_max = 1.0 / 2048.0;
  bool richardson = true;  // combine (N, 2N) as 2 lambda(2N) - lambda(N)
  AssemblyOptions assembly;
};

UniformGrid default_grid(const IntervalUnion& omega, const EigenOptions& opt = {});

// First eigenpair with Richardson-extrapolated lambda and gap; eigenfunction from the finer grid.
EigenResult solve_eigen(const IntervalUnion& omega, const FracOrder& s, const EigenOptions& opt = {});
double lambda_of(const IntervalUnion& omega, const FracOrder& s, const EigenOptions& opt = {});

struct DirichletSolution {
  Eigen::VectorXd coefficients;
  std::vector<double> x;
  std::vector<double> u;

  GridFunction on(const GalerkinSystem& sys, const UniformGrid& grid) const;
};

DirichletSolution solve_dirichlet(const GalerkinSystem& sys, const std::function<double(double)>& f);
// f interpolated linearly between grid nodes.
DirichletSolution solve_dirichlet(const GalerkinSystem& sys, const GridFunction& f);

}  // namespace fraclab
