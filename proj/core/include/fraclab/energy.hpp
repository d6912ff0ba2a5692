#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "fraclab/constants.hpp"
#include "fraclab/function_rep.hpp"

namespace fraclab {

// Centered coefficients u_hat_k, k = -N/2 .. N/2-1, at xi_k = pi k / L.
struct SpectralTransform {
  UniformGrid grid;
  std::vector<std::complex<double>> coefficients;

  int k_of(std::size_t idx) const { return static_cast<int>(idx) - grid.N() / 2; }
  double xi(std::size_t idx) const { return k_of(idx) * grid.dxi(); }
  std::complex<double> at(int k) const { return coefficients[k + grid.N() / 2]; }
};

SpectralTransform dft(const GridFunction& u);
GridFunction idft(const SpectralTransform& t);

enum class EnergyMethod { spectral, disjoint_kernel, closed_form };
std::string to_string(EnergyMethod m);

struct EnergyReport {
  double value = 0.0;
  EnergyMethod method = EnergyMethod::spectral;
  int resolution = 0;        // grid points, or final quadrature nodes per dimension
  double half_length = 0.0;  // spectral only
  int refinements = 0;       // quadrature doublings
  double error_estimate = 0.0;
};

EnergyReport energy_spectral(const GridFunction& u, const GridFunction& v, const FracOrder& s);

// Compactly supported function as a list of smooth pieces.
struct SupportedFunction {
  struct Piece {
    Interval support;
    std::function<double(double)> f;
  };
  std::vector<Piece> pieces;

  double operator()(double x) const;
  bool empty() const { return pieces.empty(); }
  Interval hull() const;
  SupportedFunction scaled(double a) const;
  SupportedFunction reflected(double c) const;  // x -> f(2c - x)
  SupportedFunction shifted(double d) const;    // x -> f(x - d)
  SupportedFunction& operator+=(const SupportedFunction& o);
};

SupportedFunction supported(const PiecewiseLinear& u);
SupportedFunction supported(const SupportedCallable& u);
SupportedFunction supported(const WeightedJacobiBasisFn& u);
// Cubic-spline interpolant of the nonzero runs of a grid function.
SupportedFunction supported(const GridFunction& u);

struct DisjointQuadrature {
  int initial_nodes = 64;
  int max_doublings = 6;
  double rel_tol = 1e-9;
};

// (-1)^(floor+1) c_{1,s} \iint u(x) v(y) |x-y|^{-1-2s}
EnergyReport energy_disjoint(const SupportedFunction& u, const SupportedFunction& v,
                             const FracOrder& s, const DisjointQuadrature& quad = {});
EnergyReport energy_disjoint(const PiecewiseLinear& u, const PiecewiseLinear& v, const FracOrder& s,
                             const DisjointQuadrature& quad = {});
EnergyReport energy_disjoint(const GridFunction& u, const GridFunction& v, const FracOrder& s,
                             const DisjointQuadrature& quad = {});

// \iint u(x) v(y) |x - y|^{-p} over separated (or touching) supports.
double kernel_integral(const SupportedFunction& u, const SupportedFunction& v, double p,
                       const DisjointQuadrature& quad = {}, int* refinements = nullptr,
                       int* nodes = nullptr);

// E_sigma(1_(a,b), 1_(c,d)), b <= c.
double indicator_interaction(double a, double b, double c, double d, double sigma);
// E_sigma(1_(a,b), 1_(a,b)), sigma in (0, 1/2).
double indicator_self_energy(double length, double sigma);

// Exact E_s(u, v) for s in (1, 3/2) via E_{s-1}(u', v').
double pwl_energy_exact(const PiecewiseLinear& u, const PiecewiseLinear& v, double s);

double f_of_r(double r, double s);
double polya_szego_gap(double M, double s);

struct ScaledExampleFactors {
  double lower_bound;       // 1 + a^{2s-n}
  double rearranged;        // a^{2s-n} / (1 + a^n)^{(2s-n)/n}
};
ScaledExampleFactors scaled_example_gap(double a, double s, int n);

// d^2/d delta^2 of E_s(phi_p - phi_m(. - delta)) at delta = 0.
double shift_second_derivative(const SupportedFunction& phi_p, const SupportedFunction& phi_m,
                               const FracOrder& s);
double shift_second_derivative(const GridFunction& phi_p, const GridFunction& phi_m,
                               const FracOrder& s);

// Moments int u x^k dx, k = 0, 1, 2.
struct Moments {
  double m0 = 0.0, m1 = 0.0, m2 = 0.0;
};

// Interaction of u with the 2L-periodic images of v, as seen by energy_spectral.
double periodic_image_energy(const Moments& u, const Moments& v, const FracOrder& s, double L);

// Trapezoid moments of grid data.
Moments grid_moments(const GridFunction& u);

// energy_spectral minus periodic_image_energy: the free-space energy of the grid data.
EnergyReport energy_spectral_free(const GridFunction& u, const GridFunction& v, const FracOrder& s);

}  // namespace fraclab
