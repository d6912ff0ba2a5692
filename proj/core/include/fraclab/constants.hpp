#pragma once

#include <cstdint>

namespace fraclab {

// Order s of (-Delta)^s together with the strict-floor data used throughout.
struct FracOrder {
  double s = 0.0;
  int floor_paper = 0;   // max{m in Z : m < s}
  double sigma = 0.0;    // s - floor_paper, equal to 1 at integers
  bool integer = false;
  int boundary_sign = -1;  // (-1)^(floor_paper + 1)

  FracOrder() = default;
  explicit FracOrder(double s_value);

  bool even_floor() const { return floor_paper % 2 == 0; }
  // (-1)^floor_paper
  int parity_sign() const { return even_floor() ? 1 : -1; }
  // Order of the finite difference in the hypersingular representation.
  // At integer s the logarithmic constant pairs with a stencil of order s + 1.
  int stencil_order() const { return integer ? floor_paper + 2 : floor_paper + 1; }
};

int floor_paper(double s);

// Double-precision Gamma via Lanczos (g = 7, 9 terms) with reflection.
double gamma_fn(double z);
// log|Gamma(z)| for z > 0.
double lgamma_pos(double z);
double binomial(int n, int k);

double unit_ball_volume(int n);
double kappa(int n, const FracOrder& s);
double c_disjoint(int n, const FracOrder& s);
double boggio_k(int n, const FracOrder& s);
double poisson_gamma(int n, const FracOrder& s);
double torsion_const(int n, const FracOrder& s);
double reflection_lhs(int n, const FracOrder& s);

inline double kappa(int n, double s) { return kappa(n, FracOrder(s)); }
inline double c_disjoint(int n, double s) { return c_disjoint(n, FracOrder(s)); }
inline double boggio_k(int n, double s) { return boggio_k(n, FracOrder(s)); }
inline double poisson_gamma(int n, double s) { return poisson_gamma(n, FracOrder(s)); }
inline double torsion_const(int n, double s) { return torsion_const(n, FracOrder(s)); }
inline double reflection_lhs(int n, double s) { return reflection_lhs(n, FracOrder(s)); }

}  // namespace fraclab
