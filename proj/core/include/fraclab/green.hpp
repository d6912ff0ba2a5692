#pragma once

#include <functional>
#include <vector>

#include "fraclab/constants.hpp"
#include "fraclab/function_rep.hpp"

namespace fraclab {

using Point = std::vector<double>;

struct KernelValue {
  double value = 0.0;
  double prefactor = 0.0;     // k_{n,s} (1-|x|^2)^s (1-|y|^2)^s |x-y|^{-n}
  double rho = 0.0;
  double eta_integral = 0.0;  // \int_0^1 eta^{s-1} (rho eta + 1)^{-n/2} d eta
};

// \int_0^1 eta^{s-1} (rho eta + 1)^{-n/2} d eta.
double boggio_eta_integral(int n, double s, double rho);

// Green function of the unit ball (Boggio).
KernelValue boggio_green(int n, const FracOrder& s, const Point& x, const Point& y);
KernelValue boggio_green(const FracOrder& s, double x, double y);

// Poisson kernel of the unit ball, |y| < 1 < |z|.
double poisson_kernel(int n, const FracOrder& s, const Point& y, const Point& z);
double poisson_kernel(const FracOrder& s, double y, double z);

// Torsion function of the unit ball.
double torsion(int n, const FracOrder& s, const Point& x);
double torsion(const FracOrder& s, double x);

struct BallGeometry {
  int n = 1;
  Point center{0.0};
  double radius = 1.0;

  Point local(const Point& x) const;
};

KernelValue green_on_ball(const BallGeometry& ball, const FracOrder& s, const Point& x, const Point& y);
double poisson_on_ball(const BallGeometry& ball, const FracOrder& s, const Point& y, const Point& z);
double torsion_on_ball(const BallGeometry& ball, const FracOrder& s, const Point& x);

// D1 = (-d/2 - 2 r1, -d/2), D2 = (d/2, d/2 + 2 r2) on the line; tau(x) = -x.
struct TwoBallGeometry {
  double r1 = 1.0;
  double r2 = 1.0;
  double distance = 2.0;

  Interval d1() const { return {-0.5 * distance - 2.0 * r1, -0.5 * distance}; }
  Interval d2() const { return {0.5 * distance, 0.5 * distance + 2.0 * r2}; }
  IntervalUnion domain() const { return IntervalUnion({d1(), d2()}); }
  BallGeometry ball1() const { return {1, {d1().mid()}, r1}; }
  BallGeometry ball2() const { return {1, {d2().mid()}, r2}; }
  bool equal_radii() const { return r1 == r2; }
  // Unit-radius hypothesis dist(D1, D2) >= 2, scaled by the radius.
  bool hypothesis_ok() const { return equal_radii() && distance >= 2.0 * r1; }
  static double tau(double x) { return -x; }
};

struct TwoBallBase {
  double value = 0.0;
  bool hypothesis_ok = true;
};

// G_{D1}(x,y) + \int_{D2} Gamma_{D1}(y,z) G_{D1}(x, tau z) dz for x, y in D1.
TwoBallBase two_ball_base(double x, double y, const TwoBallGeometry& geom, const FracOrder& s);

struct MaxPrincipleReport {
  bool passed = false;
  int parity = 0;            // f = g + parity * g o tau
  double min_v = 0.0;        // min of u on D1 collocation nodes
  double sup_u = 0.0;
  double symmetry_error = 0.0;  // max |u(tau x) - parity u(x)| / sup_u
  bool hypothesis_ok = true;
};

// Parity 0 selects -(-1)^floor(s), the data symmetry of the maximum-principle statement.
MaxPrincipleReport antisymmetric_solve_check(const TwoBallGeometry& geom, const FracOrder& s,
                                             const std::function<double(double)>& g, int parity = 0,
                                             int J = 16);
MaxPrincipleReport antisymmetric_solve_check(const TwoBallGeometry& geom, const FracOrder& s,
                                             const GridFunction& g, int parity = 0, int J = 16);

}  // namespace fraclab
