#include "fraclab/green.hpp"

#include <algorithm>
#include <cmath>

#include "fraclab/eigen.hpp"
#include "fraclab/errors.hpp"
#include "fraclab/quadrature.hpp"

namespace fraclab {

namespace {

double norm2(const Point& x) {
  double r = 0.0;
  for (double v : x) r += v * v;
  return r;
}

double dist(const Point& x, const Point& y) {
  if (x.size() != y.size()) throw DomainError("green: point dimensions differ");
  double r = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) r += (x[i] - y[i]) * (x[i] - y[i]);
  return std::sqrt(r);
}

void check_dim(int n, const Point& x) {
  if (n < 1 || static_cast<int>(x.size()) != n) throw DomainError("green: point does not match dimension");
}

}  // namespace

double boggio_eta_integral(int n, double s, double rho) {
  const double half_n = 0.5 * n;
  static thread_local std::vector<std::pair<double, QuadratureRule>> cache;
  auto jacobi_rule = [&]() -> const QuadratureRule& {
    for (const auto& [key, rule] : cache) {
      if (key == s) return rule;
    }
    cache.emplace_back(s, gauss_jacobi(32, 0.0, s - 1.0));
    return cache.back().second;
  };
  const QuadratureRule& gj = jacobi_rule();
  // \int_0^a eta^{s-1} F(eta) d eta with eta = a (1 + t) / 2.
  auto singular_panel = [&](double a, auto&& F) {
    double acc = 0.0;
    for (std::size_t i = 0; i < gj.nodes.size(); ++i) acc += gj.weights[i] * F(0.5 * a * (1.0 + gj.nodes[i]));
    return std::pow(0.5 * a, s) * acc;
  };
  auto F = [&](double eta) { return std::pow(rho * eta + 1.0, -half_n); };
  if (rho <= 1.0) return singular_panel(1.0, F);

  // Transition at 1/rho; beyond it integrate in log(eta).
  const double a = 1.0 / rho;
  double total = singular_panel(a, F);
  const double v0 = std::log(a);
  const int panels = std::max(1, static_cast<int>(std::ceil(-v0)));
  const auto& gl = gauss_legendre(16);
  for (int p = 0; p < panels; ++p) {
    const auto q = mapped(gl, v0 * (1.0 - double(p) / panels), v0 * (1.0 - double(p + 1) / panels));
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
      const double eta = std::exp(q.nodes[i]);
      total += q.weights[i] * std::pow(eta, s) * F(eta);
    }
  }
  return total;
}

KernelValue boggio_green(int n, const FracOrder& s, const Point& x, const Point& y) {
  check_dim(n, x);
  check_dim(n, y);
  const double nx = norm2(x), ny = norm2(y);
  if (nx >= 1.0 || ny >= 1.0) throw DomainError("boggio_green: points must lie in the unit ball");
  const double d = dist(x, y);
  if (d == 0.0) throw DomainError("boggio_green: diverges at x = y");
  KernelValue kv;
  const double wx = 1.0 - nx, wy = 1.0 - ny;
  kv.rho = wx * wy / (d * d);
  kv.prefactor = boggio_k(n, s) * std::pow(wx, s.s) * std::pow(wy, s.s) * std::pow(d, -n);
  kv.eta_integral = boggio_eta_integral(n, s.s, kv.rho);
  kv.value = kv.prefactor * kv.eta_integral;
  return kv;
}

KernelValue boggio_green(const FracOrder& s, double x, double y) { return boggio_green(1, s, {x}, {y}); }

double poisson_kernel(int n, const FracOrder& s, const Point& y, const Point& z) {
  check_dim(n, y);
  check_dim(n, z);
  const double ny = norm2(y), nz = norm2(z);
  if (!(ny < 1.0) || !(nz > 1.0)) throw DomainError("poisson_kernel: need |y| < 1 < |z|");
  const double g = poisson_gamma(n, s);
  if (g == 0.0) return 0.0;
  return s.parity_sign() * g * std::pow(dist(y, z), -n) * std::pow((1.0 - ny) / (nz - 1.0), s.s);
}

double poisson_kernel(const FracOrder& s, double y, double z) { return poisson_kernel(1, s, {y}, {z}); }

double torsion(int n, const FracOrder& s, const Point& x) {
  check_dim(n, x);
  const double nx = norm2(x);
  if (nx >= 1.0) return 0.0;
  return torsion_const(n, s) * std::pow(1.0 - nx, s.s);
}

double torsion(const FracOrder& s, double x) { return torsion(1, s, {x}); }

Point BallGeometry::local(const Point& x) const {
  if (!(radius > 0.0)) throw DomainError("ball: radius must be positive");
  if (x.size() != center.size()) throw DomainError("ball: point dimension mismatch");
  Point out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = (x[i] - center[i]) / radius;
  return out;
}

KernelValue green_on_ball(const BallGeometry& ball, const FracOrder& s, const Point& x, const Point& y) {
  KernelValue kv = boggio_green(ball.n, s, ball.local(x), ball.local(y));
  const double f = std::pow(ball.radius, 2.0 * s.s - ball.n);
  kv.value *= f;
  kv.prefactor *= f;
  return kv;
}

double poisson_on_ball(const BallGeometry& ball, const FracOrder& s, const Point& y, const Point& z) {
  return std::pow(ball.radius, -ball.n) * poisson_kernel(ball.n, s, ball.local(y), ball.local(z));
}

double torsion_on_ball(const BallGeometry& ball, const FracOrder& s, const Point& x) {
  return std::pow(ball.radius, 2.0 * s.s) * torsion(ball.n, s, ball.local(x));
}

TwoBallBase two_ball_base(double x, double y, const TwoBallGeometry& geom, const FracOrder& s) {
  if (!geom.equal_radii()) throw DomainError("two_ball_base: radii must be equal");
  const Interval D1 = geom.d1(), D2 = geom.d2();
  if (!(x > D1.a && x < D1.b && y > D1.a && y < D1.b)) throw DomainError("two_ball_base: points must lie in D1");
  const BallGeometry B1 = geom.ball1();
  TwoBallBase out;
  out.hypothesis_ok = geom.hypothesis_ok();
  out.value = green_on_ball(B1, s, {x}, {y}).value;
  if (s.integer) return out;

  // G_{D1}(x, tau z) is singular at z = tau^{-1}(x) = -x, an interior point of D2.
  const double zs = -x;
  const auto& gl = gauss_legendre(64);
  double integral = 0.0;
  for (const Interval& part : {Interval{D2.a, zs}, Interval{zs, D2.b}}) {
    const auto q = mapped(gl, part.a, part.b);
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
      const double z = q.nodes[i];
      const double tz = TwoBallGeometry::tau(z);
      if (tz == x) continue;
      integral += q.weights[i] * poisson_on_ball(B1, s, {y}, {z}) * green_on_ball(B1, s, {x}, {tz}).value;
    }
  }
  out.value += integral;
  return out;
}

MaxPrincipleReport antisymmetric_solve_check(const TwoBallGeometry& geom, const FracOrder& s,
                                             const std::function<double(double)>& g, int parity, int J) {
  if (!geom.equal_radii()) throw DomainError("antisymmetric_solve_check: radii must be equal");
  MaxPrincipleReport rep;
  rep.hypothesis_ok = geom.hypothesis_ok();
  rep.parity = parity != 0 ? (parity > 0 ? 1 : -1) : -s.parity_sign();
  const Interval D1 = geom.d1();
  auto g1 = [&](double x) { return (x > D1.a && x < D1.b) ? g(x) : 0.0; };
  const int eps = rep.parity;
  auto f = [&](double x) { return g1(x) + eps * g1(TwoBallGeometry::tau(x)); };

  const IntervalUnion omega = geom.domain();
  EigenOptions eo;
  eo.J = J;
  const GalerkinSystem sys = assemble(omega, s, J, default_grid(omega, eo));
  const DirichletSolution sol = solve_dirichlet(sys, std::function<double(double)>(f));

  for (double v : sol.u) rep.sup_u = std::max(rep.sup_u, std::fabs(v));
  if (rep.sup_u == 0.0) {
    rep.passed = true;
    return rep;
  }
  rep.min_v = INFINITY;
  for (std::size_t i = 0; i < sol.x.size(); ++i) {
    const double x = sol.x[i];
    if (!(x > D1.a && x < D1.b)) continue;
    rep.min_v = std::min(rep.min_v, sol.u[i]);
    const double mirrored = sys.eval(sol.coefficients, TwoBallGeometry::tau(x));
    rep.symmetry_error = std::max(rep.symmetry_error, std::fabs(mirrored - eps * sol.u[i]) / rep.sup_u);
  }
  rep.passed = rep.min_v >= -1e-6 * rep.sup_u && rep.symmetry_error <= 1e-6;
  return rep;
}

MaxPrincipleReport antisymmetric_solve_check(const TwoBallGeometry& geom, const FracOrder& s,
                                             const GridFunction& g, int parity, int J) {
  for (int j = 0; j < g.grid.N(); ++j) {
    if (g.values[j] < 0.0) throw DomainError("antisymmetric_solve_check: data must be nonnegative");
  }
  const UniformGrid grid = g.grid;
  auto interp = [grid, vals = g.values](double x) {
    const double r = (x + grid.L()) / grid.h();
    const int j = static_cast<int>(std::floor(r));
    if (j < 0 || j + 1 >= grid.N()) return 0.0;
    const double w = r - j;
    return (1.0 - w) * vals[j] + w * vals[j + 1];
  };
  return antisymmetric_solve_check(geom, s, interp, parity, J);
}

}  // namespace fraclab
