#include "fraclab/energy.hpp"

#include <algorithm>
#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/math/special_functions/zeta.hpp>
#include <cmath>
#include <memory>
#include <numbers>

#include "fft.hpp"
#include "fraclab/errors.hpp"
#include "fraclab/quadrature.hpp"

namespace fraclab {

namespace {
constexpr double kPi = std::numbers::pi;
}

SpectralTransform dft(const GridFunction& u) {
  const int N = u.grid.N();
  const double scale = u.grid.h() / std::sqrt(2.0 * kPi);
  const auto half = detail::rfft(u.values);
  SpectralTransform t{u.grid, std::vector<std::complex<double>>(N)};
  for (int k = -N / 2; k < N / 2; ++k) {
    const int a = std::abs(k);
    std::complex<double> c = half[a];
    if (k < 0) c = std::conj(c);
    if (a % 2) c = -c;
    t.coefficients[k + N / 2] = scale * c;
  }
  return t;
}

GridFunction idft(const SpectralTransform& t) {
  const int N = t.grid.N();
  const double scale = std::sqrt(2.0 * kPi) / t.grid.h();
  std::vector<std::complex<double>> half(N / 2 + 1);
  for (int k = 0; k < N / 2; ++k) {
    std::complex<double> c = t.at(k);
    if (k % 2) c = -c;
    half[k] = scale * c;
  }
  // The Nyquist coefficient is stored at k = -N/2.
  std::complex<double> ny = t.at(-N / 2);
  if ((N / 2) % 2) ny = -ny;
  half[N / 2] = {scale * ny.real(), 0.0};
  return {t.grid, detail::irfft(half, N)};
}

std::string to_string(EnergyMethod m) {
  switch (m) {
    case EnergyMethod::spectral: return "spectral";
    case EnergyMethod::disjoint_kernel: return "disjoint_kernel";
    case EnergyMethod::closed_form: return "closed_form";
  }
  return "unknown";
}

EnergyReport energy_spectral(const GridFunction& u, const GridFunction& v, const FracOrder& s) {
  if (!(u.grid == v.grid)) throw DomainError("energy_spectral: mismatched grids");
  const int N = u.grid.N();
  const double dxi = u.grid.dxi();
  const auto fu = detail::rfft(u.values);
  const auto fv = detail::rfft(v.values);
  const double scale = u.grid.h() * u.grid.h() / (2.0 * kPi);
  double sum = 0.0, magnitude = 0.0, tail = 0.0;
  for (int k = 0; k <= N / 2; ++k) {
    const double mult = (k == 0 || k == N / 2) ? 1.0 : 2.0;
    const double sym = (k == 0) ? (s.s == 0.0 ? 1.0 : 0.0) : std::pow(k * dxi, 2.0 * s.s);
    const double w = mult * sym;
    const double re = (fu[k] * std::conj(fv[k])).real();
    sum += w * re;
    const double mag = w * std::abs(fu[k]) * std::abs(fv[k]);
    magnitude += mag;
    if (k > N / 4) tail += mag;
  }
  EnergyReport r;
  r.method = EnergyMethod::spectral;
  r.value = dxi * scale * sum;
  r.resolution = N;
  r.half_length = u.grid.L();
  r.error_estimate = dxi * scale * (4.0 * tail + 1e-13 * magnitude);
  return r;
}

double SupportedFunction::operator()(double x) const {
  double v = 0.0;
  for (const auto& p : pieces) {
    if (x > p.support.a && x < p.support.b) v += p.f(x);
  }
  return v;
}

Interval SupportedFunction::hull() const {
  if (pieces.empty()) return {0.0, 0.0};
  Interval h = pieces.front().support;
  for (const auto& p : pieces) {
    h.a = std::min(h.a, p.support.a);
    h.b = std::max(h.b, p.support.b);
  }
  return h;
}

SupportedFunction SupportedFunction::scaled(double a) const {
  SupportedFunction out;
  if (a == 0.0) return out;
  for (const auto& p : pieces) {
    auto f = p.f;
    out.pieces.push_back({p.support, [f, a](double x) { return a * f(x); }});
  }
  return out;
}

SupportedFunction SupportedFunction::reflected(double c) const {
  SupportedFunction out;
  for (const auto& p : pieces) {
    auto f = p.f;
    out.pieces.push_back({{2.0 * c - p.support.b, 2.0 * c - p.support.a},
                          [f, c](double x) { return f(2.0 * c - x); }});
  }
  return out;
}

SupportedFunction SupportedFunction::shifted(double d) const {
  SupportedFunction out;
  for (const auto& p : pieces) {
    auto f = p.f;
    out.pieces.push_back({{p.support.a + d, p.support.b + d}, [f, d](double x) { return f(x - d); }});
  }
  return out;
}

SupportedFunction& SupportedFunction::operator+=(const SupportedFunction& o) {
  pieces.insert(pieces.end(), o.pieces.begin(), o.pieces.end());
  return *this;
}

SupportedFunction supported(const PiecewiseLinear& u) {
  SupportedFunction out;
  for (std::size_t i = 0; i + 1 < u.x().size(); ++i) {
    const double x0 = u.x()[i], x1 = u.x()[i + 1], y0 = u.y()[i], y1 = u.y()[i + 1];
    if (y0 == 0.0 && y1 == 0.0) continue;
    out.pieces.push_back({{x0, x1}, [=](double x) { return y0 + (y1 - y0) * (x - x0) / (x1 - x0); }});
  }
  return out;
}

SupportedFunction supported(const SupportedCallable& u) {
  SupportedFunction out;
  out.pieces.push_back({u.support, u.f});
  return out;
}

SupportedFunction supported(const WeightedJacobiBasisFn& u) {
  SupportedFunction out;
  out.pieces.push_back({{u.alpha, u.beta}, [u](double x) { return u(x); }});
  return out;
}

SupportedFunction supported(const GridFunction& u) {
  SupportedFunction out;
  const int N = u.grid.N();
  const double h = u.grid.h();
  auto spline = std::make_shared<boost::math::interpolators::cardinal_cubic_b_spline<double>>(
      u.values.begin(), u.values.end(), u.grid.x(0), h);
  int j = 0;
  while (j < N) {
    if (u.values[j] == 0.0) {
      ++j;
      continue;
    }
    int k = j;
    while (k + 1 < N && u.values[k + 1] != 0.0) ++k;
    const double a = u.grid.x(std::max(j - 1, 0));
    const double b = u.grid.x(std::min(k + 1, N - 1));
    out.pieces.push_back({{a, b}, [spline](double x) { return (*spline)(x); }});
    j = k + 1;
  }
  return out;
}

namespace {

struct PairIntegral {
  double value = 0.0;
  int refinements = 0;
  int nodes = 0;
};

// Separated pieces [a,b] and [c,d], b < c, by tensor Gauss-Legendre.
double tensor_gl(const SupportedFunction::Piece& P, const SupportedFunction::Piece& Q, double p,
                 int n) {
  const auto rx = mapped(gauss_legendre(n), P.support.a, P.support.b);
  const auto ry = mapped(gauss_legendre(n), Q.support.a, Q.support.b);
  std::vector<double> fy(n);
  for (int j = 0; j < n; ++j) fy[j] = ry.weights[j] * Q.f(ry.nodes[j]);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    const double fx = rx.weights[i] * P.f(rx.nodes[i]);
    if (fx == 0.0) continue;
    double row = 0.0;
    for (int j = 0; j < n; ++j) row += fy[j] * std::pow(std::fabs(ry.nodes[j] - rx.nodes[i]), -p);
    total += fx * row;
  }
  return total;
}

// Pieces touching at t0 = P.b = Q.a: graded map x = t0 - A u^q, y = t0 + B v^q.
double touching_gl(const SupportedFunction::Piece& P, const SupportedFunction::Piece& Q, double p,
                   int n) {
  constexpr double q = 4.0;
  const double t0 = P.support.b;
  const double A = P.support.length(), B = Q.support.length();
  const auto r = mapped(gauss_legendre(n), 0.0, 1.0);
  std::vector<double> xs(n), ws(n), ys(n), vs(n);
  for (int i = 0; i < n; ++i) {
    const double t = r.nodes[i];
    xs[i] = A * std::pow(t, q);
    ys[i] = B * std::pow(t, q);
    ws[i] = r.weights[i] * q * A * std::pow(t, q - 1.0) * P.f(t0 - xs[i]);
    vs[i] = r.weights[i] * q * B * std::pow(t, q - 1.0) * Q.f(t0 + ys[i]);
  }
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    if (ws[i] == 0.0) continue;
    double row = 0.0;
    for (int j = 0; j < n; ++j) row += vs[j] * std::pow(xs[i] + ys[j], -p);
    total += ws[i] * row;
  }
  return total;
}

PairIntegral adaptive_pair(const SupportedFunction::Piece& P0, const SupportedFunction::Piece& Q0,
                           double p, const DisjointQuadrature& quad) {
  const bool swap = P0.support.a > Q0.support.a;
  const auto& P = swap ? Q0 : P0;
  const auto& Q = swap ? P0 : Q0;
  const double gap = Q.support.a - P.support.b;
  const double scale = std::max(P.support.length(), Q.support.length());
  if (gap < -1e-14 * scale) throw DomainError("energy_disjoint: overlapping supports");
  const bool touching = gap <= 1e-14 * scale;
  auto eval = [&](int n) { return touching ? touching_gl(P, Q, p, n) : tensor_gl(P, Q, p, n); };

  int n = quad.initial_nodes;
  double prev = eval(n);
  for (int level = 1; level <= quad.max_doublings; ++level) {
    n *= 2;
    const double cur = eval(n);
    if (std::fabs(cur - prev) <= quad.rel_tol * std::fabs(cur) || cur == prev) {
      return {cur, level, n};
    }
    prev = cur;
  }
  throw AccuracyError("energy_disjoint: adaptive quadrature did not converge");
}

}  // namespace

double kernel_integral(const SupportedFunction& u, const SupportedFunction& v, double p,
                       const DisjointQuadrature& quad, int* refinements, int* nodes) {
  double total = 0.0;
  int ref = 0, nn = 0;
  for (const auto& P : u.pieces) {
    for (const auto& Q : v.pieces) {
      const auto r = adaptive_pair(P, Q, p, quad);
      total += r.value;
      ref = std::max(ref, r.refinements);
      nn = std::max(nn, r.nodes);
    }
  }
  if (refinements) *refinements = ref;
  if (nodes) *nodes = nn;
  return total;
}

EnergyReport energy_disjoint(const SupportedFunction& u, const SupportedFunction& v,
                             const FracOrder& s, const DisjointQuadrature& quad) {
  if (s.integer) throw DomainError("energy_disjoint: integer s has a local form");
  EnergyReport r;
  r.method = EnergyMethod::disjoint_kernel;
  const double c = c_disjoint(1, s);
  r.value = s.boundary_sign * c * kernel_integral(u, v, 1.0 + 2.0 * s.s, quad, &r.refinements, &r.resolution);
  r.error_estimate = quad.rel_tol * std::fabs(r.value);
  return r;
}

EnergyReport energy_disjoint(const PiecewiseLinear& u, const PiecewiseLinear& v, const FracOrder& s,
                             const DisjointQuadrature& quad) {
  return energy_disjoint(supported(u), supported(v), s, quad);
}

EnergyReport energy_disjoint(const GridFunction& u, const GridFunction& v, const FracOrder& s,
                             const DisjointQuadrature& quad) {
  return energy_disjoint(supported(u), supported(v), s, quad);
}

namespace {

double Phi(double t, double sigma) {
  if (t == 0.0) return 0.0;
  return std::pow(t, 1.0 - 2.0 * sigma) / (2.0 * sigma * (2.0 * sigma - 1.0));
}

}  // namespace

double indicator_interaction(double a, double b, double c, double d, double sigma) {
  if (!(sigma > 0.0 && sigma < 1.0)) throw DomainError("indicator_interaction: sigma must lie in (0,1)");
  if (!(a < b && b <= c && c < d)) throw DomainError("indicator_interaction: need a < b <= c < d");
  if (b == c && !(sigma < 0.5)) throw DomainError("indicator_interaction: touching intervals need sigma < 1/2");
  const double cs = c_disjoint(1, FracOrder(sigma));
  return -cs * (Phi(d - a, sigma) - Phi(c - a, sigma) - Phi(d - b, sigma) + Phi(c - b, sigma));
}

double indicator_self_energy(double length, double sigma) {
  if (!(sigma > 0.0 && sigma < 0.5)) throw DomainError("indicator_self_energy: sigma must lie in (0,1/2)");
  if (!(length > 0.0)) throw DomainError("indicator_self_energy: length must be positive");
  return c_disjoint(1, FracOrder(sigma)) * std::pow(length, 1.0 - 2.0 * sigma) /
         (sigma * (1.0 - 2.0 * sigma));
}

double pwl_energy_exact(const PiecewiseLinear& u, const PiecewiseLinear& v, double s) {
  if (!(s > 1.0 && s < 1.5)) throw DomainError("pwl_energy_exact: s must lie in (1, 3/2)");
  if (u.is_zero() || v.is_zero()) return 0.0;
  const double sigma = s - 1.0;
  std::vector<double> knots(u.x());
  knots.insert(knots.end(), v.x().begin(), v.x().end());
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

  auto slope_at = [](const PiecewiseLinear& f, double mid) {
    const auto& x = f.x();
    if (mid <= x.front() || mid >= x.back()) return 0.0;
    const std::size_t i = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), mid) - x.begin()) - 1;
    return (f.y()[i + 1] - f.y()[i]) / (x[i + 1] - x[i]);
  };
  const std::size_t m = knots.size() - 1;
  std::vector<double> du(m), dv(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double mid = 0.5 * (knots[i] + knots[i + 1]);
    du[i] = slope_at(u, mid);
    dv[i] = slope_at(v, mid);
  }
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (du[i] == 0.0) continue;
    for (std::size_t j = 0; j < m; ++j) {
      if (dv[j] == 0.0) continue;
      double e;
      if (i == j) {
        e = indicator_self_energy(knots[i + 1] - knots[i], sigma);
      } else if (i < j) {
        e = indicator_interaction(knots[i], knots[i + 1], knots[j], knots[j + 1], sigma);
      } else {
        e = indicator_interaction(knots[j], knots[j + 1], knots[i], knots[i + 1], sigma);
      }
      total += du[i] * dv[j] * e;
    }
  }
  return total;
}

double f_of_r(double r, double s) {
  if (!(s > 1.0 && s < 1.5)) throw DomainError("f_of_r: s must lie in (1, 3/2)");
  if (!(r >= 1.0)) throw DomainError("f_of_r: need r >= 1");
  const double c = c_disjoint(1, FracOrder(s - 1.0));
  auto G = [s](double t) {
    if (t == 0.0) return 0.0;
    return std::pow(t, 3.0 - 2.0 * s) / ((2.0 - 2.0 * s) * (3.0 - 2.0 * s));
  };
  return 2.0 * c * (G(r + 1.0) - 2.0 * G(r) + G(r - 1.0));
}

double polya_szego_gap(double M, double s) {
  if (!(M >= 1.0)) throw DomainError("polya_szego_gap: need M >= 1");
  auto g = [s](double r) { return f_of_r(r + 1.0, s) - f_of_r(r, s); };
  return g(1.0) - 2.0 * g(M) + g(2.0 * M - 1.0);
}

ScaledExampleFactors scaled_example_gap(double a, double s, int n) {
  if (!(a >= 1.0)) throw DomainError("scaled_example_gap: need a >= 1");
  if (n < 1) throw DomainError("scaled_example_gap: need n >= 1");
  const double e = 2.0 * s - n;
  return {1.0 + std::pow(a, e), std::pow(a, e) / std::pow(1.0 + std::pow(a, n), e / n)};
}

double shift_second_derivative(const SupportedFunction& phi_p, const SupportedFunction& phi_m,
                               const FracOrder& s) {
  if (s.integer) throw DomainError("shift_second_derivative: integer s");
  if (phi_p.empty() || phi_m.empty()) return 0.0;
  const double q = kernel_integral(phi_p, phi_m, 3.0 + 2.0 * s.s);
  return -2.0 * s.boundary_sign * c_disjoint(1, s) * (1.0 + 2.0 * s.s) * (2.0 + 2.0 * s.s) * q;
}

double shift_second_derivative(const GridFunction& phi_p, const GridFunction& phi_m,
                               const FracOrder& s) {
  return shift_second_derivative(supported(phi_p), supported(phi_m), s);
}

double periodic_image_energy(const Moments& u, const Moments& v, const FracOrder& s, double L) {
  if (s.integer) return 0.0;
  const double p = 1.0 + 2.0 * s.s;
  const double P = 2.0 * L;
  const double zeroth = 2.0 * boost::math::zeta(p) * std::pow(P, -p) * u.m0 * v.m0;
  const double second = p * (p + 1.0) * boost::math::zeta(p + 2.0) * std::pow(P, -p - 2.0) *
                        (u.m2 * v.m0 - 2.0 * u.m1 * v.m1 + u.m0 * v.m2);
  return s.boundary_sign * c_disjoint(1, s) * (zeroth + second);
}

Moments grid_moments(const GridFunction& u) {
  Moments m;
  const double h = u.grid.h();
  for (int j = 0; j < u.grid.N(); ++j) {
    const double x = u.grid.x(j), v = u.values[j];
    m.m0 += h * v;
    m.m1 += h * v * x;
    m.m2 += h * v * x * x;
  }
  return m;
}

EnergyReport energy_spectral_free(const GridFunction& u, const GridFunction& v, const FracOrder& s) {
  EnergyReport r = energy_spectral(u, v, s);
  r.value -= periodic_image_energy(grid_moments(u), grid_moments(v), s, u.grid.L());
  return r;
}

}  // namespace fraclab
