#include "fraclab/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fft.hpp"
#include "fraclab/errors.hpp"
#include "fraclab/quadrature.hpp"

namespace fraclab {

namespace {

constexpr int kCollocation = 64;

// P_j^{(s,s)}(t), j < J, into out.
void jacobi_all(double s, int J, double t, double* out) {
  double p0 = 1.0, p1 = (s + 1.0) * t;
  out[0] = 1.0;
  if (J > 1) out[1] = p1;
  for (int n = 1; n + 1 < J; ++n) {
    const double a = 2.0 * n + 2.0 * s;
    const double c1 = 2.0 * (n + 1) * (n + 2.0 * s + 1.0) * a;
    const double c2 = (a + 1.0) * (a + 2.0) * a;
    const double c3 = 2.0 * (n + s) * (n + s) * (a + 2.0);
    const double p2 = (c2 * t * p1 - c3 * p0) / c1;
    p0 = p1;
    p1 = p2;
    out[n + 1] = p1;
  }
}

// (1 - t^2)^s P_j^{(s,s)}(t), j < J.
void weighted_jacobi_all(double s, int J, double t, double* out) {
  jacobi_all(s, J, t, out);
  const double w = std::pow(std::max(0.0, 1.0 - t * t), s);
  for (int j = 0; j < J; ++j) out[j] *= w;
}

double jacobi_norm(int j, double s) {
  const double lg = (2.0 * s + 1.0) * std::log(2.0) + 2.0 * lgamma_pos(j + s + 1.0) -
                    std::log(2.0 * j + 2.0 * s + 1.0) - lgamma_pos(j + 2.0 * s + 1.0) -
                    lgamma_pos(j + 1.0);
  return std::exp(0.5 * lg);
}

double local_t(const Interval& I, double x) { return (2.0 * x - I.a - I.b) / I.length(); }

}  // namespace

double GalerkinSystem::eval(const Eigen::VectorXd& c, double x) const {
  std::vector<double> vals(J);
  for (std::size_t k = 0; k < domain.size(); ++k) {
    const Interval& I = domain[k];
    if (!(x > I.a && x < I.b)) continue;
    weighted_jacobi_all(order.s, J, local_t(I, x), vals.data());
    double sum = 0.0;
    for (int j = 0; j < J; ++j) sum += c[k * J + j] * scale[k * J + j] * vals[j];
    return sum;
  }
  return 0.0;
}

Eigen::VectorXd GalerkinSystem::restrict_to(const Eigen::VectorXd& c, std::size_t k) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(c.size());
  out.segment(k * J, J) = c.segment(k * J, J);
  return out;
}

SupportedFunction GalerkinSystem::as_supported(const Eigen::VectorXd& c) const {
  SupportedFunction out;
  for (std::size_t k = 0; k < domain.size(); ++k) {
    if (c.segment(k * J, J).isZero(0.0)) continue;
    const Eigen::VectorXd local = c.segment(k * J, J);
    const Interval I = domain[k];
    const std::vector<double> sc(scale.begin() + k * J, scale.begin() + (k + 1) * J);
    const double s = order.s;
    const int n = J;
    out.pieces.push_back({I, [local, I, sc, s, n](double x) {
                            std::vector<double> vals(n);
                            weighted_jacobi_all(s, n, local_t(I, x), vals.data());
                            double sum = 0.0;
                            for (int j = 0; j < n; ++j) sum += local[j] * sc[j] * vals[j];
                            return sum;
                          }});
  }
  return out;
}

std::vector<double> GalerkinSystem::collocation(int per_interval) const {
  std::vector<double> x;
  for (const auto& I : domain.intervals()) {
    for (int i = 0; i < per_interval; ++i) x.push_back(I.a + I.length() * (i + 0.5) / per_interval);
  }
  return x;
}

Eigen::MatrixXd GalerkinSystem::basis_matrix(const std::vector<double>& nodes) const {
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(nodes.size()), size());
  std::vector<double> vals(J);
  for (std::size_t r = 0; r < nodes.size(); ++r) {
    for (std::size_t k = 0; k < domain.size(); ++k) {
      const Interval& I = domain[k];
      if (!(nodes[r] > I.a && nodes[r] < I.b)) continue;
      weighted_jacobi_all(order.s, J, local_t(I, nodes[r]), vals.data());
      for (int j = 0; j < J; ++j) B(r, k * J + j) = scale[k * J + j] * vals[j];
    }
  }
  return B;
}

GalerkinSystem assemble(const IntervalUnion& omega, const FracOrder& s, int J, const UniformGrid& grid,
                        const AssemblyOptions& opt) {
  if (J < 1 || J > 64) throw DomainError("assemble: J must lie in [1, 64]");
  if (!(s.s > 0.0)) throw DomainError("assemble: need s > 0");
  const double half = 0.5 * grid.L();
  if (omega.left() < -half || omega.right() > half) throw DomainError("assemble: domain not inside [-L/2, L/2]");

  GalerkinSystem sys{omega, s, J, grid, {}, {}, {}, {}, {}};
  const int nI = static_cast<int>(omega.size());
  const int nb = nI * J;
  for (int k = 0; k < nI; ++k) {
    for (int j = 0; j < J; ++j) {
      sys.basis.emplace_back(omega[k].a, omega[k].b, j, s.s);
      sys.scale.push_back(1.0 / jacobi_norm(j, s.s));
    }
  }

  // Mass and moments by Gauss-Jacobi, exact for the polynomial parts.
  sys.M = Eigen::MatrixXd::Zero(nb, nb);
  sys.moments.assign(nb, {});
  const QuadratureRule gm = gauss_jacobi(J + 2, 2.0 * s.s, 2.0 * s.s);
  const QuadratureRule g1 = gauss_jacobi(J + 4, s.s, s.s);
  std::vector<double> vals(J);
  for (int k = 0; k < nI; ++k) {
    const Interval& I = omega[k];
    const double jac = 0.5 * I.length();
    for (std::size_t q = 0; q < gm.nodes.size(); ++q) {
      // Polynomial parts only: the weight (1 - t^2)^{2s} is in the rule.
      std::vector<double> P(J);
      jacobi_all(s.s, J, gm.nodes[q], P.data());
      for (int i = 0; i < J; ++i) {
        for (int j = 0; j < J; ++j) {
          sys.M(k * J + i, k * J + j) += jac * gm.weights[q] * P[i] * P[j] * sys.scale[k * J + i] * sys.scale[k * J + j];
        }
      }
    }
    for (std::size_t q = 0; q < g1.nodes.size(); ++q) {
      const double t = g1.nodes[q];
      const double x = I.mid() + jac * t;
      jacobi_all(s.s, J, t, vals.data());
      for (int j = 0; j < J; ++j) {
        const double pj = vals[j];
        const double base = jac * g1.weights[q] * pj * sys.scale[k * J + j];
        auto& mo = sys.moments[k * J + j];
        mo.m0 += base;
        mo.m1 += base * x;
        mo.m2 += base * x * x;
      }
    }
  }

  // Stiffness: S = Re(F W F^H) with F the rows of scaled DFTs.
  const int N = grid.N();
  const int K = N / 2 + 1;
  const double dxi = grid.dxi();
  const double pref = dxi * grid.h() * grid.h() / (2.0 * std::numbers::pi);
  std::vector<double> sqrt_w(K);
  for (int q = 0; q < K; ++q) {
    const double mult = (q == 0 || q == N / 2) ? 1.0 : 2.0;
    sqrt_w[q] = q == 0 ? 0.0 : std::sqrt(pref * mult * std::pow(q * dxi, 2.0 * s.s));
  }
  Eigen::MatrixXd A(nb, K), B(nb, K);
  std::vector<double> buf(N);
  for (int k = 0; k < nI; ++k) {
    const Interval& I = omega[k];
    const int j0 = std::max(0, static_cast<int>(std::ceil((I.a + grid.L()) / grid.h())));
    const int j1 = std::min(N - 1, static_cast<int>(std::floor((I.b + grid.L()) / grid.h())));
    std::vector<std::vector<double>> samples(J, std::vector<double>(N, 0.0));
    for (int jj = j0; jj <= j1; ++jj) {
      const double x = grid.x(jj);
      if (!(x > I.a && x < I.b)) continue;
      weighted_jacobi_all(s.s, J, local_t(I, x), vals.data());
      for (int j = 0; j < J; ++j) samples[j][jj] = vals[j] * sys.scale[k * J + j];
    }
    for (int j = 0; j < J; ++j) {
      const auto F = detail::rfft(samples[j]);
      for (int q = 0; q < K; ++q) {
        A(k * J + j, q) = sqrt_w[q] * F[q].real();
        B(k * J + j, q) = sqrt_w[q] * F[q].imag();
      }
    }
  }
  sys.S = A * A.transpose();
  sys.S.noalias() += B * B.transpose();
  if (opt.image_correction && !s.integer) {
    for (int i = 0; i < nb; ++i) {
      for (int j = 0; j < nb; ++j) {
        sys.S(i, j) -= periodic_image_energy(sys.moments[i], sys.moments[j], s, grid.L());
      }
    }
  }
  sys.S = 0.5 * (sys.S + sys.S.transpose()).eval();
  sys.M = 0.5 * (sys.M + sys.M.transpose()).eval();
  Eigen::LLT<Eigen::MatrixXd> llt(sys.M);
  if (llt.info() != Eigen::Success) throw NumericError("assemble: mass matrix is not positive definite; reduce J");
  return sys;
}

std::string to_string(IntervalSign s) {
  switch (s) {
    case IntervalSign::plus: return "+";
    case IntervalSign::minus: return "-";
    case IntervalSign::zero: return "0";
    case IntervalSign::mixed: return "mixed";
  }
  return "?";
}

std::string to_string(const std::vector<IntervalSign>& pattern) {
  std::string out = "[";
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    if (i) out += ",";
    out += to_string(pattern[i]);
  }
  return out + "]";
}

std::vector<IntervalSign> sign_pattern(const EigenResult& res, const IntervalUnion& omega, double tol) {
  double sup = 0.0;
  for (double v : res.phi) sup = std::max(sup, std::fabs(v));
  std::vector<IntervalSign> out;
  for (const auto& I : omega.intervals()) {
    double lo = INFINITY, hi = -INFINITY;
    for (std::size_t i = 0; i < res.x.size(); ++i) {
      if (res.x[i] > I.a && res.x[i] < I.b) {
        lo = std::min(lo, res.phi[i]);
        hi = std::max(hi, res.phi[i]);
      }
    }
    const double t = tol * sup;
    if (std::max(std::fabs(lo), std::fabs(hi)) < t) {
      out.push_back(IntervalSign::zero);
    } else if (lo >= -t && hi > t) {
      out.push_back(IntervalSign::plus);
    } else if (hi <= t && lo < -t) {
      out.push_back(IntervalSign::minus);
    } else {
      out.push_back(IntervalSign::mixed);
    }
  }
  return out;
}

EigenResult first_eigenpair(const GalerkinSystem& sys) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(sys.S, sys.M,
                                                               Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
  if (ges.info() != Eigen::Success) throw NumericError("first_eigenpair: eigensolver did not converge");
  EigenResult r;
  r.lambda_min = ges.eigenvalues()[0];
  r.lambda2 = sys.size() > 1 ? ges.eigenvalues()[1] : r.lambda_min;
  r.gap = r.lambda2 - r.lambda_min;
  Eigen::VectorXd c = ges.eigenvectors().col(0);
  c /= std::sqrt(sys.l2(c, c));

  r.x = sys.collocation(kCollocation);
  double integral = 0.0;
  for (int j = 0; j < sys.J; ++j) integral += c[j] * sys.moments[j].m0;
  double lead = 0.0;
  for (double x : r.x) {
    const double v = sys.eval(c, x);
    if (v != 0.0) {
      lead = v;
      break;
    }
  }
  if (integral < 0.0 || (integral == 0.0 && lead < 0.0)) c = -c;
  r.coefficients = c;
  r.phi.reserve(r.x.size());
  for (double x : r.x) r.phi.push_back(sys.eval(c, x));
  r.signs = sign_pattern(r, sys.domain);
  r.lambda_coarse = r.lambda_fine = r.lambda_min;
  return r;
}

namespace {

// Smallest q <= 1024 with q x integral for every endpoint, or 0.
int endpoint_denominator(const IntervalUnion& omega) {
  for (int q = 1; q <= 1024; ++q) {
    bool ok = true;
    for (const Interval& I : omega.intervals()) {
      for (double x : {I.a, I.b}) {
        const double y = x * q;
        ok = ok && std::fabs(y - std::round(y)) <= 1e-9 * std::max(1.0, std::fabs(y));
      }
    }
    if (ok) return q;
  }
  return 0;
}

}  // namespace

UniformGrid default_grid(const IntervalUnion& omega, const EigenOptions& opt) {
  const double L0 = opt.L > 0.0 ? opt.L : default_half_length(omega.left(), omega.right());
  if (opt.N > 0) return UniformGrid(opt.L > 0.0 ? opt.L : L0, opt.N);
  const int q = opt.L > 0.0 ? 0 : endpoint_denominator(omega);
  if (q == 0) return UniformGrid::with_spacing(L0, opt.h_max, 1 << 16);
  // Put every endpoint on a node: h = 1/(q 2^k) and L = N h / 2.
  double h = 1.0 / q;
  while (h > opt.h_max) h *= 0.5;
  int N = 1 << 16;
  while (0.5 * N * h < L0) N *= 2;
  return UniformGrid(0.5 * N * h, N);
}

EigenResult solve_eigen(const IntervalUnion& omega, const FracOrder& s, const EigenOptions& opt) {
  const UniformGrid g = default_grid(omega, opt);
  if (!opt.richardson) return first_eigenpair(assemble(omega, s, opt.J, g, opt.assembly));
  const EigenResult coarse = first_eigenpair(assemble(omega, s, opt.J, g, opt.assembly));
  EigenResult fine = first_eigenpair(assemble(omega, s, opt.J, UniformGrid(g.L(), 2 * g.N()), opt.assembly));
  fine.lambda_coarse = coarse.lambda_min;
  fine.lambda_fine = fine.lambda_min;
  fine.lambda_min = 2.0 * fine.lambda_min - coarse.lambda_min;
  fine.lambda2 = 2.0 * fine.lambda2 - coarse.lambda2;
  fine.gap = fine.lambda2 - fine.lambda_min;
  return fine;
}

double lambda_of(const IntervalUnion& omega, const FracOrder& s, const EigenOptions& opt) {
  return solve_eigen(omega, s, opt).lambda_min;
}

GridFunction DirichletSolution::on(const GalerkinSystem& sys, const UniformGrid& grid) const {
  std::vector<double> v(grid.N());
  for (int j = 0; j < grid.N(); ++j) v[j] = sys.eval(coefficients, grid.x(j));
  return {grid, std::move(v)};
}

DirichletSolution solve_dirichlet(const GalerkinSystem& sys, const std::function<double(double)>& f) {
  constexpr int kNodes = 256;
  const QuadratureRule g = gauss_jacobi(kNodes, sys.order.s, sys.order.s);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(sys.size());
  std::vector<double> vals(sys.J);
  for (std::size_t k = 0; k < sys.domain.size(); ++k) {
    const Interval& I = sys.domain[k];
    const double jac = 0.5 * I.length();
    for (std::size_t q = 0; q < g.nodes.size(); ++q) {
      const double t = g.nodes[q];
      const double fx = f(I.mid() + jac * t);
      if (fx == 0.0) continue;
      jacobi_all(sys.order.s, sys.J, t, vals.data());
      for (int j = 0; j < sys.J; ++j) {
        b[k * sys.J + j] += jac * g.weights[q] * fx * vals[j] * sys.scale[k * sys.J + j];
      }
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(sys.S);
  if (llt.info() != Eigen::Success) throw NumericError("solve_dirichlet: stiffness matrix is not positive definite");
  DirichletSolution sol;
  sol.coefficients = llt.solve(b);
  sol.x = sys.collocation(kCollocation);
  for (double x : sol.x) sol.u.push_back(sys.eval(sol.coefficients, x));
  return sol;
}

DirichletSolution solve_dirichlet(const GalerkinSystem& sys, const GridFunction& f) {
  const UniformGrid& g = f.grid;
  auto interp = [&](double x) {
    const double r = (x + g.L()) / g.h();
    const int j = static_cast<int>(std::floor(r));
    if (j < 0 || j + 1 >= g.N()) return 0.0;
    const double w = r - j;
    return (1.0 - w) * f.values[j] + w * f.values[j + 1];
  };
  return solve_dirichlet(sys, std::function<double(double)>(interp));
}

}  // namespace fraclab
