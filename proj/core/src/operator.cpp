#include "fraclab/operator.hpp"

#include <Eigen/Dense>
#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <cmath>

#include "fraclab/energy.hpp"
#include "fraclab/errors.hpp"
#include "fraclab/quadrature.hpp"

namespace fraclab {

FiniteDifferenceStencil::FiniteDifferenceStencil(int order) : m(order) {
  if (order < 1) throw DomainError("stencil: order must be >= 1");
  coefficients.resize(2 * m + 1);
  for (int k = -m; k <= m; ++k) {
    coefficients[k + m] = ((k % 2) ? -1.0 : 1.0) * binomial(2 * m, m - k);
  }
}

double delta_m(const std::function<double(double)>& u, double x, double y, int m) {
  const FiniteDifferenceStencil st(m);
  double sum = 0.0;
  for (int k = -m; k <= m; ++k) sum += st.coefficient(k) * u(x + k * y);
  return sum;
}

struct HypersingularEvaluator::Impl {
  UniformGrid grid;
  double sup;
  boost::math::interpolators::cardinal_cubic_b_spline<double> spline;

  explicit Impl(const GridFunction& u)
      : grid(u.grid), sup(u.sup_norm()), spline(u.values.begin(), u.values.end(), u.grid.x(0), u.grid.h()) {}

  double at(double t) const {
    if (t < grid.x(0) || t > grid.x(grid.N() - 1)) return 0.0;
    return spline(t);
  }
};

HypersingularEvaluator::HypersingularEvaluator(const GridFunction& u) : impl_(std::make_unique<Impl>(u)) {}
HypersingularEvaluator::~HypersingularEvaluator() = default;
HypersingularEvaluator::HypersingularEvaluator(HypersingularEvaluator&&) noexcept = default;

double HypersingularEvaluator::value(double x) const { return impl_->at(x); }

HypersingularResult HypersingularEvaluator::apply(const FracOrder& s, double x,
                                                  const HypersingularOptions& opt) const {
  const auto& g = impl_->grid;
  if (std::fabs(x) > 0.5 * g.L()) throw DomainError("hypersingular_apply: x outside the grid interior");
  if (!(s.s > 0.0)) throw DomainError("hypersingular_apply: need s > 0");
  const int m = s.stencil_order();
  const FiniteDifferenceStencil st(m);
  const double two_s = 2.0 * s.s;
  const double kap = kappa(1, s);

  auto D = [&](double y) {
    double sum = 0.0;
    for (int k = -m; k <= m; ++k) sum += st.coefficient(k) * impl_->at(x + k * y);
    return sum;
  };

  HypersingularResult r;
  r.inner_radius = opt.cutoff > 0.0 ? opt.cutoff : std::max(16.0 * g.h(), 0.0625);
  r.outer_radius = opt.outer_radius > 0.0 ? opt.outer_radius : g.L();
  if (r.outer_radius > g.L()) throw DomainError("hypersingular_apply: outer radius exceeds L");
  if (r.inner_radius >= r.outer_radius) throw DomainError("hypersingular_apply: cutoff >= outer radius");
  const double y0 = r.inner_radius, R = r.outer_radius;

  // Inner region: even Taylor model sum_j A_j y^{2j}, j = m..m+2, fitted on [y0, 2 y0].
  constexpr int kFit = 16, kTerms = 3;
  Eigen::MatrixXd A(kFit, kTerms);
  Eigen::VectorXd b(kFit);
  for (int i = 0; i < kFit; ++i) {
    const double t = 1.0 + (i + 0.5) / kFit;
    for (int j = 0; j < kTerms; ++j) A(i, j) = std::pow(t, 2 * (m + j));
    b[i] = D(t * y0);
  }
  const Eigen::VectorXd coef = A.colPivHouseholderQr().solve(b);
  double inner = 0.0;
  for (int j = 0; j < kTerms; ++j) {
    const double e = 2.0 * (m + j) - two_s;
    inner += coef[j] * std::pow(y0, -2.0 * (m + j)) * std::pow(y0, e) / e;
  }

  // Middle region: geometric panels to 1, then panels of width 1/4.
  const auto& gl = gauss_legendre(16);
  auto panel = [&](double a, double c) {
    const auto q = mapped(gl, a, c);
    double acc = 0.0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) acc += q.weights[i] * D(q.nodes[i]) * std::pow(q.nodes[i], -1.0 - two_s);
    return acc;
  };
  double middle = 0.0;
  double a = y0;
  while (a < std::min(1.0, R)) {
    const double c = std::min({2.0 * a, 1.0, R});
    middle += panel(a, c);
    a = c;
  }
  while (a < R) {
    const double c = std::min(a + 0.25, R);
    middle += panel(a, c);
    a = c;
  }

  // Beyond R only the k = 0 term survives for supports inside [x - R, x + R].
  const double tail = st.coefficient(0) * impl_->at(x) * std::pow(R, -two_s) / two_s;
  r.value = kap * (inner + middle + tail);
  r.tail_error = kap * impl_->sup * std::pow(R, -two_s);
  return r;
}

HypersingularResult hypersingular_apply(const GridFunction& u, const FracOrder& s, double x,
                                        const HypersingularOptions& opt) {
  return HypersingularEvaluator(u).apply(s, x, opt);
}

GridFunction spectral_apply(const GridFunction& u, const FracOrder& s) {
  SpectralTransform t = dft(u);
  for (std::size_t i = 0; i < t.coefficients.size(); ++i) {
    const double xi = std::fabs(t.xi(i));
    const double sym = xi == 0.0 ? (s.s == 0.0 ? 1.0 : 0.0) : std::pow(xi, 2.0 * s.s);
    t.coefficients[i] *= sym;
  }
  return idft(t);
}

}  // namespace fraclab
