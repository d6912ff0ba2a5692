#include "fraclab/function_rep.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fraclab/errors.hpp"

namespace fraclab {

UniformGrid::UniformGrid(double half_length, int points) : L_(half_length), N_(points) {
  if (!(half_length > 0.0) || !std::isfinite(half_length)) throw DomainError("grid: L must be positive");
  if (points < 8 || (points & (points - 1)) != 0) throw DomainError("grid: N must be a power of two >= 8");
}

double UniformGrid::dxi() const { return std::numbers::pi / L_; }

UniformGrid UniformGrid::with_spacing(double L, double h_max, int min_points) {
  int N = std::max(8, min_points);
  while (2.0 * L / N > h_max) N *= 2;
  return UniformGrid(L, N);
}

GridFunction::GridFunction(UniformGrid g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (static_cast<int>(values.size()) != grid.N()) throw DomainError("grid function: size mismatch");
  for (double x : values) {
    if (!std::isfinite(x)) throw DomainError("grid function: non-finite sample");
  }
}

double GridFunction::sup_norm() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::fabs(v));
  return m;
}

bool GridFunction::supported_in_half_box(double tol) const {
  const double half = 0.5 * grid.L();
  for (int j = 0; j < grid.N(); ++j) {
    if (std::fabs(grid.x(j)) > half && std::fabs(values[j]) >= tol) return false;
  }
  return true;
}

void GridFunction::require_half_box_support(double tol) const {
  if (!supported_in_half_box(tol)) throw DomainError("grid function not supported in [-L/2, L/2]");
}

GridFunction GridFunction::operator+(const GridFunction& o) const {
  if (!(grid == o.grid)) throw DomainError("grid function: mismatched grids");
  std::vector<double> v(values);
  for (std::size_t j = 0; j < v.size(); ++j) v[j] += o.values[j];
  return {grid, std::move(v)};
}

GridFunction GridFunction::operator-(const GridFunction& o) const {
  if (!(grid == o.grid)) throw DomainError("grid function: mismatched grids");
  std::vector<double> v(values);
  for (std::size_t j = 0; j < v.size(); ++j) v[j] -= o.values[j];
  return {grid, std::move(v)};
}

GridFunction GridFunction::scaled(double a) const {
  std::vector<double> v(values);
  for (double& x : v) x *= a;
  return {grid, std::move(v)};
}

PiecewiseLinear::PiecewiseLinear(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  if (x_.size() != y_.size()) throw DomainError("pwl: x and y sizes differ");
  if (x_.empty()) return;
  if (x_.size() < 2) throw DomainError("pwl: need at least two breakpoints");
  for (std::size_t i = 0; i + 1 < x_.size(); ++i) {
    if (!(x_[i] < x_[i + 1])) throw DomainError("pwl: breakpoints must be strictly increasing");
  }
  for (std::size_t i = 0; i < x_.size(); ++i) {
    if (!std::isfinite(x_[i]) || !std::isfinite(y_[i])) throw DomainError("pwl: non-finite data");
  }
  if (y_.front() != 0.0 || y_.back() != 0.0) throw DomainError("pwl: end values must vanish");
}

PiecewiseLinear PiecewiseLinear::zero() { return PiecewiseLinear({}, {}); }

double PiecewiseLinear::operator()(double t) const {
  if (x_.empty() || t <= x_.front() || t >= x_.back()) return 0.0;
  auto it = std::upper_bound(x_.begin(), x_.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
  const double w = (t - x_[i]) / (x_[i + 1] - x_[i]);
  return y_[i] + w * (y_[i + 1] - y_[i]);
}

Interval PiecewiseLinear::support() const {
  if (x_.empty()) return {0.0, 0.0};
  return {x_.front(), x_.back()};
}

std::vector<double> PiecewiseLinear::slopes() const {
  std::vector<double> d;
  for (std::size_t i = 0; i + 1 < x_.size(); ++i) d.push_back((y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]));
  return d;
}

namespace {

// Measure of {x in [0, len] : |y0 + (y1 - y0) x / len| > t} for t >= 0.
double segment_level(double len, double y0, double y1, double t) {
  if (y0 * y1 < 0.0) {
    const double z = len * y0 / (y0 - y1);
    return segment_level(z, y0, 0.0, t) + segment_level(len - z, 0.0, y1, t);
  }
  const double a = std::fabs(y0), b = std::fabs(y1);
  if (a <= t && b <= t) return 0.0;
  if (a > t && b > t) return len;
  const double lo = std::min(a, b), hi = std::max(a, b);
  return len * (hi - t) / (hi - lo);
}

}  // namespace

double PiecewiseLinear::level_measure(double t) const {
  double m = 0.0;
  for (std::size_t i = 0; i + 1 < x_.size(); ++i) m += segment_level(x_[i + 1] - x_[i], y_[i], y_[i + 1], t);
  return m;
}

PiecewiseLinear PiecewiseLinear::scaled(double a) const {
  if (a == 0.0) return zero();
  std::vector<double> y(y_);
  for (double& v : y) v *= a;
  return PiecewiseLinear(x_, std::move(y));
}

PiecewiseLinear PiecewiseLinear::dilated(double a, double x0) const {
  if (!(a > 0.0)) throw DomainError("pwl: dilation factor must be positive");
  std::vector<double> x(x_);
  for (double& v : x) v = (v + x0) / a;
  return PiecewiseLinear(std::move(x), y_);
}

IntervalUnion::IntervalUnion(std::vector<Interval> intervals) : iv_(std::move(intervals)) {
  if (iv_.empty()) throw DomainError("interval union: empty");
  std::sort(iv_.begin(), iv_.end(), [](const Interval& p, const Interval& q) { return p.a < q.a; });
  for (std::size_t k = 0; k < iv_.size(); ++k) {
    if (!(iv_[k].a < iv_[k].b)) throw DomainError("interval union: need a < b");
    if (k + 1 < iv_.size() && iv_[k].b > iv_[k + 1].a) throw DomainError("interval union: overlapping intervals");
  }
}

double IntervalUnion::measure() const {
  double m = 0.0;
  for (const auto& I : iv_) m += I.length();
  return m;
}

bool IntervalUnion::contains(double x) const {
  return std::any_of(iv_.begin(), iv_.end(), [x](const Interval& I) { return x > I.a && x < I.b; });
}

IntervalUnion IntervalUnion::scaled(double r) const {
  if (!(r > 0.0)) throw DomainError("interval union: scale must be positive");
  std::vector<Interval> out;
  for (const auto& I : iv_) out.push_back({r * I.a, r * I.b});
  return IntervalUnion(std::move(out));
}

IntervalUnion IntervalUnion::shifted(double d) const {
  std::vector<Interval> out;
  for (const auto& I : iv_) out.push_back({I.a + d, I.b + d});
  return IntervalUnion(std::move(out));
}

IntervalUnion parse_domain(const std::string& text) {
  std::vector<Interval> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    const auto comma = item.find(',');
    if (comma == std::string::npos) throw DomainError("domain: expected 'a,b' in '" + item + "'");
    try {
      out.push_back({std::stod(item.substr(0, comma)), std::stod(item.substr(comma + 1))});
    } catch (const std::logic_error&) {
      throw DomainError("domain: cannot parse '" + item + "'");
    }
  }
  return IntervalUnion(std::move(out));
}

IntervalUnion fill_hole(const IntervalUnion& omega, std::size_t k) {
  if (k + 1 >= omega.size()) throw DomainError("fill_hole: index out of range");
  if (omega[k].b != omega[k + 1].a) throw DomainError("fill_hole: intervals do not share an endpoint");
  std::vector<Interval> out;
  for (std::size_t i = 0; i < omega.size(); ++i) {
    if (i == k) {
      out.push_back({omega[k].a, omega[k + 1].b});
      ++i;
    } else {
      out.push_back(omega[i]);
    }
  }
  return IntervalUnion(std::move(out));
}

double jacobi_symmetric(int j, double alpha, double t) {
  if (j == 0) return 1.0;
  double p0 = 1.0;
  double p1 = (alpha + 1.0) * t;
  for (int n = 1; n < j; ++n) {
    // Symmetric Jacobi recurrence (alpha = beta).
    const double a = 2.0 * n + 2.0 * alpha;
    const double c1 = 2.0 * (n + 1) * (n + 2.0 * alpha + 1.0) * a;
    const double c2 = (a + 1.0) * (a + 2.0) * a;
    const double c3 = 2.0 * (n + alpha) * (n + alpha) * (a + 2.0);
    const double p2 = (c2 * t * p1 - c3 * p0) / c1;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

WeightedJacobiBasisFn::WeightedJacobiBasisFn(double a, double b, int j, double order)
    : alpha(a), beta(b), degree(j), s(order) {
  if (!(a < b)) throw DomainError("basis: need alpha < beta");
  if (j < 0 || j > 64) throw DomainError("basis: degree must lie in [0, 64]");
  if (!(order > 0.0)) throw DomainError("basis: order must be positive");
}

double WeightedJacobiBasisFn::local(double t) const {
  if (t <= -1.0 || t >= 1.0) return 0.0;
  return std::pow(1.0 - t * t, s) * jacobi_symmetric(degree, s, t);
}

double WeightedJacobiBasisFn::operator()(double x) const {
  return local((2.0 * x - alpha - beta) / (beta - alpha));
}

namespace {

void check_support(const Interval& sup, const UniformGrid& grid) {
  const double half = 0.5 * grid.L();
  if (sup.a < -half - 1e-12 || sup.b > half + 1e-12) {
    throw DomainError("sample: support not contained in [-L/2, L/2]");
  }
}

template <class F>
GridFunction sample_with(const F& f, const UniformGrid& grid) {
  std::vector<double> v(grid.N());
  for (int j = 0; j < grid.N(); ++j) v[j] = f(grid.x(j));
  return {grid, std::move(v)};
}

}  // namespace

GridFunction sample(const PiecewiseLinear& f, const UniformGrid& grid) {
  if (f.is_zero()) return GridFunction(grid);
  check_support(f.support(), grid);
  return sample_with(f, grid);
}

GridFunction sample(const WeightedJacobiBasisFn& f, const UniformGrid& grid) {
  check_support({f.alpha, f.beta}, grid);
  return sample_with(f, grid);
}

GridFunction sample(const SupportedCallable& f, const UniformGrid& grid) {
  check_support(f.support, grid);
  const auto& sup = f.support;
  return sample_with([&](double x) { return (x > sup.a && x < sup.b) ? f.f(x) : 0.0; }, grid);
}

GridFunction sample_unchecked(const std::function<double(double)>& f, const UniformGrid& grid) {
  return sample_with(f, grid);
}

std::pair<PiecewiseLinear, PiecewiseLinear> make_counterexample_pair(double M) {
  if (!(M > 1.0)) throw DomainError("counterexample pair: need M > 1");
  PiecewiseLinear u({-2.0, 0.0, 1.0, 2.0 * M - 1.0, 2.0 * M}, {0.0, 2.0, 1.0, 1.0, 0.0});
  PiecewiseLinear us({-M - 1.0, -M, -1.0, 0.0, 1.0, M, M + 1.0}, {0.0, 1.0, 1.0, 2.0, 1.0, 1.0, 0.0});
  return {u, us};
}

std::pair<PiecewiseLinear, PiecewiseLinear> make_scaled_pair(const PiecewiseLinear& v, double a,
                                                             double x0) {
  if (!(a >= 1.0)) throw DomainError("scaled pair: need a >= 1");
  if (!(std::fabs(x0) > 2.0)) throw DomainError("scaled pair: need |x0| > 2");
  const Interval sup = v.support();
  if (sup.a < -1.0 || sup.b > 1.0) throw DomainError("scaled pair: profile must be supported in (-1, 1)");
  const PiecewiseLinear va = v.dilated(a, x0);
  const Interval sa = va.support();
  const bool right = sa.a >= sup.b;
  const bool left = sa.b <= sup.a;
  if (!right && !left) throw DomainError("scaled pair: the two bumps overlap");

  const PiecewiseLinear& first = right ? v : va;
  const PiecewiseLinear& second = right ? va : v;
  std::vector<double> x(first.x()), y(first.y());
  std::size_t start = 0;
  if (second.x().front() == x.back()) start = 1;
  for (std::size_t i = start; i < second.x().size(); ++i) {
    x.push_back(second.x()[i]);
    y.push_back(second.y()[i]);
  }
  const double b = a / (1.0 + a);
  return {PiecewiseLinear(std::move(x), std::move(y)), v.dilated(b, 0.0)};
}

PiecewiseLinear tent(double a, double b, double height) {
  return PiecewiseLinear({a, 0.5 * (a + b), b}, {0.0, height, 0.0});
}

double bump(double x, double center, double radius) {
  const double t = (x - center) / radius;
  if (std::fabs(t) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - t * t));
}

SupportedCallable bump_fn(double center, double radius, double amplitude) {
  return {[=](double x) { return amplitude * bump(x, center, radius); },
          {center - radius, center + radius}};
}

double default_half_length(double a, double b) {
  return std::max(4.0 * (b - a), 2.5 * std::max(std::fabs(a), std::fabs(b)));
}

}  // namespace fraclab
