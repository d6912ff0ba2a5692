#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace fraclab {

// Uniform periodic grid x_j = -L + j h on [-L, L), h = 2L / N.
class UniformGrid {
 public:
  UniformGrid(double half_length, int points);

  double L() const { return L_; }
  int N() const { return N_; }
  double h() const { return 2.0 * L_ / N_; }
  double x(int j) const { return -L_ + j * h(); }
  // Frequency spacing pi / L.
  double dxi() const;

  bool operator==(const UniformGrid& o) const { return L_ == o.L_ && N_ == o.N_; }

  // Smallest power-of-two grid of half-length L with spacing at most h_max.
  static UniformGrid with_spacing(double L, double h_max, int min_points = 8);

 private:
  double L_;
  int N_;
};

struct GridFunction {
  UniformGrid grid;
  std::vector<double> values;

  GridFunction(UniformGrid g, std::vector<double> v);
  explicit GridFunction(UniformGrid g) : GridFunction(g, std::vector<double>(g.N(), 0.0)) {}

  double operator[](int j) const { return values[j]; }
  double sup_norm() const;
  // True if |values| < tol outside [-L/2, L/2].
  bool supported_in_half_box(double tol = 1e-12) const;
  void require_half_box_support(double tol = 1e-12) const;

  GridFunction operator+(const GridFunction& o) const;
  GridFunction operator-(const GridFunction& o) const;
  GridFunction scaled(double a) const;
};

struct Interval {
  double a;
  double b;
  double length() const { return b - a; }
  double mid() const { return 0.5 * (a + b); }
};

// Continuous piecewise-linear function, zero outside [x_0, x_m].
class PiecewiseLinear {
 public:
  PiecewiseLinear(std::vector<double> x, std::vector<double> y);
  static PiecewiseLinear zero();

  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& y() const { return y_; }
  bool is_zero() const { return x_.empty(); }
  double operator()(double t) const;
  Interval support() const;
  // Constant slopes on each [x_i, x_{i+1}].
  std::vector<double> slopes() const;
  // Measure of {|u| > t}, exact on breakpoints.
  double level_measure(double t) const;
  PiecewiseLinear scaled(double a) const;
  // u(a x - x0) as a function of x (a > 0).
  PiecewiseLinear dilated(double a, double x0) const;

 private:
  std::vector<double> x_;
  std::vector<double> y_;
};

// Open intervals, sorted and pairwise disjoint (touching allowed).
class IntervalUnion {
 public:
  explicit IntervalUnion(std::vector<Interval> intervals);

  const std::vector<Interval>& intervals() const { return iv_; }
  std::size_t size() const { return iv_.size(); }
  const Interval& operator[](std::size_t k) const { return iv_[k]; }
  double measure() const;
  double diameter() const { return iv_.back().b - iv_.front().a; }
  double left() const { return iv_.front().a; }
  double right() const { return iv_.back().b; }
  bool contains(double x) const;
  IntervalUnion scaled(double r) const;
  IntervalUnion shifted(double d) const;

 private:
  std::vector<Interval> iv_;
};

// Parse "a1,b1;a2,b2;..."
IntervalUnion parse_domain(const std::string& text);

IntervalUnion fill_hole(const IntervalUnion& omega, std::size_t k);

// P_j^{(alpha,alpha)}(t) by the three-term recurrence.
double jacobi_symmetric(int j, double alpha, double t);

// phi(x) = (1 - t^2)_+^s P_j^{(s,s)}(t), t = (2x - alpha - beta)/(beta - alpha).
struct WeightedJacobiBasisFn {
  double alpha;
  double beta;
  int degree;
  double s;

  WeightedJacobiBasisFn(double a, double b, int j, double order);
  double operator()(double x) const;
  double local(double t) const;
};

enum class Side { right, left };

struct HalfLine {
  double c = 0.0;
  Side side = Side::right;

  bool contains(double x) const { return side == Side::right ? x > c : x < c; }
  double reflect(double x) const { return 2.0 * c - x; }
};

// Function given by a callable together with the interval carrying its support.
struct SupportedCallable {
  std::function<double(double)> f;
  Interval support;
};

GridFunction sample(const PiecewiseLinear& f, const UniformGrid& grid);
GridFunction sample(const WeightedJacobiBasisFn& f, const UniformGrid& grid);
GridFunction sample(const SupportedCallable& f, const UniformGrid& grid);
// No support check; for globally defined callables.
GridFunction sample_unchecked(const std::function<double(double)>& f, const UniformGrid& grid);

// The pair (u, u*) with u having breakpoints (-2, 0, 1, 2M-1, 2M).
std::pair<PiecewiseLinear, PiecewiseLinear> make_counterexample_pair(double M);

// (v + v(a . - x0), v(b .)) with b = a / (1 + a).
std::pair<PiecewiseLinear, PiecewiseLinear> make_scaled_pair(const PiecewiseLinear& v_profile,
                                                             double a, double x0);

PiecewiseLinear tent(double a, double b, double height = 1.0);

// exp(-1/(1 - t^2)) on |t| < 1, t = (x - center)/radius.
double bump(double x, double center, double radius);
SupportedCallable bump_fn(double center, double radius, double amplitude = 1.0);

// Default half-length 4 x diameter of [a, b] measured from the origin.
double default_half_length(double a, double b);

}  // namespace fraclab
