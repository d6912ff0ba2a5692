#include "fraclab/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "fraclab/errors.hpp"

namespace fraclab {

namespace {

constexpr int kAuditLevels = 50;

template <class In, class Out>
std::vector<LevelAudit> audit_table(double top, const In& in, const Out& out) {
  std::vector<LevelAudit> table;
  if (!(top > 0.0)) return table;
  for (int i = 0; i < kAuditLevels; ++i) {
    const double t = top * (i + 0.5) / kAuditLevels;
    table.push_back({t, in(t), out(t)});
  }
  return table;
}

double pwl_max_abs(const PiecewiseLinear& u) {
  double m = 0.0;
  for (double y : u.y()) m = std::max(m, std::fabs(y));
  return m;
}

}  // namespace

double MonotoneProfile::operator()(double s) const {
  if (t.empty() || s < 0.0 || s >= t.back()) return 0.0;
  auto it = std::upper_bound(t.begin(), t.end(), s);
  const std::size_t i = static_cast<std::size_t>(it - t.begin()) - 1;
  const double w = (s - t[i]) / (t[i + 1] - t[i]);
  return y[i] + w * (y[i + 1] - y[i]);
}

double MonotoneProfile::level_measure(double tau) const {
  if (t.empty() || tau >= y.front()) return 0.0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    if (y[i + 1] <= tau) {
      if (y[i] == y[i + 1]) return t[i];
      return t[i] + (t[i + 1] - t[i]) * (y[i] - tau) / (y[i] - y[i + 1]);
    }
  }
  return t.back();
}

RearrangementResult<MonotoneProfile> decreasing_rearrangement(const PiecewiseLinear& u) {
  RearrangementResult<MonotoneProfile> res;
  if (u.is_zero() || pwl_max_abs(u) == 0.0) return res;

  // Critical levels: |u| at breakpoints (zero crossings contribute level 0).
  std::vector<double> levels{0.0};
  for (double y : u.y()) levels.push_back(std::fabs(y));
  std::sort(levels.begin(), levels.end(), std::greater<>());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  // Measure of {|u| = tau} from flat segments.
  auto flat_measure = [&](double tau) {
    double m = 0.0;
    for (std::size_t i = 0; i + 1 < u.x().size(); ++i) {
      if (std::fabs(u.y()[i]) == tau && std::fabs(u.y()[i + 1]) == tau && u.y()[i] == u.y()[i + 1]) {
        m += u.x()[i + 1] - u.x()[i];
      }
    }
    return m;
  };
  MonotoneProfile& p = res.output;
  for (double tau : levels) {
    const double above = u.level_measure(tau);
    const double with_flat = tau > 0.0 ? above + flat_measure(tau) : above;
    for (double t : {above, with_flat}) {
      if (!p.t.empty() && t <= p.t.back()) continue;
      p.t.push_back(t);
      p.y.push_back(tau);
    }
  }
  const double top = pwl_max_abs(u);
  res.audit = audit_table(top, [&](double t) { return u.level_measure(t); },
                          [&](double t) { return p.level_measure(t); });
  return res;
}

double level_measure(const GridFunction& u, double t) {
  int count = 0;
  for (double v : u.values) count += std::fabs(v) > t;
  return count * u.grid.h();
}

namespace {

std::vector<double> sorted_magnitudes(const GridFunction& u) {
  std::vector<double> a(u.values.size());
  for (std::size_t j = 0; j < a.size(); ++j) a[j] = std::fabs(u.values[j]);
  std::sort(a.begin(), a.end(), std::greater<>());
  return a;
}

}  // namespace

RearrangementResult<GridFunction> decreasing_rearrangement(const GridFunction& u) {
  const int N = u.grid.N();
  const auto a = sorted_magnitudes(u);
  std::vector<double> out(N, 0.0);
  for (int i = 0; i < N / 2; ++i) out[N / 2 + i] = a[i];
  // Mass beyond the positive half-axis does not fit on the grid.
  for (int i = N / 2; i < N; ++i) {
    if (a[i] != 0.0) throw DomainError("decreasing_rearrangement: support longer than L");
  }
  RearrangementResult<GridFunction> res{GridFunction(u.grid, std::move(out)), {}};
  res.audit = audit_table(a.front(), [&](double t) { return level_measure(u, t); },
                          [&](double t) { return level_measure(res.output, t); });
  return res;
}

RearrangementResult<PiecewiseLinear> spherical_rearrangement(const PiecewiseLinear& u) {
  const auto dec = decreasing_rearrangement(u);
  const auto& p = dec.output;
  if (p.t.empty()) return {PiecewiseLinear::zero(), {}};
  std::vector<double> x, y;
  // Right half is t/2 -> y; mirror it, dropping the duplicated centre.
  for (std::size_t i = p.t.size(); i-- > 0;) {
    x.push_back(0.0 - 0.5 * p.t[i]);
    y.push_back(p.y[i]);
  }
  for (std::size_t i = 0; i < p.t.size(); ++i) {
    if (p.t[i] == 0.0) continue;
    x.push_back(0.5 * p.t[i]);
    y.push_back(p.y[i]);
  }
  RearrangementResult<PiecewiseLinear> res{PiecewiseLinear(std::move(x), std::move(y)), {}};
  res.audit = audit_table(pwl_max_abs(u), [&](double t) { return u.level_measure(t); },
                          [&](double t) { return res.output.level_measure(t); });
  return res;
}

RearrangementResult<GridFunction> spherical_rearrangement(const GridFunction& u) {
  const int N = u.grid.N();
  const auto a = sorted_magnitudes(u);
  std::vector<double> out(N, 0.0);
  // Nodes ordered 0, -h, +h, -2h, +2h, ...
  int idx = 0;
  for (int r = 0; idx < N; ++r) {
    for (int sgn : {-1, 1}) {
      if (r == 0 && sgn == 1) continue;
      const int j = N / 2 + sgn * r;
      if (j < 0 || j >= N) continue;
      out[j] = a[idx++];
      if (idx >= N) break;
    }
  }
  RearrangementResult<GridFunction> res{GridFunction(u.grid, std::move(out)), {}};
  res.audit = audit_table(a.front(), [&](double t) { return level_measure(u, t); },
                          [&](double t) { return level_measure(res.output, t); });
  return res;
}

PiecewiseLinear reflect(const PiecewiseLinear& u, double c) {
  if (u.is_zero()) return u;
  std::vector<double> x, y;
  for (std::size_t i = u.x().size(); i-- > 0;) {
    x.push_back(2.0 * c - u.x()[i]);
    y.push_back(u.y()[i]);
  }
  return PiecewiseLinear(std::move(x), std::move(y));
}

namespace {

// Index offset with x_j reflected to x_{shift - j}.
int reflection_shift(const UniformGrid& g, double c) {
  const double r = (2.0 * c + 2.0 * g.L()) / g.h();
  const double k = std::round(r);
  if (std::fabs(r - k) > 1e-9 * std::max(1.0, std::fabs(r))) {
    throw DomainError("grid is not symmetric about the pivot");
  }
  return static_cast<int>(k);
}

}  // namespace

GridFunction reflect(const GridFunction& u, double c) {
  const int N = u.grid.N();
  const int shift = reflection_shift(u.grid, c);
  std::vector<double> out(N, 0.0);
  for (int j = 0; j < N; ++j) {
    const int k = shift - j;
    if (k >= 0 && k < N) out[j] = u.values[k];
  }
  return {u.grid, std::move(out)};
}

PiecewiseLinear polarize(const PiecewiseLinear& u, const HalfLine& sigma) {
  if (u.is_zero()) return u;
  const PiecewiseLinear r = reflect(u, sigma.c);
  std::vector<double> knots(u.x());
  knots.insert(knots.end(), r.x().begin(), r.x().end());
  knots.push_back(sigma.c);
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
  std::vector<double> all;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    all.push_back(knots[i]);
    const double a = knots[i], b = knots[i + 1];
    const double da = u(a) - r(a), db = u(b) - r(b);
    if (da * db < 0.0) {
      const double z = a + (b - a) * da / (da - db);
      if (z > a && z < b) all.push_back(z);
    }
  }
  all.push_back(knots.back());
  auto value = [&](double x) {
    const double p = u(x), q = r(x);
    if (x == sigma.c) return p;
    return sigma.contains(x) ? std::max(p, q) : std::min(p, q);
  };
  std::vector<double> y;
  for (double x : all) y.push_back(value(x));
  y.front() = 0.0;
  y.back() = 0.0;
  return PiecewiseLinear(std::move(all), std::move(y));
}

GridFunction polarize(const GridFunction& u, const HalfLine& sigma) {
  const GridFunction r = reflect(u, sigma.c);
  std::vector<double> out(u.values.size());
  for (int j = 0; j < u.grid.N(); ++j) {
    const double x = u.grid.x(j);
    const double p = u.values[j], q = r.values[j];
    if (sigma.contains(x)) {
      out[j] = std::max(p, q);
    } else if (HalfLine{sigma.c, sigma.side == Side::right ? Side::left : Side::right}.contains(x)) {
      out[j] = std::min(p, q);
    } else {
      out[j] = p;
    }
  }
  return {u.grid, std::move(out)};
}

}  // namespace fraclab
