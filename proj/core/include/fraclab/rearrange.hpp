#pragma once

#include <vector>

#include "fraclab/function_rep.hpp"

namespace fraclab {

struct LevelAudit {
  double threshold;
  double input_measure;
  double output_measure;
};

// Nonincreasing piecewise-linear profile t -> u~(t) on [0, inf), zero beyond t.back().
struct MonotoneProfile {
  std::vector<double> t;
  std::vector<double> y;

  double operator()(double s) const;
  double level_measure(double tau) const;
};

template <class Out>
struct RearrangementResult {
  Out output;
  std::vector<LevelAudit> audit;

  double max_audit_error() const {
    double e = 0.0;
    for (const auto& a : audit) e = std::max(e, std::abs(a.input_measure - a.output_measure));
    return e;
  }
};

RearrangementResult<MonotoneProfile> decreasing_rearrangement(const PiecewiseLinear& u);
// Output sampled at nodes x = i h >= 0; negative nodes hold 0.
RearrangementResult<GridFunction> decreasing_rearrangement(const GridFunction& u);

RearrangementResult<PiecewiseLinear> spherical_rearrangement(const PiecewiseLinear& u);
RearrangementResult<GridFunction> spherical_rearrangement(const GridFunction& u);

PiecewiseLinear polarize(const PiecewiseLinear& u, const HalfLine& sigma);
GridFunction polarize(const GridFunction& u, const HalfLine& sigma);

PiecewiseLinear reflect(const PiecewiseLinear& u, double c);
GridFunction reflect(const GridFunction& u, double c);

// Measure of {|u| > t} for grid data: h * #{j : |u_j| > t}.
double level_measure(const GridFunction& u, double t);

}  // namespace fraclab
