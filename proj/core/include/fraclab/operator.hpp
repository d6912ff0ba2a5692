#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "fraclab/constants.hpp"
#include "fraclab/function_rep.hpp"

namespace fraclab {

// Coefficients (-1)^k binom(2m, m-k), k = -m..m, stored at index k + m.
struct FiniteDifferenceStencil {
  int m;
  std::vector<double> coefficients;

  explicit FiniteDifferenceStencil(int order);
  static FiniteDifferenceStencil for_order(const FracOrder& s) { return FiniteDifferenceStencil(s.stencil_order()); }
  double coefficient(int k) const { return coefficients[k + m]; }
};

double delta_m(const std::function<double(double)>& u, double x, double y, int m);

struct HypersingularOptions {
  double cutoff = -1.0;        // inner radius of the Taylor region; <= 0 picks max(16h, 1/16)
  double outer_radius = -1.0;  // <= 0 picks L
};

struct HypersingularResult {
  double value = 0.0;
  double tail_error = 0.0;
  double inner_radius = 0.0;
  double outer_radius = 0.0;
};

// Pointwise (-Delta)^s u(x) from the finite-difference integral over a cubic-spline interpolant.
class HypersingularEvaluator {
 public:
  explicit HypersingularEvaluator(const GridFunction& u);
  ~HypersingularEvaluator();
  HypersingularEvaluator(HypersingularEvaluator&&) noexcept;

  HypersingularResult apply(const FracOrder& s, double x, const HypersingularOptions& opt = {}) const;
  double value(double x) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

HypersingularResult hypersingular_apply(const GridFunction& u, const FracOrder& s, double x,
                                        const HypersingularOptions& opt = {});

// Inverse transform of |xi|^{2s} u_hat.
GridFunction spectral_apply(const GridFunction& u, const FracOrder& s);

}  // namespace fraclab
