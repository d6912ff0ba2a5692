#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <gtest/gtest.h>

#include "fraclab/constants.hpp"
#include "fraclab/errors.hpp"

using namespace fraclab;
using Big = boost::multiprecision::cpp_bin_float_50;

namespace {

constexpr double pi = std::numbers::pi;

double big_gamma(double z) { return static_cast<double>(boost::multiprecision::tgamma(Big(z))); }

double rel(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); }

// 1 / int_0^inf (4 sin^2(y/2))^m y^{-1-2s} dy: the normalization making the
// finite-difference integral reproduce the symbol |xi|^{2s} at xi = 1.
double kappa_1d_quadrature(double s, int m) {
  auto f = [&](double y) {
    const double sinc = y == 0.0 ? 1.0 : std::sin(0.5 * y) / (0.5 * y);
    return std::pow(sinc, 2 * m) * std::pow(y, 2.0 * m - 1.0 - 2.0 * s);
  };
  const int periods = 4000;
  double sum = 0.0;
  // Endpoint singularity y^{2m-1-2s} at the origin.
  sum += boost::math::quadrature::tanh_sinh<double>().integrate(f, 0.0, 2.0 * pi);
  for (int k = 1; k < periods; ++k) {
    sum += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 2.0 * pi * k, 2.0 * pi * (k + 1), 8, 1e-13);
  }
  // Averaged tail: the mean of (4 sin^2)^m over a period is binom(2m, m).
  const double Y = 2.0 * pi * periods;
  sum += binomial(2 * m, m) * std::pow(Y, -2.0 * s) / (2.0 * s);
  return 1.0 / sum;
}

// int_{R^{n-1}} (1 + |w|^2)^{-(n + 2s)/2} dw, the transverse factor relating kappa_n to kappa_1.
double transverse_factor(int n, double s) {
  if (n == 1) return 1.0;
  boost::math::quadrature::exp_sinh<double> es;
  const double p = 0.5 * (n + 2.0 * s);
  if (n == 2) return 2.0 * es.integrate([&](double w) { return std::pow(1.0 + w * w, -p); });
  return 2.0 * pi * es.integrate([&](double r) { return r * std::pow(1.0 + r * r, -p); });
}

}  // namespace

TEST(FloorPaper, StrictFloor) {
  EXPECT_EQ(floor_paper(2.0), 1);
  EXPECT_EQ(floor_paper(1.5), 1);
  EXPECT_EQ(floor_paper(0.3), 0);
  EXPECT_EQ(floor_paper(1.0), 0);
  EXPECT_EQ(floor_paper(3.999), 3);
  EXPECT_THROW(floor_paper(0.0), DomainError);
  EXPECT_THROW(floor_paper(-1.0), DomainError);
  EXPECT_THROW(floor_paper(NAN), DomainError);
  EXPECT_THROW(floor_paper(INFINITY), DomainError);
}

TEST(FracOrder, DerivedData) {
  for (double s : {0.25, 0.5, 1.0, 1.25, 2.0, 2.5, 3.5}) {
    const FracOrder o(s);
    EXPECT_DOUBLE_EQ(o.floor_paper + o.sigma, s);
    EXPECT_EQ(o.boundary_sign, o.floor_paper % 2 == 0 ? -1 : 1);
  }
  EXPECT_DOUBLE_EQ(FracOrder(2.0).sigma, 1.0);
  EXPECT_TRUE(FracOrder(2.0).integer);
  // -1 on (0,1) and (2,3), +1 on (1,2) and (3,4).
  EXPECT_EQ(FracOrder(0.5).boundary_sign, -1);
  EXPECT_EQ(FracOrder(1.5).boundary_sign, 1);
  EXPECT_EQ(FracOrder(2.5).boundary_sign, -1);
  EXPECT_EQ(FracOrder(3.5).boundary_sign, 1);
}

TEST(Gamma, MatchesMultiprecision) {
  double worst = 0.0;
  for (double z = -9.75; z <= 30.0; z += 0.125) {
    if (z <= 0.0 && z == std::round(z)) continue;
    worst = std::max(worst, rel(gamma_fn(z), big_gamma(z)));
  }
  EXPECT_LT(worst, 1e-13);
  EXPECT_THROW(gamma_fn(0.0), DomainError);
  EXPECT_THROW(gamma_fn(-3.0), DomainError);
  EXPECT_THROW(gamma_fn(200.0), RangeError);
}

TEST(Gamma, LogGamma) {
  for (double z : {0.1, 0.5, 1.0, 3.3, 40.0, 170.0}) {
    EXPECT_NEAR(lgamma_pos(z), static_cast<double>(boost::multiprecision::lgamma(Big(z))), 1e-12 * std::max(1.0, std::fabs(std::lgamma(z))));
  }
}

TEST(UnitBallVolume, LowDimensions) {
  EXPECT_NEAR(unit_ball_volume(1), 2.0, 1e-14);
  EXPECT_NEAR(unit_ball_volume(2), pi, 1e-14);
  EXPECT_NEAR(unit_ball_volume(3), 4.0 * pi / 3.0, 1e-14);
  EXPECT_THROW(unit_ball_volume(0), DomainError);
}

TEST(CDisjoint, ClosedFormAndPoles) {
  EXPECT_NEAR(c_disjoint(1, 0.5), 1.0 / pi, 1e-14);
  EXPECT_EQ(c_disjoint(1, 2.0), 0.0);
  EXPECT_EQ(c_disjoint(3, 1.0), 0.0);
  for (int n = 1; n <= 3; ++n) {
    for (double s : {0.25, 0.5, 1.25, 1.75, 2.5, 3.5}) {
      const double expect = std::pow(2.0, 2 * s) * big_gamma(0.5 * n + s) / (std::pow(pi, 0.5 * n) * std::fabs(big_gamma(-s)));
      EXPECT_LT(rel(c_disjoint(n, s), expect), 1e-13) << n << " " << s;
    }
  }
  // Vanishes continuously at the integers from both sides.
  for (int k = 1; k <= 3; ++k) {
    EXPECT_LT(c_disjoint(1, k - 1e-8), 2e-2 * c_disjoint(1, k - 1e-6));
    EXPECT_LT(c_disjoint(1, k + 1e-8), 2e-2 * c_disjoint(1, k + 1e-6));
    EXPECT_LT(c_disjoint(1, k + 1e-6), 1e-2);
  }
}

TEST(Kappa, SymbolNormalizationOneDimension) {
  for (double s : {0.25, 0.5, 0.75, 1.25, 1.5, 2.5, 3.25}) {
    const FracOrder o(s);
    EXPECT_LT(rel(kappa(1, o), kappa_1d_quadrature(s, o.stencil_order())), 1e-6) << s;
  }
}

TEST(Kappa, IntegerBranch) {
  for (double s : {1.0, 2.0, 3.0}) {
    const FracOrder o(s);
    EXPECT_GT(kappa(1, o), 0.0);
    EXPECT_LT(rel(kappa(1, o), kappa_1d_quadrature(s, o.stencil_order())), 1e-6) << s;
  }
}

TEST(Kappa, HigherDimensions) {
  for (int n = 2; n <= 3; ++n) {
    for (double s : {0.5, 1.25, 2.5}) {
      const double k1 = kappa(1, s);
      EXPECT_LT(rel(kappa(n, s), k1 / transverse_factor(n, s)), 1e-10) << n << " " << s;
    }
  }
}

TEST(Boggio, Values) {
  EXPECT_NEAR(boggio_k(1, 1.0), 0.25, 1e-15);
  EXPECT_NEAR(boggio_k(3, 1.0), big_gamma(1.5) / (4.0 * std::pow(pi, 1.5)), 1e-15);
  for (double s : {0.5, 1.5, 2.25}) {
    const double g = big_gamma(s);
    EXPECT_LT(rel(boggio_k(2, s), 1.0 / (std::pow(2.0, 2 * s) * pi * g * g)), 1e-13);
  }
}

TEST(PoissonGamma, Values) {
  EXPECT_NEAR(poisson_gamma(1, 0.5), 1.0 / pi, 1e-14);
  EXPECT_NEAR(poisson_gamma(1, 1.5), 1.0 / pi, 1e-14);
  EXPECT_EQ(poisson_gamma(1, 2.0), 0.0);
  // sin(pi sigma) Gamma(n/2) / pi^{n/2 + 1} by the reflection formula.
  for (int n = 1; n <= 3; ++n) {
    for (double s : {0.3, 1.7, 2.25}) {
      const double sig = s - std::floor(s);
      EXPECT_LT(rel(poisson_gamma(n, s), std::sin(pi * sig) * big_gamma(0.5 * n) / std::pow(pi, 0.5 * n + 1.0)), 1e-13);
    }
  }
  EXPECT_LT(poisson_gamma(1, 2.0 - 1e-6), 1e-5);
  EXPECT_LT(poisson_gamma(1, 2.0 + 1e-6), 1e-5);
}

TEST(Torsion, ClassicalValues) {
  EXPECT_NEAR(torsion_const(1, 1.0), 0.5, 1e-15);
  EXPECT_NEAR(torsion_const(2, 1.0), 0.25, 1e-15);
  EXPECT_NEAR(torsion_const(3, 1.0), 1.0 / 6.0, 1e-15);
  // Biharmonic on (-1,1): (1 - x^2)^2 / 24.
  EXPECT_NEAR(torsion_const(1, 2.0), 1.0 / 24.0, 1e-15);
}

TEST(Reflection, Values) {
  EXPECT_NEAR(reflection_lhs(1, 0.5), 1.0, 1e-14);
  EXPECT_LT(reflection_lhs(2, 1.5), 1.0);
  EXPECT_LE(reflection_lhs(1, 1.25), 1.0);
  EXPECT_THROW(reflection_lhs(1, 2.0), DomainError);
}

TEST(Reflection, BoundForOrdersAboveOne) {
  for (int n = 1; n <= 3; ++n) {
    for (int q = 5; q < 16; ++q) {
      if (q % 4 == 0) continue;
      EXPECT_LE(reflection_lhs(n, 0.25 * q), 1.0 + 1e-12) << n << " " << 0.25 * q;
    }
  }
}

TEST(Reflection, BelowOneTheBoundCanFail) {
  // sin(pi/4)/pi * Gamma(1/2) Gamma(1/4) / Gamma(3/4) in one dimension.
  const double expect = std::sin(pi / 4) / pi * big_gamma(0.5) * big_gamma(0.25) / big_gamma(0.75);
  EXPECT_NEAR(reflection_lhs(1, 0.25), expect, 1e-13);
  EXPECT_GT(reflection_lhs(1, 0.25), 1.0);
  EXPECT_LT(reflection_lhs(2, 0.25), 1.0);
  EXPECT_LT(reflection_lhs(1, 0.75), 1.0);
}

TEST(Reflection, BetaBound) {
  for (int n = 1; n <= 3; ++n) {
    for (double s : {1.0, 1.25, 2.0, 3.75}) {
      EXPECT_LE(gamma_fn(0.5 * n) * gamma_fn(s) / gamma_fn(0.5 * n + s), 2.0 / n + 1e-14);
    }
  }
}

TEST(Binomial, SmallValues) {
  EXPECT_EQ(binomial(4, 2), 6.0);
  EXPECT_EQ(binomial(10, 3), 120.0);
  EXPECT_EQ(binomial(5, 7), 0.0);
}
