#include <cmath>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <gtest/gtest.h>

#include "fraclab/errors.hpp"
#include "fraclab/green.hpp"

using namespace fraclab;

namespace {

double rel(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); }

// int_{-1}^{1} G(x, y) dy, split at the diagonal.
double green_mass(const FracOrder& s, double x, double R = 1.0) {
  boost::math::quadrature::tanh_sinh<double> ts;
  const BallGeometry ball{1, {0.0}, R};
  auto G = [&](double y) {
    if (std::fabs(y - x) < 1e-100 || std::fabs(y) >= R) return 0.0;
    return green_on_ball(ball, s, {x}, {y}).value;
  };
  return ts.integrate(G, -R, x) + ts.integrate(G, x, R);
}

// s in (0, 1): P(y, z) = gamma (1 - y^2)^s (z^2 - 1)^{-s} |y - z|^{-1}.
double poisson_formula(double s, double y, double t, double side) {
  const double z = side * (1.0 + t);
  return poisson_gamma(1, s) * std::pow(1.0 - y * y, s) * std::pow(t * (2.0 + t), -s) / std::fabs(z - y);
}

// int_{|z| > 1} P(y, z) dz with |z| = 1 + w^q, q = 1 / (1 - s), removing the edge singularity.
double poisson_mass(double s, double y) {
  boost::math::quadrature::exp_sinh<double> es;
  const double q = 1.0 / (1.0 - s);
  double total = 0.0;
  for (double side : {-1.0, 1.0}) {
    auto f = [&](double w) {
      if (w == 0.0) return 0.0;
      const double t = std::pow(w, q);
      if (!std::isfinite(t) || t == 0.0) return 0.0;
      return poisson_formula(s, y, t, side) * q * std::pow(w, q - 1.0);
    };
    total += es.integrate(f, 1e-14);
  }
  return total;
}

}  // namespace

TEST(EtaIntegral, MatchesQuadrature) {
  boost::math::quadrature::tanh_sinh<double> ts;
  for (int n = 1; n <= 3; ++n) {
    for (double s : {0.25, 0.5, 1.0, 1.75, 3.5}) {
      for (double rho : {1e-3, 0.5, 1.0, 7.0, 300.0, 1e5}) {
        const double ref = ts.integrate([&](double e) { return std::pow(e, s - 1.0) * std::pow(rho * e + 1.0, -0.5 * n); }, 0.0, 1.0);
        EXPECT_LT(rel(boggio_eta_integral(n, s, rho), ref), 1e-11) << n << " " << s << " " << rho;
      }
    }
  }
}

TEST(Boggio, ClassicalLaplacian) {
  for (double x : {-0.9, -0.2, 0.3}) {
    for (double y : {-0.5, 0.1, 0.95}) {
      const double expect = 0.5 * (1.0 - std::max(x, y)) * (1.0 + std::min(x, y));
      EXPECT_NEAR(boggio_green(FracOrder(1.0), x, y).value, expect, 1e-13);
    }
  }
}

TEST(Boggio, SymmetricAndPositive) {
  for (double s : {0.5, 1.5, 2.5}) {
    for (double x : {-0.7, 0.0, 0.4}) {
      for (double y : {-0.3, 0.55}) {
        const double a = boggio_green(FracOrder(s), x, y).value, b = boggio_green(FracOrder(s), y, x).value;
        EXPECT_NEAR(a, b, 1e-14 * a);
        EXPECT_GT(a, 0.0);
      }
    }
  }
  EXPECT_THROW(boggio_green(FracOrder(0.5), 0.2, 0.2), DomainError);
  EXPECT_THROW(boggio_green(FracOrder(0.5), 1.2, 0.2), DomainError);
}

TEST(Boggio, TorsionIdentity) {
  for (double s : {0.5, 0.75, 1.25, 2.0, 2.5}) {
    const FracOrder o(s);
    for (double x : {-0.6, 0.0, 0.85}) {
      EXPECT_LT(rel(green_mass(o, x), torsion(o, x)), 1e-8) << s << " " << x;
    }
    // Radius 2 scales as R^{2s}.
    const BallGeometry b2{1, {0.0}, 2.0};
    EXPECT_LT(rel(green_mass(o, 0.5, 2.0), torsion_on_ball(b2, o, {0.5})), 1e-8) << s;
  }
}

TEST(Poisson, UnitMass) {
  for (double s : {0.25, 0.5, 0.75}) {
    for (double y : {-0.7, 0.0, 0.3}) {
      EXPECT_NEAR(poisson_mass(s, y), 1.0, 1e-9) << s << " " << y;
      for (double t : {1e-3, 0.4, 5.0}) {
        for (double side : {-1.0, 1.0}) {
          EXPECT_LT(rel(poisson_kernel(FracOrder(s), y, side * (1.0 + t)), poisson_formula(s, y, t, side)), 1e-11);
        }
      }
    }
  }
  EXPECT_THROW(poisson_kernel(FracOrder(0.5), 0.2, 0.5), DomainError);
  EXPECT_EQ(poisson_kernel(FracOrder(2.0), 0.2, 1.5), 0.0);
}

TEST(Poisson, BallScalingKeepsUnitMass) {
  // A density in z: Gamma_{rB}(y, z) = r^{-n} Gamma_B(y / r, z / r).
  const BallGeometry b{1, {3.0}, 2.0};
  const FracOrder s(0.5);
  for (double z : {5.5, 0.2, 9.0}) {
    EXPECT_NEAR(poisson_on_ball(b, s, {3.4}, {z}), 0.5 * poisson_kernel(s, 0.2, 0.5 * (z - 3.0)), 1e-15);
  }
  boost::math::quadrature::exp_sinh<double> es;
  auto side = [&](double sign) {
    return es.integrate([&](double w) {
      const double t = w * w;  // s = 1/2: (z - edge) = w^2 regularises the edge
      const double z = 3.0 + sign * (2.0 + t);
      if (!std::isfinite(z) || std::fabs(0.5 * (z - 3.0)) <= 1.0) return 0.0;
      return 2.0 * w * poisson_on_ball(b, s, {3.4}, {z});
    }, 1e-14);
  };
  EXPECT_NEAR(side(1.0) + side(-1.0), 1.0, 1e-6);
}

TEST(Poisson, SignAlternatesWithFloor) {
  EXPECT_GT(poisson_kernel(FracOrder(0.5), 0.0, 2.0), 0.0);
  EXPECT_LT(poisson_kernel(FracOrder(1.5), 0.0, 2.0), 0.0);
  EXPECT_GT(poisson_kernel(FracOrder(2.5), 0.0, 2.0), 0.0);
}

TEST(TwoBall, BaseIsPositive) {
  const TwoBallGeometry geom;
  for (double s : {0.5, 1.5, 2.5}) {
    for (double x : {-2.9, -2.5, -2.0, -1.3}) {
      for (double y : {-2.8, -1.9, -1.1}) {
        const TwoBallBase b = two_ball_base(x, y, geom, FracOrder(s));
        EXPECT_TRUE(b.hypothesis_ok);
        EXPECT_GT(b.value, 0.0) << s << " " << x << " " << y;
      }
    }
  }
  EXPECT_THROW(two_ball_base(0.0, -2.0, geom, FracOrder(0.5)), DomainError);
  EXPECT_THROW(two_ball_base(-2.0, -2.0, TwoBallGeometry{1.0, 0.5, 2.0}, FracOrder(0.5)), DomainError);
}

TEST(TwoBall, Geometry) {
  const TwoBallGeometry g{1.0, 1.0, 3.0};
  EXPECT_DOUBLE_EQ(g.d1().a, -3.5);
  EXPECT_DOUBLE_EQ(g.d2().b, 3.5);
  EXPECT_TRUE(g.hypothesis_ok());
  EXPECT_FALSE((TwoBallGeometry{1.0, 1.0, 1.5}).hypothesis_ok());
}

TEST(MaxPrinciple, AntisymmetricData) {
  const TwoBallGeometry geom;
  auto g = [](double x) { return bump(x, -2.2, 0.5) + 0.5 * bump(x, -1.6, 0.3); };
  for (double s : {0.5, 1.5, 2.5}) {
    const MaxPrincipleReport r = antisymmetric_solve_check(geom, FracOrder(s), g, 0, 12);
    EXPECT_TRUE(r.passed) << s << " min " << r.min_v;
    EXPECT_EQ(r.parity, FracOrder(s).floor_paper % 2 == 0 ? -1 : 1);
    EXPECT_LT(r.symmetry_error, 1e-6);
    EXPECT_GT(r.sup_u, 0.0);
  }
}
