#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "fraclab/energy.hpp"
#include "fraclab/errors.hpp"
#include "fraclab/rearrange.hpp"
#include "fraclab/rng.hpp"

using namespace fraclab;

namespace {

// Random pwl on (-3, 3) with nonnegative interior values and a zero level.
PiecewiseLinear random_pwl(Rng& rng, int k, bool signed_values = false) {
  std::vector<double> x{-3.0}, y{0.0};
  for (int i = 1; i < k; ++i) {
    x.push_back(-3.0 + 6.0 * i / k + rng.uniform(-0.2, 0.2) * 6.0 / k);
    y.push_back(signed_values ? rng.uniform(-1.0, 2.0) : rng.uniform(0.0, 2.0));
  }
  x.push_back(3.0);
  y.push_back(0.0);
  return PiecewiseLinear(std::move(x), std::move(y));
}

double trapz(const PiecewiseLinear& u, double p) {
  // int |u|^p with fine sampling; enough for comparisons between rearrangements.
  const auto sup = u.support();
  const int n = 200000;
  const double h = (sup.b - sup.a) / n;
  double s = 0.0;
  for (int i = 0; i <= n; ++i) s += (i == 0 || i == n ? 0.5 : 1.0) * std::pow(std::fabs(u(sup.a + i * h)), p);
  return s * h;
}

}  // namespace

TEST(Decreasing, Tent) {
  const auto r = decreasing_rearrangement(tent(2.0, 4.0));
  for (double t : {0.0, 0.5, 1.0, 1.9}) EXPECT_NEAR(r.output(t), 1.0 - 0.5 * t, 1e-14);
  EXPECT_EQ(r.output(2.5), 0.0);
  EXPECT_LT(r.max_audit_error(), 1e-14);
}

TEST(Decreasing, FlatPartsAndSigns) {
  const PiecewiseLinear u({-2.0, -1.0, 1.0, 2.0, 3.0}, {0.0, 1.0, 1.0, -2.0, 0.0});
  const auto r = decreasing_rearrangement(u);
  EXPECT_NEAR(r.output(0.0), 2.0, 1e-14);
  // {|u| > 1} has measure 2/3 * 1 + 1/2 from the negative dip.
  EXPECT_NEAR(u.level_measure(1.0), r.output.level_measure(1.0), 1e-14);
  EXPECT_LT(r.max_audit_error(), 1e-13);
  for (std::size_t i = 0; i + 1 < r.output.y.size(); ++i) EXPECT_GE(r.output.y[i], r.output.y[i + 1]);
}

TEST(Decreasing, CounterexamplePairSharesProfile) {
  const auto [u, us] = make_counterexample_pair(3.0);
  const auto a = decreasing_rearrangement(u), b = decreasing_rearrangement(us);
  for (double t = 0.0; t < 4.0; t += 0.01) EXPECT_NEAR(a.output(t), b.output(t), 1e-12) << t;
}

TEST(Spherical, RandomAudits) {
  Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const PiecewiseLinear u = random_pwl(rng, 3 + trial % 9, trial % 2 == 1);
    const auto r = spherical_rearrangement(u);
    EXPECT_LT(r.max_audit_error(), 1e-12);
    const PiecewiseLinear& v = r.output;
    // Even and nonincreasing in |x|.
    for (double x = 0.0; x < 3.0; x += 0.037) {
      EXPECT_NEAR(v(x), v(-x), 1e-13);
      EXPECT_GE(v(x) + 1e-13, v(x + 0.037));
    }
    EXPECT_NEAR(trapz(v, 2.0), trapz(u, 2.0), 1e-6);
  }
}

TEST(Spherical, ShiftedTent) {
  const auto r = spherical_rearrangement(tent(1.0, 2.0, 3.0));
  for (double x : {-0.5, -0.2, 0.0, 0.1, 0.4}) EXPECT_NEAR(r.output(x), tent(-0.5, 0.5, 3.0)(x), 1e-14);
}

TEST(GridRearrangement, PermutationOfValues) {
  const UniformGrid g(4.0, 256);
  Rng rng(3);
  std::vector<double> vals(g.N(), 0.0);
  for (int j = 80; j < 176; ++j) vals[j] = rng.uniform(-1.0, 1.0);
  const GridFunction u(g, vals);
  const auto dec = decreasing_rearrangement(u);
  const auto sph = spherical_rearrangement(u);
  EXPECT_EQ(dec.max_audit_error(), 0.0);
  EXPECT_EQ(sph.max_audit_error(), 0.0);
  std::vector<double> a, b;
  for (double v : u.values) a.push_back(std::fabs(v));
  for (double v : sph.output.values) b.push_back(v);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  EXPECT_EQ(a, b);
  for (int r = 1; r < 100; ++r) {
    EXPECT_GE(sph.output[128 + r - 1], sph.output[128 - r]);
    EXPECT_GE(sph.output[128 - r], sph.output[128 + r]);
  }
  for (int j = 128; j + 1 < g.N(); ++j) EXPECT_GE(dec.output[j], dec.output[j + 1]);
}

TEST(GridRearrangement, TooLongSupport) {
  const UniformGrid g(1.0, 16);
  EXPECT_THROW(decreasing_rearrangement(GridFunction(g, std::vector<double>(16, 1.0))), DomainError);
}

TEST(Reflect, PwlAndGrid) {
  const PiecewiseLinear u({0.0, 1.0, 3.0}, {0.0, 2.0, 0.0});
  const PiecewiseLinear r = reflect(u, 1.0);
  for (double x : {-1.0, 0.0, 0.5, 1.5}) EXPECT_NEAR(r(x), u(2.0 - x), 1e-15);
  const UniformGrid g(8.0, 128);
  const GridFunction gu = sample(u, g);
  const GridFunction gr = reflect(gu, 0.5);
  for (int j = 0; j < g.N(); ++j) EXPECT_NEAR(gr[j], u(1.0 - g.x(j)), 1e-14);
  EXPECT_THROW(reflect(gu, 0.01), DomainError);
}

TEST(Polarize, EquimeasurableAndOrdered) {
  Rng rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const PiecewiseLinear u = random_pwl(rng, 4 + trial % 7, trial % 3 == 0);
    const HalfLine sig{rng.uniform(-1.0, 1.0), trial % 2 ? Side::left : Side::right};
    const PiecewiseLinear p = polarize(u, sig);
    for (double t : {0.1, 0.7, 1.3, 1.9}) {
      EXPECT_NEAR(p.level_measure(t), u.level_measure(t), 1e-11) << trial << " " << t;
    }
    for (double d = 0.013; d < 4.0; d += 0.1) {
      const double in = sig.side == Side::right ? sig.c + d : sig.c - d;
      const double out = sig.reflect(in);
      EXPECT_GE(p(in) + 1e-13, p(out));
      EXPECT_NEAR(std::max(p(in), p(out)), std::max(u(in), u(out)), 1e-13);
      EXPECT_NEAR(std::min(p(in), p(out)), std::min(u(in), u(out)), 1e-13);
    }
    const PiecewiseLinear pp = polarize(p, sig);
    for (double x = -5.0; x < 5.0; x += 0.05) EXPECT_NEAR(pp(x), p(x), 1e-13);
  }
}

TEST(Polarize, GridEnergyDecreasesForSmallOrders) {
  const UniformGrid g(8.0, 4096);
  Rng rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const PiecewiseLinear u = random_pwl(rng, 6);
    const GridFunction gu = sample(u, g);
    const HalfLine sig{g.h() * rng.uniform_int(-64, 64), Side::right};
    const GridFunction gp = polarize(gu, sig);
    for (double t : {0.1, 0.9, 1.5}) EXPECT_DOUBLE_EQ(level_measure(gp, t), level_measure(gu, t));
    for (double s : {0.25, 0.5, 0.9}) {
      EXPECT_LE(energy_spectral_free(gp, gp, FracOrder(s)).value,
                energy_spectral_free(gu, gu, FracOrder(s)).value * (1.0 + 1e-12)) << s;
    }
  }
}
