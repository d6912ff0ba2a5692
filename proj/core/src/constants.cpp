#include "fraclab/constants.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <string>
#include <tuple>

#include "fraclab/errors.hpp"

namespace fraclab {
namespace {

constexpr double kPi = std::numbers::pi;

constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

bool is_integer(double s) { return std::floor(s) == s; }

enum class Which { kappa, c_disjoint, boggio, poisson, torsion, reflection };

using Key = std::tuple<int, std::uint64_t, int>;

template <class F>
double memoized(Which which, int n, double s, F&& compute) {
  static std::shared_mutex mutex;
  static std::map<Key, double> cache;
  const Key key{n, std::bit_cast<std::uint64_t>(s), static_cast<int>(which)};
  {
    std::shared_lock lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  const double value = compute();
  std::unique_lock lock(mutex);
  cache.emplace(key, value);
  return value;
}

void check_n(int n) {
  if (n < 1) throw DomainError("dimension must be >= 1");
}

double checked(double v, const char* what) {
  if (!std::isfinite(v)) throw RangeError(std::string(what) + ": non-finite result");
  return v;
}

}  // namespace

int floor_paper(double s) {
  if (!std::isfinite(s) || s <= 0.0) throw DomainError("order s must be finite and positive");
  const double f = std::floor(s);
  return static_cast<int>(f == s ? f - 1.0 : f);
}

FracOrder::FracOrder(double s_value) : s(s_value) {
  // s = 0 is admitted for the identity symbol only.
  floor_paper = s_value == 0.0 ? -1 : fraclab::floor_paper(s_value);
  integer = is_integer(s_value);
  sigma = s_value - floor_paper;
  boundary_sign = (floor_paper % 2 == 0) ? -1 : 1;
}

double gamma_fn(double z) {
  if (!std::isfinite(z)) throw DomainError("gamma: non-finite argument");
  if (z <= 0.0 && is_integer(z)) throw DomainError("gamma: pole at non-positive integer");
  if (z < 0.5) {
    return kPi / (std::sin(kPi * z) * gamma_fn(1.0 - z));
  }
  if (z > 171.6) throw RangeError("gamma: overflow");
  const double x = z - 1.0;
  double a = kLanczos[0];
  const double t = x + 7.5;
  for (int i = 1; i < 9; ++i) a += kLanczos[i] / (x + i);
  return std::sqrt(2.0 * kPi) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

double lgamma_pos(double z) {
  if (!(z > 0.0)) throw DomainError("lgamma_pos: argument must be positive");
  if (z < 0.5) return std::log(gamma_fn(z));
  const double x = z - 1.0;
  double a = kLanczos[0];
  const double t = x + 7.5;
  for (int i = 1; i < 9; ++i) a += kLanczos[i] / (x + i);
  return 0.5 * std::log(2.0 * kPi) + (x + 0.5) * std::log(t) - t + std::log(a);
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

double unit_ball_volume(int n) {
  check_n(n);
  return 2.0 * std::pow(kPi, 0.5 * n) / (n * gamma_fn(0.5 * n));
}

double kappa(int n, const FracOrder& o) {
  check_n(n);
  return memoized(Which::kappa, n, o.s, [&] {
    const double s = o.s;
    const double pref = std::pow(2.0, 2.0 * s) * gamma_fn(0.5 * n + s) / std::pow(kPi, 0.5 * n);
    if (!o.integer) {
      const int m = o.floor_paper + 1;
      double sum = 0.0;
      for (int k = 1; k <= m; ++k) {
        sum += ((k % 2) ? -1.0 : 1.0) * binomial(2 * m, m - k) * std::pow(k, 2.0 * s);
      }
      return checked(pref / (gamma_fn(-s) * sum), "kappa");
    }
    const int si = static_cast<int>(s);
    double sum = 0.0;
    for (int k = 2; k <= si + 1; ++k) {
      const int e = k - si + 1;
      sum += ((e % 2 == 0) ? 1.0 : -1.0) * binomial(2 * si + 2, si + 1 - k) *
             std::pow(k, 2.0 * s) * std::log(static_cast<double>(k));
    }
    return checked(pref * gamma_fn(s + 1.0) / (2.0 * sum), "kappa");
  });
}

double c_disjoint(int n, const FracOrder& o) {
  check_n(n);
  if (o.integer) return 0.0;
  return memoized(Which::c_disjoint, n, o.s, [&] {
    const double s = o.s;
    return checked(std::pow(2.0, 2.0 * s) * gamma_fn(0.5 * n + s) /
                       (std::pow(kPi, 0.5 * n) * std::fabs(gamma_fn(-s))),
                   "c_disjoint");
  });
}

double boggio_k(int n, const FracOrder& o) {
  check_n(n);
  return memoized(Which::boggio, n, o.s, [&] {
    const double g = gamma_fn(o.s);
    return checked(gamma_fn(0.5 * n) / (std::pow(2.0, 2.0 * o.s) * std::pow(kPi, 0.5 * n) * g * g),
                   "boggio_k");
  });
}

double poisson_gamma(int n, const FracOrder& o) {
  check_n(n);
  if (o.integer) return 0.0;
  return memoized(Which::poisson, n, o.s, [&] {
    return checked(gamma_fn(0.5 * n) /
                       (std::pow(kPi, 0.5 * n) * gamma_fn(o.sigma) * gamma_fn(1.0 - o.sigma)),
                   "poisson_gamma");
  });
}

double torsion_const(int n, const FracOrder& o) {
  check_n(n);
  return memoized(Which::torsion, n, o.s, [&] {
    return checked(gamma_fn(0.5 * n) / (std::pow(2.0, 2.0 * o.s) * gamma_fn(0.5 * n + o.s) *
                                        gamma_fn(1.0 + o.s)),
                   "torsion_const");
  });
}

double reflection_lhs(int n, const FracOrder& o) {
  check_n(n);
  if (o.integer) throw DomainError("reflection_lhs: integer s");
  return memoized(Which::reflection, n, o.s, [&] {
    return checked(std::sin(o.sigma * kPi) / kPi * gamma_fn(0.5 * n) * gamma_fn(o.s) /
                       gamma_fn(0.5 * n + o.s),
                   "reflection_lhs");
  });
}

}  // namespace fraclab
