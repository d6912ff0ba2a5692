// One line per acceptance criterion; exit status 1 if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "fraclab/cone_projection.hpp"
#include "fraclab/eigen.hpp"
#include "fraclab/energy.hpp"
#include "fraclab/experiments.hpp"
#include "fraclab/green.hpp"
#include "fraclab/operator.hpp"
#include "fraclab/rng.hpp"
#include "support/brute_force_qp.hpp"

using namespace fraclab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double measured(const TrialRecord& r, const std::string& key, double fallback = NAN) {
  for (const auto& [k, v] : r.measured)
    if (k == key) return v;
  return fallback;
}

double input(const TrialRecord& r, const std::string& key, double fallback = NAN) {
  for (const auto& [k, v] : r.inputs)
    if (k == key) return v;
  return fallback;
}

std::string label(const TrialRecord& r, const std::string& key) {
  for (const auto& [k, v] : r.labels)
    if (k == key) return v;
  return "";
}

double min_margin(const TrialRecord& r) {
  double m = INFINITY;
  for (const auto& [k, v] : r.margins) m = std::min(m, v);
  return m;
}

struct Tally {
  int total = 0, pass = 0, fail = 0, skip = 0;
  double worst = INFINITY;
  std::string first_failure;

  void add(const TrialRecord& r) {
    ++total;
    worst = std::min(worst, min_margin(r));
    if (r.verdict == Verdict::pass) ++pass;
    if (r.verdict == Verdict::skip) ++skip;
    if (r.verdict == Verdict::fail) {
      ++fail;
      if (first_failure.empty()) {
        std::ostringstream os;
        os << "trial " << r.trial;
        for (const auto& [k, v] : r.inputs) os << " " << k << "=" << v;
        for (const auto& [k, v] : r.margins) os << " margin." << k << "=" << v;
        if (!r.note.empty()) os << " (" << r.note << ")";
        first_failure = os.str();
      }
    }
  }
  bool all_pass() const { return total > 0 && fail == 0 && skip == 0; }
  std::string str() const {
    std::ostringstream os;
    os << pass << "/" << total << " pass, min margin " << worst;
    if (!first_failure.empty()) os << "; first failure: " << first_failure;
    return os.str();
  }
};

ExperimentConfig config(const std::string& name) {
  ExperimentConfig cfg;
  cfg.name = name;
  return cfg;
}

double clamped_beam_lambda() {
  auto f = [](double b) { return std::cos(2.0 * b) * std::cosh(2.0 * b) - 1.0; };
  boost::math::tools::eps_tolerance<double> tol(50);
  std::uintmax_t it = 100;
  const auto [lo, hi] = boost::math::tools::bisect(f, 2.0, 2.6, tol, it);
  return std::pow(0.5 * (lo + hi), 4);
}

// ---------------------------------------------------------------- criteria

Outcome c1_classical_limits() {
  using clock = std::chrono::steady_clock;
  const IntervalUnion om = parse_domain("-1,1");
  auto t0 = clock::now();
  const double l1 = lambda_of(om, FracOrder(1.0));
  const double dt1 = std::chrono::duration<double>(clock::now() - t0).count();
  t0 = clock::now();
  const double l2 = lambda_of(om, FracOrder(2.0));
  const double dt2 = std::chrono::duration<double>(clock::now() - t0).count();
  const double ref1 = std::numbers::pi * std::numbers::pi / 4.0, ref2 = clamped_beam_lambda();
  const double e1 = std::fabs(l1 - ref1) / ref1, e2 = std::fabs(l2 - ref2) / ref2;
  Outcome o;
  o.pass = e1 <= 1e-2 && e2 <= 2e-2 && dt1 < 30.0 && dt2 < 30.0;
  o.detail = "s=1 lambda " + fmt("%.8f", l1) + " rel err " + fmt("%.2e", e1) + " (" + fmt("%.1f", dt1) +
             " s); s=2 lambda " + fmt("%.6f", l2) + " vs beam " + fmt("%.6f", ref2) + " rel err " + fmt("%.2e", e2) +
             " (" + fmt("%.1f", dt2) + " s)";
  return o;
}

Outcome tally_outcome(const std::vector<TrialRecord>& recs, const std::function<bool(const TrialRecord&)>& keep = {}) {
  Tally t;
  for (const auto& r : recs)
    if (!keep || keep(r)) t.add(r);
  return {t.all_pass(), t.str()};
}

Outcome c2_polarization() {
  const auto recs = run_polarization(config("polarization"));
  Tally rev, cls;
  int strict_missing = 0;
  for (const auto& r : recs) {
    (input(r, "s") < 1.0 ? cls : rev).add(r);
    if (label(r, "branch") == "reversed" && r.verdict == Verdict::pass && min_margin(r) <= 0.0) ++strict_missing;
  }
  Outcome o;
  o.pass = rev.all_pass() && cls.all_pass() && rev.total == 150 && cls.total == 50 && strict_missing == 0;
  o.detail = "reversed s in {1.1,1.25,1.4}: " + rev.str() + "; classical s=0.5: " + cls.str();
  return o;
}

Outcome c3_polya_szego() {
  const auto recs = run_polya_szego(config("polya_szego"));
  Tally scaled, counter;
  double worst_exact = 0.0;
  for (const auto& r : recs) {
    (label(r, "example") == "scaled" ? scaled : counter).add(r);
    for (const auto& [k, v] : r.measured)
      if (k == "closed_vs_expansion") worst_exact = std::max(worst_exact, v);
  }
  Outcome o;
  o.pass = scaled.all_pass() && counter.all_pass() && scaled.total == 6 && counter.total == 12 && worst_exact <= 1e-9;
  o.detail = "scaled gap > 0: " + scaled.str() + "; counterexample gap < 0: " + counter.str() +
             "; closed vs exact max rel " + fmt("%.2e", worst_exact);
  return o;
}

Outcome c4_two_ball() {
  const auto recs = run_two_ball(config("two_ball"));
  Tally t;
  std::ostringstream os;
  for (const auto& r : recs) {
    if (input(r, "r2") != 1.0) continue;
    t.add(r);
    os << " s=" << input(r, "s") << ":" << label(r, "observed_signs") << " gap/l=" << fmt("%.2e", measured(r, "gap_relative"))
       << " nontriv/l=" << fmt("%.2e", measured(r, "nontriv_relative")) << (r.verdict == Verdict::pass ? "" : "(fail)");
  }
  return {t.all_pass() && t.total == 5, std::to_string(t.pass) + "/" + std::to_string(t.total) + " pass;" + os.str()};
}

Outcome c5_faber_krahn() {
  const auto recs = run_faber_krahn(config("faber_krahn"));
  Outcome o = tally_outcome(recs);
  o.pass = o.pass && recs.size() == 100;
  return o;
}

Outcome c6_max_principle() {
  const auto recs = run_max_principle(config("max_principle"));
  Tally solve, base, refl;
  std::string refl_detail;
  for (const auto& r : recs) {
    const std::string d = label(r, "data");
    if (d == "two_ball_base") {
      base.add(r);
    } else if (d == "reflection_lhs") {
      refl.add(r);
      refl_detail = "max reflection_lhs " + fmt("%.6f", measured(r, "max_lhs")) + " at n=" + fmt("%.0f", measured(r, "argmax_n")) +
                    ", s=" + fmt("%.2f", measured(r, "argmax_s")) + ", " + fmt("%.0f", measured(r, "points_above")) +
                    " of " + fmt("%.0f", input(r, "grid_points")) + " points above 1 + 1e-12";
    } else {
      solve.add(r);
    }
  }
  Outcome o;
  o.pass = solve.all_pass() && base.all_pass() && refl.all_pass();
  o.detail = "solve checks " + solve.str() + "; two_ball_base " + base.str() + "; " + refl_detail;
  return o;
}

Outcome c7_appendix() {
  const auto recs = run_appendix(config("appendix"));
  Tally t;
  int primary = 0;
  for (const auto& r : recs) {
    t.add(r);
    if (label(r, "input.domain") == "-1,1" && input(r, "cone_trials") == 20.0) ++primary;
  }
  // Brute-force enumeration at J = 4 on a coarse constraint set.
  Rng rng(2024);
  ConeOptions opt;
  opt.nodes_per_interval = 24;
  double worst = 0.0;
  int cases = 0;
  for (double s : {1.25, 2.5}) {
    const IntervalUnion om = parse_domain("-1,1");
    const GalerkinSystem sys = assemble(om, FracOrder(s), 4, default_grid(om));
    const Eigen::MatrixXd B = cone_constraints(sys, opt);
    for (int k = 0; k < 10; ++k) {
      Eigen::VectorXd w(sys.size());
      for (int i = 0; i < w.size(); ++i) w[i] = rng.normal();
      const Eigen::VectorXd v = project_positive(sys, w, opt).v;
      const Eigen::VectorXd ref = testing_support::brute_force_qp(sys.S, w, B);
      const Eigen::VectorXd d = v - ref;
      worst = std::max(worst, std::sqrt(std::max(0.0, sys.energy(d, d)) / sys.energy(w, w)));
      ++cases;
    }
  }
  Outcome o;
  o.pass = t.all_pass() && primary == 100 && worst <= 1e-10;
  o.detail = "suite " + t.str() + " (" + std::to_string(primary) + " primary w); J=4 brute force " +
             std::to_string(cases) + " cases, max rel energy-norm diff " + fmt("%.2e", worst);
  return o;
}

Outcome c8_method_agreement() {
  Rng rng(8);
  // Wide box: the pairs interact weakly, so the residual periodic-image term must stay below 1e-6 relative.
  const UniformGrid g(64.0, 65536);
  auto random_bump = [&](double lo, double hi) {
    const double r = rng.uniform(0.3, 0.9);
    const double c = rng.uniform(lo + r, hi - r);
    return supported(bump_fn(c, r, rng.uniform(0.5, 2.0)));
  };
  double worst_energy = 0.0;
  for (double s : {0.5, 1.25, 2.5}) {
    const FracOrder o(s);
    for (int t = 0; t < 20; ++t) {
      const SupportedFunction u = random_bump(-4.0, -0.1);
      const SupportedFunction v = random_bump(0.1 + rng.uniform(0.0, 1.0), 4.5);
      const double d = energy_disjoint(u, v, o).value;
      const double sp = energy_spectral_free(sample_unchecked([&](double x) { return u(x); }, g),
                                             sample_unchecked([&](double x) { return v(x); }, g), o)
                            .value;
      worst_energy = std::max(worst_energy, std::fabs(sp - d) / std::fabs(d));
    }
  }
  const UniformGrid gh(64.0, 16384);
  double worst_op = 0.0;
  for (double c : {0.0, 0.25}) {
    const GridFunction u = sample_unchecked([=](double x) { return std::exp(-0.5 * (x - c) * (x - c)); }, gh);
    const HypersingularEvaluator ev(u);
    for (double s : {0.5, 1.25, 1.5, 1.75, 2.5}) {
      const GridFunction w = spectral_apply(u, FracOrder(s));
      for (int i = -4; i <= 4; ++i) {
        const double x = 0.5 * i;
        const int j = static_cast<int>(std::lround((x + gh.L()) / gh.h()));
        worst_op = std::max(worst_op, std::fabs(ev.apply(FracOrder(s), x).value - w[j]) / u.sup_norm());
      }
    }
  }
  return {worst_energy <= 1e-6 && worst_op <= 1e-3,
          "spectral vs disjoint max rel " + fmt("%.2e", worst_energy) + " (60 pairs); hypersingular vs spectral max " +
              fmt("%.2e", worst_op) + " of sup norm"};
}

Outcome c9_truncation() {
  ExperimentConfig cfg = config("truncation");
  cfg.s_values = {1.25, 1.75};
  const auto recs = run_truncation_probe(cfg);
  bool ok = recs.size() == 2;
  std::string detail;
  for (const auto& r : recs) {
    ok = ok && r.verdict == Verdict::pass;
    detail += "s=" + fmt("%.2f", input(r, "s")) + " " + label(r, "observed") + " (expected " + label(r, "expected") +
              ", last rel change " + fmt("%.3e", measured(r, "last_relative_change")) + "); ";
  }
  return {ok, detail};
}

}  // namespace

int main(int argc, char** argv) {
  // Optional arguments select criteria by id, e.g. "C4 C8".
  std::vector<std::string> only(argv + 1, argv + argc);
  struct Item {
    const char* id;
    const char* title;
    Outcome (*run)();
    double limit_seconds;  // 0: no runtime bound
  };
  const Item items[] = {
      {"C1", "classical limits", c1_classical_limits, 0},
      {"C2", "reversed polarization", c2_polarization, 120},
      {"C3", "Polya-Szego failure", c3_polya_szego, 10},
      {"C4", "two-ball dichotomy", c4_two_ball, 300},
      {"C5", "Faber-Krahn 1-D", c5_faber_krahn, 900},
      {"C6", "maximum-principle recovery", c6_max_principle, 0},
      {"C7", "cone projection inequalities", c7_appendix, 0},
      {"C8", "method agreement", c8_method_agreement, 0},
      {"C9", "truncation probe", c9_truncation, 0},
  };
  int failed = 0;
  int ran = 0;
  for (const Item& it : items) {
    if (!only.empty() && std::find(only.begin(), only.end(), it.id) == only.end()) continue;
    ++ran;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = it.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (it.limit_seconds > 0.0 && dt >= it.limit_seconds) {
      o.pass = false;
      o.detail += " [runtime bound " + fmt("%.0f", it.limit_seconds) + " s exceeded]";
    }
    failed += !o.pass;
    std::printf("%s %s  %s [%.1f s] %s\n", it.id, o.pass ? "PASS" : "FAIL", it.title, dt, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", ran - failed, ran);
  return failed == 0 ? 0 : 1;
}
