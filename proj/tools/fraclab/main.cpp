#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fraclab/cone_projection.hpp"
#include "fraclab/constants.hpp"
#include "fraclab/eigen.hpp"
#include "fraclab/energy.hpp"
#include "fraclab/errors.hpp"
#include "fraclab/experiments.hpp"
#include "fraclab/green.hpp"
#include "fraclab/io.hpp"
#include "fraclab/operator.hpp"
#include "fraclab/rearrange.hpp"
#include "fraclab/rng.hpp"

using nlohmann::ordered_json;
using namespace fraclab;

namespace {

ordered_json num(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

std::string read_stdin() {
  return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
}

// "L,N"
UniformGrid parse_grid(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw DomainError("--grid expects L,N");
  return UniformGrid(std::stod(text.substr(0, comma)), std::stoi(text.substr(comma + 1)));
}

Point parse_point(const std::string& text) {
  Point p;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) p.push_back(std::stod(item));
  if (p.empty()) throw DomainError("empty point");
  return p;
}

GridFunction on_grid(const FunctionData& f, const std::string& grid_text) {
  if (const auto* g = std::get_if<GridFunction>(&f)) {
    if (!grid_text.empty() && !(g->grid == parse_grid(grid_text))) throw DomainError("--grid differs from the input grid");
    return *g;
  }
  const auto& u = std::get<PiecewiseLinear>(f);
  if (!grid_text.empty()) return sample(u, parse_grid(grid_text));
  const Interval sp = u.is_zero() ? Interval{-1.0, 1.0} : u.support();
  return sample(u, UniformGrid(default_half_length(sp.a, sp.b), 1 << 16));
}

ordered_json report_json(const EnergyReport& r) {
  ordered_json j;
  j["value"] = num(r.value);
  j["method"] = to_string(r.method);
  j["resolution"] = r.resolution;
  j["half_length"] = r.half_length;
  j["refinements"] = r.refinements;
  j["error_estimate"] = num(r.error_estimate);
  return j;
}

ordered_json kernel_json(const KernelValue& k) {
  return {{"value", num(k.value)}, {"prefactor", num(k.prefactor)}, {"rho", num(k.rho)},
          {"eta_integral", num(k.eta_integral)}};
}

int cmd_constants(int n, double sv) {
  const FracOrder s(sv);
  ordered_json j;
  j["kappa"] = num(kappa(n, s));
  j["c_disjoint"] = num(c_disjoint(n, s));
  j["boggio_k"] = num(boggio_k(n, s));
  j["poisson_gamma"] = num(poisson_gamma(n, s));
  j["torsion_const"] = num(torsion_const(n, s));
  j["reflection_lhs"] = s.integer ? ordered_json(nullptr) : num(reflection_lhs(n, s));
  j["floor"] = s.floor_paper;
  j["boundary_sign"] = s.boundary_sign;
  std::cout << j.dump(2) << "\n";
  return 0;
}

// stdin: one function (energy of u with itself) or {"u": f, "v": g}.
int cmd_energy(const std::string& method, double sv, const std::string& grid_text) {
  const FracOrder s(sv);
  const ordered_json in = ordered_json::parse(read_stdin());
  const bool pair = in.contains("u");
  const FunctionData u = parse_function_json((pair ? in.at("u") : in).dump());
  const FunctionData v = pair && in.contains("v") ? parse_function_json(in.at("v").dump()) : u;
  EnergyReport r;
  if (method == "spectral") {
    r = energy_spectral_free(on_grid(u, grid_text), on_grid(v, grid_text), s);
  } else if (method == "disjoint") {
    if (u.index() != v.index()) throw DomainError("disjoint: u and v must have the same type");
    if (const auto* pu = std::get_if<PiecewiseLinear>(&u)) {
      r = energy_disjoint(*pu, std::get<PiecewiseLinear>(v), s);
    } else {
      r = energy_disjoint(std::get<GridFunction>(u), std::get<GridFunction>(v), s);
    }
  } else if (method == "closed") {
    const auto* pu = std::get_if<PiecewiseLinear>(&u);
    const auto* pv = std::get_if<PiecewiseLinear>(&v);
    if (!pu || !pv) throw DomainError("closed: needs piecewise-linear input");
    r.value = pwl_energy_exact(*pu, *pv, sv);
    r.method = EnergyMethod::closed_form;
  } else {
    throw DomainError("unknown method " + method);
  }
  std::cout << report_json(r).dump(2) << "\n";
  return 0;
}

// Without --input the function is the Gaussian exp(-x^2/2).
int cmd_apply(double sv, double x, const std::string& method, const std::string& grid_text,
              const std::string& input) {
  const FracOrder s(sv);
  std::string text;
  if (input == "-") {
    text = read_stdin();
  } else if (!input.empty()) {
    std::ifstream f(input);
    if (!f) throw DomainError("cannot open " + input);
    text.assign(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
  }
  const GridFunction u = !text.empty() ? on_grid(parse_function_json(text), grid_text)
                         : sample_unchecked([](double t) { return std::exp(-0.5 * t * t); },
                                            grid_text.empty() ? UniformGrid(64.0, 16384) : parse_grid(grid_text));
  ordered_json j;
  j["s"] = sv;
  j["x"] = x;
  j["method"] = method;
  if (method == "hyper") {
    const HypersingularResult r = hypersingular_apply(u, s, x);
    j["value"] = num(r.value);
    j["tail_error"] = num(r.tail_error);
    j["inner_radius"] = r.inner_radius;
    j["outer_radius"] = r.outer_radius;
  } else if (method == "spectral") {
    const GridFunction w = spectral_apply(u, s);
    const double h = w.grid.h();
    const double t = (x + w.grid.L()) / h;
    const int j0 = static_cast<int>(std::floor(t));
    if (j0 < 0 || j0 + 1 >= w.grid.N()) throw DomainError("x outside the grid");
    const double a = t - j0;
    j["value"] = num((1.0 - a) * w[j0] + a * w[j0 + 1]);
    j["on_node"] = a == 0.0;
  } else {
    throw DomainError("unknown method " + method);
  }
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_rearrange(const std::string& op, double pivot, const std::string& side) {
  const FunctionData f = parse_function_json(read_stdin());
  const HalfLine sigma{pivot, side == "left" ? Side::left : Side::right};
  if (side != "left" && side != "right") throw DomainError("--side must be left or right");
  std::string out;
  if (const auto* u = std::get_if<PiecewiseLinear>(&f)) {
    if (op == "decreasing") {
      const auto r = decreasing_rearrangement(*u);
      ordered_json j{{"type", "profile"}, {"t", r.output.t}, {"y", r.output.y}, {"max_audit_error", r.max_audit_error()}};
      out = j.dump();
    } else if (op == "spherical") {
      out = function_json(spherical_rearrangement(*u).output);
    } else if (op == "polarize") {
      out = function_json(polarize(*u, sigma));
    } else {
      throw DomainError("unknown op " + op);
    }
  } else {
    const auto& g = std::get<GridFunction>(f);
    if (op == "decreasing") {
      out = function_json(decreasing_rearrangement(g).output);
    } else if (op == "spherical") {
      out = function_json(spherical_rearrangement(g).output);
    } else if (op == "polarize") {
      out = function_json(polarize(g, sigma));
    } else {
      throw DomainError("unknown op " + op);
    }
  }
  std::cout << out << "\n";
  return 0;
}

int cmd_eigen(double sv, const std::string& domain, int J, const std::string& grid_text) {
  const FracOrder s(sv);
  EigenOptions eo;
  eo.J = J;
  if (!grid_text.empty()) {
    const UniformGrid g = parse_grid(grid_text);
    eo.L = g.L();
    eo.N = g.N();
  }
  const EigenResult r = solve_eigen(parse_domain(domain), s, eo);
  ordered_json j;
  j["lambda"] = num(r.lambda_min);
  j["lambda2"] = num(r.lambda2);
  j["gap"] = num(r.gap);
  j["signs"] = to_string(r.signs);
  ordered_json col = ordered_json::array();
  for (std::size_t i = 0; i < r.x.size(); ++i) col.push_back({{"x", r.x[i]}, {"phi", num(r.phi[i])}});
  j["collocation"] = col;
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_green(int n, double sv, const std::string& xs, const std::string& ys) {
  const FracOrder s(sv);
  const Point x = parse_point(xs), y = parse_point(ys);
  if (static_cast<int>(x.size()) != n || static_cast<int>(y.size()) != n) throw DomainError("points must have n coordinates");
  std::cout << kernel_json(boggio_green(n, s, x, y)).dump(2) << "\n";
  return 0;
}

int cmd_maxprinciple(double sv, double dist, int parity, int J) {
  const FracOrder s(sv);
  const TwoBallGeometry geom{1.0, 1.0, dist};
  const double c = geom.d1().mid();
  const auto g = [c](double x) { return bump(x, c - 0.2, 0.5) + 0.5 * bump(x, c + 0.4, 0.3); };
  const MaxPrincipleReport r = antisymmetric_solve_check(geom, s, g, parity, J);
  ordered_json j;
  j["passed"] = r.passed;
  j["parity"] = r.parity;
  j["min_v"] = num(r.min_v);
  j["sup_u"] = num(r.sup_u);
  j["symmetry_error"] = num(r.symmetry_error);
  j["hypothesis_ok"] = r.hypothesis_ok;
  if (!r.hypothesis_ok) j["warning"] = "distance below 2: outside the proven regime";
  std::cout << j.dump(2) << "\n";
  return r.passed ? 0 : 1;
}

int cmd_coneproj(double sv, const std::string& domain, std::uint64_t seed, int trials, int J) {
  const FracOrder s(sv);
  const IntervalUnion om = parse_domain(domain);
  EigenOptions eo;
  eo.J = J;
  const GalerkinSystem sys = assemble(om, s, J, default_grid(om, eo));
  Rng rng(seed);
  const auto cone = random_cone_elements(sys, rng, trials);
  Eigen::VectorXd w(sys.size());
  for (int i = 0; i < w.size(); ++i) w[i] = rng.normal() / (1.0 + 0.25 * (i % J));
  const AppendixReport rep = appendix_suite(sys, w, cone);
  ordered_json checks = ordered_json::array();
  for (const auto& c : rep.checks) {
    checks.push_back({{"name", c.name}, {"relation", c.relation}, {"worst_margin", num(c.worst_margin)},
                      {"slack", num(c.slack)}, {"violations", c.violations}, {"passed", c.passed()}});
  }
  ordered_json j;
  j["s"] = sv;
  j["domain"] = domain;
  j["seed"] = seed;
  j["passed"] = rep.passed();
  j["idempotence_error"] = num(rep.idempotence_error);
  j["kkt_residual"] = num(rep.kkt_residual);
  j["checks"] = checks;
  std::cout << j.dump(2) << "\n";
  return rep.passed() ? 0 : 1;
}

int cmd_run(const std::string& which, const std::string& config_path, std::uint64_t seed, bool seed_given,
            bool quick, const std::string& out_dir) {
  std::map<std::string, std::string> entries;
  if (!config_path.empty()) entries = load_config_file(config_path);
  if (seed_given) entries["seed"] = std::to_string(seed);
  if (quick) entries["quick"] = "true";
  ExperimentConfig base;
  RunAllResult result;
  if (which == "all") {
    result = run_all(base, entries);
  } else {
    const auto& names = experiment_names();
    if (std::find(names.begin(), names.end(), which) == names.end()) throw DomainError("unknown experiment " + which);
    ExperimentConfig cfg = base;
    cfg.name = which;
    apply_config(cfg, entries);
    auto records = run_experiment(which, cfg);
    result.rows.push_back(summarize(which, records));
    result.records[which] = std::move(records);
  }
  if (!out_dir.empty()) write_run_outputs(out_dir, result);
  std::cout << summary_csv(result.rows);
  return result.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fraclab: higher-order fractional Laplacian laboratory"};
  app.require_subcommand(1);
  std::function<int()> action;

  int n = 1, J = 16, parity = 0, trials = 10;
  double s = 0.5, x = 0.0, pivot = 0.0, dist = 2.0;
  std::string method, grid, domain, op, side = "right", xs, ys, input, config, out, which;
  std::uint64_t seed = 42;
  bool quick = false;

  auto* c = app.add_subcommand("constants", "Special-function constants as JSON");
  c->add_option("--n", n)->required();
  c->add_option("--s", s)->required();
  c->callback([&] { action = [&] { return cmd_constants(n, s); }; });

  auto* e = app.add_subcommand("energy", "Energy of function JSON read from stdin");
  e->add_option("--method", method)->required()->check(CLI::IsMember({"spectral", "disjoint", "closed"}));
  e->add_option("--s", s)->required();
  e->add_option("--grid", grid, "L,N");
  e->callback([&] { action = [&] { return cmd_energy(method, s, grid); }; });

  auto* a = app.add_subcommand("apply", "Pointwise (-Delta)^s u(x)");
  a->add_option("--s", s)->required();
  a->add_option("--x", x)->required();
  a->add_option("--method", method)->required()->check(CLI::IsMember({"hyper", "spectral"}));
  a->add_option("--grid", grid, "L,N");
  a->add_option("--input", input, "function JSON file, '-' for stdin; default Gaussian");
  a->callback([&] { action = [&] { return cmd_apply(s, x, method, grid, input); }; });

  auto* r = app.add_subcommand("rearrange", "Rearrangement of function JSON on stdin");
  r->add_option("--op", op)->required()->check(CLI::IsMember({"decreasing", "spherical", "polarize"}));
  r->add_option("--pivot", pivot);
  r->add_option("--side", side)->check(CLI::IsMember({"left", "right"}));
  r->callback([&] { action = [&] { return cmd_rearrange(op, pivot, side); }; });

  auto* g = app.add_subcommand("eigen", "First Dirichlet eigenpair on a union of intervals");
  g->add_option("--s", s)->required();
  g->add_option("--domain", domain)->required();
  g->add_option("--J", J);
  g->add_option("--grid", grid, "L,N");
  g->callback([&] { action = [&] { return cmd_eigen(s, domain, J, grid); }; });

  auto* gr = app.add_subcommand("green", "Green function of the unit ball");
  gr->add_option("--n", n)->required();
  gr->add_option("--s", s)->required();
  gr->add_option("--x", xs, "comma-separated coordinates")->required();
  gr->add_option("--y", ys, "comma-separated coordinates")->required();
  gr->callback([&] { action = [&] { return cmd_green(n, s, xs, ys); }; });

  auto* m = app.add_subcommand("maxprinciple", "Two-ball maximum-principle check");
  m->add_option("--s", s)->required();
  m->add_option("--dist", dist);
  m->add_option("--parity", parity, "data symmetry +1 or -1; 0 picks the default");
  m->add_option("--J", J);
  m->callback([&] { action = [&] { return cmd_maxprinciple(s, dist, parity, J); }; });

  auto* p = app.add_subcommand("coneproj", "Positive-cone projection inequalities");
  p->add_option("--s", s)->required();
  p->add_option("--domain", domain)->default_val("-1,1");
  p->add_option("--seed", seed);
  p->add_option("--trials", trials);
  p->add_option("--J", J);
  p->callback([&] { action = [&] { return cmd_coneproj(s, domain, seed, trials, J); }; });

  auto* run = app.add_subcommand("run", "Run an experiment or all of them");
  run->add_option("experiment", which)->required();
  run->add_option("--config", config);
  auto* seed_opt = run->add_option("--seed", seed);
  run->add_flag("--quick", quick);
  run->add_option("--out", out);
  run->callback([&] { action = [&] { return cmd_run(which, config, seed, seed_opt->count() > 0, quick, out); }; });

  CLI11_PARSE(app, argc, argv);
  try {
    return action();
  } catch (const std::exception& ex) {
    std::cerr << "fraclab: " << ex.what() << "\n";
    return 2;
  }
}
