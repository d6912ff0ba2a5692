#include "fraclab/cone_projection.hpp"

#include <algorithm>
#include <cmath>

#include "fraclab/errors.hpp"

namespace fraclab {

Eigen::MatrixXd cone_constraints(const GalerkinSystem& sys, const ConeOptions& opt) {
  std::vector<double> nodes;
  const auto& parts = sys.domain.intervals();
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (opt.interval >= 0 && static_cast<std::size_t>(opt.interval) != k) continue;
    const Interval I = parts[k];
    for (int i = 0; i < opt.nodes_per_interval; ++i) {
      nodes.push_back(I.a + (I.b - I.a) * (i + 0.5) / opt.nodes_per_interval);
    }
  }
  Eigen::MatrixXd B = sys.basis_matrix(nodes);
  if (opt.interval >= 0) {
    for (int i = 0; i < sys.size(); ++i) {
      if (sys.interval_of(i) != opt.interval) B.col(i).setZero();
    }
  }
  return B;
}

namespace {

// Orthonormal basis of the null space of the rows of A.
Eigen::MatrixXd null_space(const Eigen::MatrixXd& A, int n) {
  if (A.rows() == 0) return Eigen::MatrixXd::Identity(n, n);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(A.transpose());
  const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  return Q.rightCols(n - A.rows());
}

}  // namespace

ConeProjectionProblem project_cone(const Eigen::MatrixXd& S, const Eigen::VectorXd& w,
                                   const Eigen::MatrixXd& B, int max_iterations) {
  const int n = static_cast<int>(S.rows());
  const int m = static_cast<int>(B.rows());
  ConeProjectionProblem P;
  P.w = w;
  P.B = B;
  const Eigen::VectorXd Sw = S * w;
  const double gscale = std::max(Sw.norm(), 1e-300);
  double bscale = 0.0;
  for (int i = 0; i < m; ++i) bscale = std::max(bscale, B.row(i).norm());
  bscale = std::max(bscale, 1e-300);

  const Eigen::VectorXd Bw = B * w;
  const double feas_tol = 1e-12 * bscale * w.norm();
  if (m == 0 || Bw.minCoeff() >= -feas_tol) {
    P.v = w;
    P.multipliers = Eigen::VectorXd::Zero(m);
    P.min_constraint = m ? Bw.minCoeff() : 0.0;
    return P;
  }

  // Least-squares fit of the clipped samples, lifted along nonnegative columns until feasible.
  Eigen::VectorXd v = B.colPivHouseholderQr().solve(Bw.cwiseMax(0.0));
  {
    Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
    for (int j = 0; j < n; ++j) {
      if (B.col(j).minCoeff() >= 0.0 && B.col(j).maxCoeff() > 0.0) d[j] = 1.0;
    }
    const Eigen::VectorXd Bv0 = B * v, Bd = B * d;
    double beta = 0.0;
    bool ok = true;
    for (int i = 0; i < m && ok; ++i) {
      if (Bv0[i] >= 0.0) continue;
      if (Bd[i] <= 0.0) ok = false;
      else beta = std::max(beta, -Bv0[i] / Bd[i]);
    }
    if (ok) v += 1.000001 * beta * d;
    if (!ok || (B * v).minCoeff() < 0.0) v.setZero();
  }

  std::vector<int> W;
  const double step_tol = 1e-13 * bscale;
  for (int it = 1;; ++it) {
    if (it > max_iterations) throw NumericError("project_positive: active-set iteration cap reached");
    P.iterations = it;
    Eigen::MatrixXd BW(static_cast<Eigen::Index>(W.size()), n);
    for (std::size_t r = 0; r < W.size(); ++r) BW.row(r) = B.row(W[r]);
    const Eigen::VectorXd g = S * v - Sw;
    const Eigen::MatrixXd Z = null_space(BW, n);
    Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
    if (Z.cols() > 0) {
      const Eigen::MatrixXd H = Z.transpose() * S * Z;
      p = -Z * H.llt().solve(Z.transpose() * g);
    }
    const double vnorm = std::max(v.norm(), w.norm());
    if (p.norm() <= 1e-13 * std::max(vnorm, 1e-300)) {
      Eigen::VectorXd mu = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(W.size()));
      if (!W.empty()) mu = BW.transpose().colPivHouseholderQr().solve(g);
      int drop = -1;
      // Most negative multiplier; W is sorted, so ties keep the lowest index.
      for (std::size_t r = 0; r < W.size(); ++r) {
        if (mu[r] < -1e-12 * gscale / bscale && (drop < 0 || mu[r] < mu[drop])) drop = static_cast<int>(r);
      }
      if (drop < 0) {
        P.v = v;
        P.active = W;
        P.multipliers = Eigen::VectorXd::Zero(m);
        for (std::size_t r = 0; r < W.size(); ++r) P.multipliers[W[r]] = mu[r];
        break;
      }
      W.erase(W.begin() + drop);
      continue;
    }
    // Ratio test; ties resolved by lowest index.
    double alpha = 1.0;
    int blocking = -1;
    const Eigen::VectorXd Bv = B * v, Bp = B * p;
    for (int i = 0; i < m; ++i) {
      if (std::find(W.begin(), W.end(), i) != W.end()) continue;
      if (Bp[i] < -step_tol * p.norm()) {
        const double a = std::max(0.0, Bv[i]) / -Bp[i];
        if (a < alpha) {
          alpha = a;
          blocking = i;
        }
      }
    }
    v += alpha * p;
    if (blocking >= 0) {
      W.push_back(blocking);
      std::sort(W.begin(), W.end());
    }
  }

  const Eigen::VectorXd Bv = B * P.v;
  P.min_constraint = Bv.minCoeff();
  P.kkt_residual = (S * P.v - Sw - B.transpose() * P.multipliers).norm() / gscale;
  double slack = 0.0;
  for (int i = 0; i < m; ++i) slack = std::max(slack, std::fabs(P.multipliers[i] * Bv[i]));
  P.slackness_residual = slack / (gscale * std::max(P.v.norm(), 1e-300));
  return P;
}

ConeProjectionProblem project_positive(const GalerkinSystem& sys, const Eigen::VectorXd& w,
                                       const ConeOptions& opt) {
  if (w.size() != sys.size()) throw DomainError("project_positive: coefficient size mismatch");
  if (opt.interval < 0) return project_cone(sys.S, w, cone_constraints(sys, opt), opt.max_iterations);

  // Solve inside the coordinates of one interval.
  std::vector<int> idx;
  for (int i = 0; i < sys.size(); ++i) {
    if (sys.interval_of(i) == opt.interval) idx.push_back(i);
  }
  if (idx.empty()) throw DomainError("project_positive: interval index out of range");
  const int k = static_cast<int>(idx.size());
  const Eigen::MatrixXd Bfull = cone_constraints(sys, opt);
  Eigen::MatrixXd S(k, k), B(Bfull.rows(), k);
  Eigen::VectorXd wk(k);
  for (int a = 0; a < k; ++a) {
    wk[a] = w[idx[a]];
    B.col(a) = Bfull.col(idx[a]);
    for (int b = 0; b < k; ++b) S(a, b) = sys.S(idx[a], idx[b]);
  }
  ConeProjectionProblem sub = project_cone(S, wk, B, opt.max_iterations);
  ConeProjectionProblem P = sub;
  P.w = sys.restrict_to(w, static_cast<std::size_t>(opt.interval));
  P.v = Eigen::VectorXd::Zero(sys.size());
  for (int a = 0; a < k; ++a) P.v[idx[a]] = sub.v[a];
  P.B = Bfull;
  return P;
}

ConeProjectionProblem project_negative(const GalerkinSystem& sys, const Eigen::VectorXd& w,
                                       const ConeOptions& opt) {
  ConeProjectionProblem P = project_positive(sys, -w, opt);
  P.w = -P.w;
  P.v = -P.v;
  return P;
}

std::vector<Eigen::VectorXd> random_cone_elements(const GalerkinSystem& sys, Rng& rng, int count,
                                                  const ConeOptions& opt) {
  std::vector<Eigen::VectorXd> out;
  const int n = sys.size();
  auto random_vec = [&]() {
    Eigen::VectorXd r(n);
    for (int i = 0; i < n; ++i) r[i] = rng.normal() / (1.0 + 0.25 * (i % sys.J));
    return r;
  };
  for (int t = 0; t < count; ++t) {
    if (t < 2 || out.size() < 2 || t % 2 == 0) {
      Eigen::VectorXd v = project_positive(sys, random_vec(), opt).v;
      out.push_back(v * rng.uniform(0.1, 3.0));
    } else {
      const std::size_t i = rng.uniform_int(0, static_cast<int>(out.size()) - 1);
      const std::size_t j = rng.uniform_int(0, static_cast<int>(out.size()) - 1);
      out.push_back(rng.uniform(0.0, 2.0) * out[i] + rng.uniform(0.0, 2.0) * out[j]);
    }
  }
  return out;
}

bool AppendixReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const InequalityCheck& c) { return c.passed(); });
}

AppendixReport appendix_suite(const GalerkinSystem& sys, const Eigen::VectorXd& w,
                              const std::vector<Eigen::VectorXd>& trials, const ConeOptions& opt) {
  const ConeProjectionProblem P = project_positive(sys, w, opt);
  const Eigen::VectorXd& a = P.v;
  auto E = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& y) { return sys.energy(x, y); };
  const double Eww = E(w, w);

  AppendixReport rep;
  rep.kkt_residual = P.kkt_residual;
  const Eigen::VectorXd aa = project_positive(sys, a, opt).v;
  rep.idempotence_error = std::sqrt(std::max(0.0, E(aa - a, aa - a)) / std::max(E(a, a), 1e-300));

  auto record = [](InequalityCheck& c, double margin, double slack) {
    c.slack = std::max(c.slack, slack);
    if (margin < c.worst_margin || c.violations == 0) c.worst_margin = std::min(c.worst_margin, margin);
    if (margin < -slack) ++c.violations;
  };
  InequalityCheck chr{"char", "E(w - pi w, v - pi w) <= 0"};
  InequalityCheck ppp{"ppp", "0 <= E(pi w - w, v)"};
  InequalityCheck test0{"test0", "E(pi w - w, pi w) = 0"};
  InequalityCheck test1{"test1", "E(w, pi w) <= E(w, w)"};
  InequalityCheck upward{"upward", "E(w, v) <= E(pi w, v)"};
  InequalityCheck down1{"downward1", "E(pi w, pi w) <= E(w, w)"};
  InequalityCheck down2{"downward2", "E(2 pi w - w, 2 pi w - w) <= E(w, w)"};
  for (InequalityCheck* c : {&chr, &ppp, &test0, &test1, &upward, &down1, &down2}) c->worst_margin = INFINITY;

  const double base = 1e-7 * std::max({1.0, Eww, E(a, a)});
  const double t0 = E(a - w, a);
  record(test0, -std::fabs(t0), base);
  record(test1, Eww - E(w, a), base);
  record(down1, Eww - E(a, a), base);
  const Eigen::VectorXd r = 2.0 * a - w;
  record(down2, Eww - E(r, r), base);
  for (const Eigen::VectorXd& v : trials) {
    const double slack = 1e-7 * std::max({1.0, Eww, E(v, v)});
    record(chr, -E(w - a, v - a), slack);
    record(ppp, E(a - w, v), slack);
    record(upward, E(a, v) - E(w, v), slack);
  }
  rep.checks = {chr, ppp, test0, test1, upward, down1, down2};
  for (auto& c : rep.checks) {
    if (!std::isfinite(c.worst_margin)) c.worst_margin = 0.0;
  }
  return rep;
}

ProjectionComparison projection_comparison(const GalerkinSystem& sys, const Eigen::VectorXd& phi,
                                           std::vector<int> signs, const ConeOptions& opt) {
  const std::size_t K = sys.domain.intervals().size();
  if (signs.empty()) {
    for (std::size_t k = 0; k < K; ++k) signs.push_back(sys.order.even_floor() || k % 2 == 0 ? 1 : -1);
  }
  if (signs.size() != K) throw DomainError("projection_comparison: one sign per interval required");
  ProjectionComparison out;
  out.cone_signs = signs;
  out.tilde = Eigen::VectorXd::Zero(sys.size());
  for (std::size_t k = 0; k < K; ++k) {
    ConeOptions o = opt;
    o.interval = static_cast<int>(k);
    const Eigen::VectorXd phik = sys.restrict_to(phi, k);
    const Eigen::VectorXd pk = signs[k] > 0 ? project_positive(sys, phik, o).v : project_negative(sys, phik, o).v;
    out.tilde += 2.0 * pk - phik;
  }
  out.l2_phi = std::sqrt(sys.l2(phi, phi));
  out.l2_tilde = std::sqrt(sys.l2(out.tilde, out.tilde));
  out.energy_phi = sys.energy(phi, phi);
  out.energy_tilde = sys.energy(out.tilde, out.tilde);
  return out;
}

}  // namespace fraclab
